use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bitext_prospector::ablation::Condition;
use bitext_prospector::pipeline::{self, load_config, Overrides, PipelineError};

#[derive(Parser)]
#[command(
    name = "bitext-prospector",
    version,
    about = "Detect incidental bilingualism in a pretraining corpus, mine translation pairs, and build ablation mixtures"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Stage,
}

#[derive(Args)]
struct Common {
    /// TOML config file; every setting has a default when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory the stage artifacts live in.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for ablation sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Contiguous shards the instance stream is split into; results are
    /// identical for any count.
    #[arg(long, global = true)]
    shards: Option<usize>,
    /// Worker threads; 0 means one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Stage {
    /// Pack documents into fixed-width examples and split out instances.
    Pack(PackArgs),
    /// Tag every token and detect bilingual instances.
    Detect(DetectArgs),
    /// Mine sentence-level translation pairs from the bilingual instances.
    Mine(MineArgs),
    /// Extract and classify natural translation prompts around mined pairs.
    Prompts,
    /// Fold annotations and pairs into the per-language tally.
    Stats,
    /// Sample the ablation training mixtures.
    Ablate(AblateArgs),
    /// Render CSV/JSON/SVG reports from the tally.
    Report,
    /// Run every stage in order.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct PackArgs {
    /// Document JSONL to pack; `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Tokens per packed example.
    #[arg(long)]
    example_len: Option<usize>,
}

#[derive(Args)]
struct DetectArgs {
    /// Minimum contiguous English run.
    #[arg(long)]
    n_english: Option<usize>,
    /// Minimum contiguous run for every other language.
    #[arg(long)]
    n_other: Option<usize>,
    /// Maximum tolerated fraction of undefined tokens.
    #[arg(long)]
    undefined_max: Option<f64>,
}

#[derive(Args)]
struct MineArgs {
    /// Cosine-distance acceptance threshold, in (0, 2).
    #[arg(long)]
    threshold: Option<f64>,
    /// Alignment TSV for the fixture embedder.
    #[arg(long)]
    alignments: Option<PathBuf>,
}

#[derive(Args)]
struct AblateArgs {
    /// Conditions to sample: full, minus_tra, minus_bil, minus_nen.
    #[arg(long, value_delimiter = ',')]
    condition: Vec<String>,
    /// Examples per condition.
    #[arg(long)]
    target: Option<u64>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    pack: PackArgs,
    #[command(flatten)]
    detect: DetectArgs,
    #[command(flatten)]
    mine: MineArgs,
    #[command(flatten)]
    ablate: AblateArgs,
}

fn parse_conditions(names: &[String]) -> Result<Option<Vec<Condition>>, PipelineError> {
    if names.is_empty() {
        return Ok(None);
    }
    names
        .iter()
        .map(|name| {
            serde_json::from_value(serde_json::Value::String(name.clone())).map_err(|_| {
                PipelineError::Config(format!(
                    "unknown condition {name:?}; use full, minus_tra, minus_bil or minus_nen"
                ))
            })
        })
        .collect::<Result<Vec<Condition>, _>>()
        .map(Some)
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let mut overrides = Overrides {
        seed: cli.common.seed,
        shards: cli.common.shards,
        workers: cli.common.workers,
        out: cli.common.out.clone(),
        ..Overrides::default()
    };
    let config = cli.common.config.as_deref();
    match cli.command {
        Stage::Pack(args) => {
            overrides.input = args.input;
            overrides.example_len = args.example_len;
            pipeline::run_pack(&load_config(config, &overrides)?)
        }
        Stage::Detect(args) => {
            overrides.english_n = args.n_english;
            overrides.other_n = args.n_other;
            overrides.undefined_max = args.undefined_max;
            pipeline::run_detect(&load_config(config, &overrides)?)
        }
        Stage::Mine(args) => {
            overrides.threshold = args.threshold;
            overrides.alignments = args.alignments;
            pipeline::run_mine(&load_config(config, &overrides)?)
        }
        Stage::Prompts => pipeline::run_prompts(&load_config(config, &overrides)?),
        Stage::Stats => pipeline::run_stats(&load_config(config, &overrides)?),
        Stage::Ablate(args) => {
            overrides.target_total = args.target;
            overrides.conditions = parse_conditions(&args.condition)?;
            pipeline::run_ablate(&load_config(config, &overrides)?)
        }
        Stage::Report => pipeline::run_report(&load_config(config, &overrides)?),
        Stage::Pipeline(args) => {
            overrides.input = args.pack.input;
            overrides.example_len = args.pack.example_len;
            overrides.english_n = args.detect.n_english;
            overrides.other_n = args.detect.n_other;
            overrides.undefined_max = args.detect.undefined_max;
            overrides.threshold = args.mine.threshold;
            overrides.alignments = args.mine.alignments;
            overrides.target_total = args.ablate.target;
            overrides.conditions = parse_conditions(&args.ablate.condition)?;
            pipeline::run_pipeline(&load_config(config, &overrides)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::default().filter_or("BITEXT_PROSPECTOR_LOG", "info"),
    )
    .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
