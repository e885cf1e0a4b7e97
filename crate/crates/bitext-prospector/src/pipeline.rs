//! File-based orchestration of the full run: every stage reads and writes
//! JSONL/JSON artifacts in one output directory, so stages can be run
//! individually, resumed, or chained end to end. Each stage leaves a
//! manifest with content digests of everything it consumed and produced.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ablation::{
    build_condition, pack_groups, partition, write_manifest_jsonl, AblationPlan, Condition,
    GroupLabel,
};
use crate::corpus::{
    pack_items, split_instances, DefaultTokenizer, Document, Instance, PackItem, SkippedDoc,
};
use crate::detector::{detect, BilingualAnnotation, FocusPolicy, RunThresholds, Verdict};
use crate::filters::FilterConfig;
use crate::langid::{Lang, Tagger};
use crate::miner::{
    build_pools, is_translation_instance, mine_pairs, FixtureEmbedder, SentenceEmbedder,
    SentenceSplitter, ServiceEmbedder, TranslationPair,
};
use crate::prompts::{
    aggregate_prompts, classify_prompt, extract_prefixes, PromptCounts, PromptLexicon,
    PromptRecord, PromptType,
};
use crate::stats::report::{emit_report, ReportFormats};
use crate::stats::{ResourceGroup, ResourceGrouping, Tally};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("failed to {action} {path}: {source}")]
    Io { action: &'static str, path: String, source: io::Error },
    #[error("missing artifact {path}; run the `{stage}` stage first")]
    MissingArtifact { path: String, stage: &'static str },
    #[error("stage {stage} degraded on {failed} of {total} units; first: {first}")]
    Partial { stage: &'static str, failed: usize, total: usize, first: String },
}

impl PipelineError {
    /// Process exit code: 2 for configuration errors, 3 for bad or missing
    /// data, 4 when a stage completed but lost some units along the way.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Data(_)
            | PipelineError::Io { .. }
            | PipelineError::MissingArtifact { .. } => 3,
            PipelineError::Partial { .. } => 4,
        }
    }
}

fn io_err<'p>(action: &'static str, path: &'p Path) -> impl FnOnce(io::Error) -> PipelineError + 'p {
    move |source| PipelineError::Io { action, path: path.display().to_string(), source }
}

/// Full run configuration. Every field has a default, so an empty TOML file
/// (or none at all) is a valid config; unknown keys are rejected at every
/// level to catch typos early.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Contiguous slices the instance stream is split into for parallel
    /// detection; results are identical for any shard count.
    pub shards: usize,
    /// Worker threads; 0 means one per core.
    pub workers: usize,
    pub out: PathBuf,
    pub corpus: CorpusConfig,
    pub languages: LanguageConfig,
    pub detector: RunThresholds,
    pub miner: MinerConfig,
    pub filters: FilterConfig,
    pub prompts: PromptsConfig,
    pub stats: StatsConfig,
    pub ablation: AblationConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            shards: 1,
            workers: 0,
            out: PathBuf::from("out"),
            corpus: CorpusConfig::default(),
            languages: LanguageConfig::default(),
            detector: RunThresholds::default(),
            miner: MinerConfig::default(),
            filters: FilterConfig::default(),
            prompts: PromptsConfig::default(),
            stats: StatsConfig::default(),
            ablation: AblationConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    /// JSONL of documents, or `-` for stdin.
    pub input: PathBuf,
    pub example_len: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { input: PathBuf::from("docs.jsonl"), example_len: 2048 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LanguageConfig {
    pub anchor: Lang,
    /// Focus set; empty means every supported language.
    pub focus: Vec<Lang>,
}

impl Default for LanguageConfig {
    fn default() -> Self {
        LanguageConfig { anchor: Lang::En, focus: Vec::new() }
    }
}

impl LanguageConfig {
    pub fn policy(&self) -> FocusPolicy {
        let languages = if self.focus.is_empty() {
            Lang::ALL.into_iter().collect()
        } else {
            self.focus.iter().copied().collect()
        };
        FocusPolicy { languages, anchor: self.anchor }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedderKind {
    /// Deterministic built-in embedder; optional alignment TSV pins known
    /// translation pairs to near-zero distance.
    Fixture,
    /// External process speaking line-delimited JSON on stdin/stdout.
    Service,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinerConfig {
    /// Cosine-distance acceptance threshold, in (0, 2).
    pub threshold: f64,
    pub embedder: EmbedderKind,
    pub embedding_dim: usize,
    /// TSV of `text<TAB>translation` lines for the fixture embedder.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alignments: Option<PathBuf>,
    /// Command line for the service embedder, program first.
    pub service_command: Vec<String>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            threshold: 0.6,
            embedder: EmbedderKind::Fixture,
            embedding_dim: FixtureEmbedder::DEFAULT_DIM,
            alignments: None,
            service_command: Vec::new(),
        }
    }
}

impl MinerConfig {
    fn build_embedder(&self) -> Result<Box<dyn SentenceEmbedder>, PipelineError> {
        match self.embedder {
            EmbedderKind::Fixture => {
                let mut embedder = FixtureEmbedder::new(self.embedding_dim);
                if let Some(path) = &self.alignments {
                    let n = embedder
                        .load_alignments(path)
                        .map_err(|e| PipelineError::Data(e.to_string()))?;
                    log::info!("loaded {n} alignment pairs from {}", path.display());
                }
                Ok(Box::new(embedder))
            }
            EmbedderKind::Service => {
                let (program, args) = self.service_command.split_first().ok_or_else(|| {
                    PipelineError::Config("miner.service_command is empty".into())
                })?;
                let mut command = Command::new(program);
                command.args(args);
                let embedder = ServiceEmbedder::spawn(&mut command, self.embedding_dim)
                    .map_err(|e| PipelineError::Data(e.to_string()))?;
                Ok(Box::new(embedder))
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PromptsConfig {
    /// Alternative prompt lexicon; the built-in one otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    pub grouping: ResourceGrouping,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AblationConfig {
    /// Examples per condition.
    pub target_total: u64,
    pub conditions: Vec<Condition>,
}

impl Default for AblationConfig {
    fn default() -> Self {
        AblationConfig { target_total: 10_000, conditions: Condition::ALL.to_vec() }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        if self.shards == 0 {
            return bad("shards must be at least 1".into());
        }
        if self.corpus.example_len == 0 {
            return bad("corpus.example_len must be positive".into());
        }
        if let Err(e) = self.languages.policy().validate() {
            return bad(e.to_string());
        }
        if let Err(e) = self.detector.validate() {
            return bad(e.to_string());
        }
        if !(self.miner.threshold > 0.0 && self.miner.threshold < 2.0) {
            return bad(format!("miner.threshold {} must lie in (0, 2)", self.miner.threshold));
        }
        if self.miner.embedding_dim < 8 {
            return bad(format!(
                "miner.embedding_dim {} must be at least 8",
                self.miner.embedding_dim
            ));
        }
        if self.miner.embedder == EmbedderKind::Service && self.miner.service_command.is_empty() {
            return bad("miner.embedder = \"service\" needs miner.service_command".into());
        }
        if let Err(e) = self.filters.validate() {
            return bad(e.to_string());
        }
        if let Err(e) = self.stats.grouping.validate() {
            return bad(e);
        }
        if self.ablation.target_total == 0 {
            return bad("ablation.target_total must be positive".into());
        }
        if self.ablation.conditions.is_empty() {
            return bad("ablation.conditions must name at least one condition".into());
        }
        let mut seen = BTreeSet::new();
        for condition in &self.ablation.conditions {
            if !seen.insert(condition.label()) {
                return bad(format!("ablation.conditions repeats {}", condition.label()));
            }
        }
        Ok(())
    }

    /// Digest of the whole configuration; artifacts carry it so tallies from
    /// different runs never merge silently.
    pub fn run_id(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex(&digest)[..16].to_string()
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shards: Option<usize>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub example_len: Option<usize>,
    pub english_n: Option<usize>,
    pub other_n: Option<usize>,
    pub undefined_max: Option<f64>,
    pub threshold: Option<f64>,
    pub alignments: Option<PathBuf>,
    pub target_total: Option<u64>,
    pub conditions: Option<Vec<Condition>>,
}

impl Overrides {
    fn apply(&self, cfg: &mut PipelineConfig) {
        macro_rules! set {
            ($field:expr, $target:expr) => {
                if let Some(value) = &$field {
                    $target = value.clone();
                }
            };
        }
        set!(self.seed, cfg.seed);
        set!(self.shards, cfg.shards);
        set!(self.workers, cfg.workers);
        set!(self.out, cfg.out);
        set!(self.input, cfg.corpus.input);
        set!(self.example_len, cfg.corpus.example_len);
        set!(self.english_n, cfg.detector.english_n);
        set!(self.other_n, cfg.detector.other_n);
        set!(self.undefined_max, cfg.detector.undefined_max);
        set!(self.threshold, cfg.miner.threshold);
        if let Some(path) = &self.alignments {
            cfg.miner.alignments = Some(path.clone());
        }
        set!(self.target_total, cfg.ablation.target_total);
        set!(self.conditions, cfg.ablation.conditions);
    }
}

/// Read the config file (defaults when `path` is `None`), apply overrides,
/// validate.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = match path {
        None => PipelineConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err("read", path))?;
            toml::from_str(&text)
                .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?
        }
    };
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

/// Artifact paths inside one output directory.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub dir: PathBuf,
}

impl Artifacts {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Artifacts { dir: dir.into() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn examples(&self) -> PathBuf {
        self.path("examples.jsonl")
    }

    pub fn instances(&self) -> PathBuf {
        self.path("instances.jsonl")
    }

    pub fn pack_report(&self) -> PathBuf {
        self.path("pack_report.json")
    }

    pub fn annotations(&self) -> PathBuf {
        self.path("annotations.jsonl")
    }

    pub fn pairs(&self) -> PathBuf {
        self.path("pairs.jsonl")
    }

    pub fn pairs_tsv(&self) -> PathBuf {
        self.path("pairs.tsv")
    }

    pub fn rejected_pairs_tsv(&self) -> PathBuf {
        self.path("rejected_pairs.tsv")
    }

    pub fn mine_report(&self) -> PathBuf {
        self.path("mine_report.json")
    }

    pub fn prompt_records(&self) -> PathBuf {
        self.path("prompt_records.jsonl")
    }

    pub fn prompt_counts(&self) -> PathBuf {
        self.path("prompt_counts.csv")
    }

    pub fn prompt_summary(&self) -> PathBuf {
        self.path("prompt_summary.json")
    }

    pub fn tally(&self) -> PathBuf {
        self.path("tally.json")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.path("report")
    }

    pub fn ablation_dir(&self) -> PathBuf {
        self.path("ablation")
    }

    pub fn manifest(&self, stage: &str) -> PathBuf {
        self.path(&format!("manifest.{stage}.json"))
    }
}

/// What one stage consumed and produced, with SHA-256 content digests.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageManifest {
    pub stage: String,
    pub run_id: String,
    pub tool_version: String,
    pub created_unix: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn file_digest(path: &Path) -> Result<String, PipelineError> {
    let file = File::open(path).map_err(io_err("open", path))?;
    let mut reader = BufReader::with_capacity(1 << 16, file);
    let mut hasher = Sha256::new();
    loop {
        let chunk = reader.fill_buf().map_err(io_err("read", path))?;
        if chunk.is_empty() {
            break;
        }
        hasher.update(chunk);
        let n = chunk.len();
        reader.consume(n);
    }
    Ok(hex(&hasher.finalize()))
}

fn artifact_name(path: &Path) -> String {
    path.file_name()
        .map(|name| name.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_stage_manifest(
    arts: &Artifacts,
    run_id: &str,
    stage: &'static str,
    inputs: &[PathBuf],
    outputs: &[PathBuf],
    warnings: Vec<String>,
) -> Result<(), PipelineError> {
    let mut manifest = StageManifest {
        stage: stage.to_string(),
        run_id: run_id.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        inputs: BTreeMap::new(),
        outputs: BTreeMap::new(),
        warnings,
    };
    for path in inputs {
        manifest.inputs.insert(artifact_name(path), file_digest(path)?);
    }
    for path in outputs {
        manifest.outputs.insert(artifact_name(path), file_digest(path)?);
    }
    write_json_pretty(&arts.manifest(stage), &manifest)
}

/// Parse a JSONL document stream; `-` reads stdin.
pub fn read_documents(input: &Path) -> Result<Vec<Document>, PipelineError> {
    if input == Path::new("-") {
        let stdin = io::stdin();
        return parse_documents(stdin.lock(), "<stdin>");
    }
    let file = File::open(input).map_err(io_err("open", input))?;
    parse_documents(BufReader::new(file), &input.display().to_string())
}

fn parse_documents(reader: impl BufRead, name: &str) -> Result<Vec<Document>, PipelineError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| PipelineError::Data(format!("{name}:{}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc = serde_json::from_str(&line)
            .map_err(|e| PipelineError::Data(format!("{name}:{}: {e}", i + 1)))?;
        docs.push(doc);
    }
    Ok(docs)
}

fn read_artifact<T: DeserializeOwned>(
    path: &Path,
    producer: &'static str,
) -> Result<Vec<T>, PipelineError> {
    let file = match File::open(path) {
        Ok(file) => file,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return Err(PipelineError::MissingArtifact {
                path: path.display().to_string(),
                stage: producer,
            })
        }
        Err(e) => return Err(io_err("open", path)(e)),
    };
    let reader = BufReader::new(file);
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err("read", path))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|e| PipelineError::Data(format!("{}:{}: {e}", path.display(), i + 1)))?;
        items.push(item);
    }
    Ok(items)
}

fn read_json_artifact<T: DeserializeOwned>(
    path: &Path,
    producer: &'static str,
) -> Result<T, PipelineError> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return Err(PipelineError::MissingArtifact {
                path: path.display().to_string(),
                stage: producer,
            })
        }
        Err(e) => return Err(io_err("read", path)(e)),
    };
    serde_json::from_str(&text)
        .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), PipelineError> {
    let file = File::create(path).map_err(io_err("create", path))?;
    let mut writer = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut writer, item)
            .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
        writer.write_all(b"\n").map_err(io_err("write", path))?;
    }
    writer.flush().map_err(io_err("write", path))
}

fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
    fs::write(path, text + "\n").map_err(io_err("write", path))
}

fn write_text(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(io_err("write", path))
}

/// Split `0..n` into exactly `shards` contiguous ranges whose lengths differ
/// by at most one; trailing ranges may be empty.
pub fn shard_ranges(n: usize, shards: usize) -> Vec<std::ops::Range<usize>> {
    let shards = shards.max(1);
    let base = n / shards;
    let rem = n % shards;
    let mut ranges = Vec::with_capacity(shards);
    let mut start = 0;
    for i in 0..shards {
        let len = base + usize::from(i < rem);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, PipelineError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::Config(format!("workers: {e}")))
}

/// Stable per-condition sampling seed: FNV-1a of the condition label, folded
/// with the run seed.
fn mix_seed(seed: u64, label: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for byte in label.bytes() {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed
}

/// Pack the input documents into fixed-width examples and split them back
/// into instances. Writes `examples.jsonl`, `instances.jsonl`,
/// `pack_report.json`.
pub fn run_pack(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    fs::create_dir_all(&arts.dir).map_err(io_err("create", &arts.dir))?;
    let docs = read_documents(&cfg.corpus.input)?;
    log::info!("packing {} documents at width {}", docs.len(), cfg.corpus.example_len);
    let pool = thread_pool(cfg.workers)?;
    let tokenizer = DefaultTokenizer;
    let items: Vec<Result<PackItem, SkippedDoc>> = pool.install(|| {
        docs.into_par_iter()
            .map(|doc| {
                let id = doc.id.clone();
                PackItem::from_document(doc, &tokenizer)
                    .map_err(|e| SkippedDoc { id, reason: e.to_string() })
            })
            .collect()
    });
    let output = pack_items(items, cfg.corpus.example_len)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let instances: Vec<Instance> = output.examples.iter().flat_map(split_instances).collect();
    log::info!(
        "packed {} examples / {} instances ({} tokens)",
        output.report.examples,
        output.report.instances,
        output.report.tokens
    );
    write_jsonl(&arts.examples(), &output.examples)?;
    write_jsonl(&arts.instances(), &instances)?;
    write_json_pretty(&arts.pack_report(), &output.report)?;
    let warnings = output
        .report
        .skipped
        .iter()
        .map(|skip| format!("skipped document {}: {}", skip.id, skip.reason))
        .collect();
    let inputs: Vec<PathBuf> = if cfg.corpus.input == Path::new("-") {
        Vec::new()
    } else {
        vec![cfg.corpus.input.clone()]
    };
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "pack",
        &inputs,
        &[arts.examples(), arts.instances(), arts.pack_report()],
        warnings,
    )
}

/// Tag every instance and run bilingual detection. Writes
/// `annotations.jsonl`, one annotation per instance in instance order,
/// whatever the shard count.
pub fn run_detect(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let instances: Vec<Instance> = read_artifact(&arts.instances(), "pack")?;
    let policy = cfg.languages.policy();
    let thresholds = cfg.detector;
    let tagger = Tagger::builtin();
    let pool = thread_pool(cfg.workers)?;
    let ranges = shard_ranges(instances.len(), cfg.shards);
    let shards: Vec<Vec<BilingualAnnotation>> = pool.install(|| {
        ranges
            .into_par_iter()
            .map(|range| {
                instances[range]
                    .iter()
                    .map(|instance| {
                        if instance.tokens.is_empty() {
                            return Err(PipelineError::Data(format!(
                                "instance {} has no tokens",
                                instance.id
                            )));
                        }
                        let tags = tagger.tag_instance(instance);
                        Ok(detect(&tags, &thresholds, &policy))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let annotations: Vec<BilingualAnnotation> = shards.into_iter().flatten().collect();
    let bilingual = annotations.iter().filter(|a| a.verdict == Verdict::Bilingual).count();
    log::info!("detected {bilingual} bilingual of {} instances", annotations.len());
    write_jsonl(&arts.annotations(), &annotations)?;
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "detect",
        &[arts.instances()],
        &[arts.annotations()],
        Vec::new(),
    )
}

/// Mining result for one bilingual instance, as stored in `pairs.jsonl`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinedInstance {
    pub instance: String,
    /// Sentences the embedder failed on.
    pub skipped: usize,
    pub pairs: Vec<TranslationPair>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MineReport {
    pub bilingual_instances: u64,
    pub translation_instances: u64,
    pub candidate_pairs: u64,
    pub accepted_pairs: u64,
    pub skipped_sentences: u64,
    pub degraded_instances: u64,
}

const PAIR_TSV_HEADER: &str =
    "instance\tembedded_lang\tprimary_lang\tdistance\tflags\tembedded_text\tprimary_text\n";

fn sanitize_tsv(text: &str) -> String {
    text.chars().map(|c| if matches!(c, '\t' | '\n' | '\r') { ' ' } else { c }).collect()
}

fn pair_tsv_row(instance: &str, pair: &TranslationPair) -> String {
    format!(
        "{}\t{}\t{}\t{:.6}\t{}\t{}\t{}\n",
        instance,
        pair.embedded.language.code(),
        pair.primary.language.code(),
        pair.distance,
        pair.verdicts.flag_string(),
        sanitize_tsv(&pair.embedded.text),
        sanitize_tsv(&pair.primary.text),
    )
}

fn check_parallel(
    instances: &[Instance],
    annotations: &[BilingualAnnotation],
) -> Result<(), PipelineError> {
    if instances.len() != annotations.len() {
        return Err(PipelineError::Data(format!(
            "instances.jsonl has {} rows but annotations.jsonl has {}; re-run detect",
            instances.len(),
            annotations.len()
        )));
    }
    for (instance, annotation) in instances.iter().zip(annotations) {
        if instance.id != annotation.instance {
            return Err(PipelineError::Data(format!(
                "annotation for {} does not match instance {}; re-run detect",
                annotation.instance, instance.id
            )));
        }
    }
    Ok(())
}

/// Mine sentence-level translation pairs out of every bilingual instance.
/// Writes `pairs.jsonl` (full audit), `pairs.tsv` (accepted),
/// `rejected_pairs.tsv`, `mine_report.json`. Instances whose sentences the
/// embedder failed on are kept with what survived and reported as a partial
/// failure once all artifacts are on disk.
pub fn run_mine(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let instances: Vec<Instance> = read_artifact(&arts.instances(), "pack")?;
    let annotations: Vec<BilingualAnnotation> = read_artifact(&arts.annotations(), "detect")?;
    check_parallel(&instances, &annotations)?;
    let embedder = cfg.miner.build_embedder()?;
    let splitter = SentenceSplitter::builtin();
    let tagger = Tagger::builtin();
    let bilingual: Vec<usize> = annotations
        .iter()
        .enumerate()
        .filter(|(_, a)| a.verdict == Verdict::Bilingual)
        .map(|(i, _)| i)
        .collect();
    log::info!("mining {} bilingual instances", bilingual.len());
    let pool = thread_pool(cfg.workers)?;
    let mined: Vec<MinedInstance> = pool.install(|| {
        bilingual
            .par_iter()
            .map(|&i| {
                let instance = &instances[i];
                let tags = tagger.tag_instance(instance);
                let pools = build_pools(instance, &tags, &annotations[i], &splitter)
                    .map_err(|e| PipelineError::Data(e.to_string()))?;
                let outcome =
                    mine_pairs(&pools, embedder.as_ref(), cfg.miner.threshold, &cfg.filters, &tagger)
                        .map_err(|e| PipelineError::Data(e.to_string()))?;
                Ok(MinedInstance {
                    instance: instance.id.clone(),
                    skipped: outcome.skipped,
                    pairs: outcome.pairs,
                })
            })
            .collect::<Result<Vec<_>, PipelineError>>()
    })?;
    let mut accepted_tsv = String::from(PAIR_TSV_HEADER);
    let mut rejected_tsv = String::from(PAIR_TSV_HEADER);
    let mut report = MineReport { bilingual_instances: bilingual.len() as u64, ..Default::default() };
    for m in &mined {
        report.skipped_sentences += m.skipped as u64;
        report.degraded_instances += u64::from(m.skipped > 0);
        report.translation_instances += u64::from(is_translation_instance(&m.pairs));
        for pair in &m.pairs {
            report.candidate_pairs += 1;
            if pair.accepted {
                report.accepted_pairs += 1;
                accepted_tsv.push_str(&pair_tsv_row(&m.instance, pair));
            } else {
                rejected_tsv.push_str(&pair_tsv_row(&m.instance, pair));
            }
        }
    }
    log::info!(
        "mined {} accepted of {} candidate pairs across {} translation instances",
        report.accepted_pairs,
        report.candidate_pairs,
        report.translation_instances
    );
    write_jsonl(&arts.pairs(), &mined)?;
    write_text(&arts.pairs_tsv(), &accepted_tsv)?;
    write_text(&arts.rejected_pairs_tsv(), &rejected_tsv)?;
    write_json_pretty(&arts.mine_report(), &report)?;
    let warnings = mined
        .iter()
        .filter(|m| m.skipped > 0)
        .map(|m| format!("instance {}: embedder failed on {} sentences", m.instance, m.skipped))
        .collect();
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "mine",
        &[arts.instances(), arts.annotations()],
        &[arts.pairs(), arts.pairs_tsv(), arts.rejected_pairs_tsv(), arts.mine_report()],
        warnings,
    )?;
    if report.degraded_instances > 0 {
        let first = mined
            .iter()
            .find(|m| m.skipped > 0)
            .map(|m| format!("instance {}: {} sentences skipped", m.instance, m.skipped))
            .unwrap_or_default();
        return Err(PipelineError::Partial {
            stage: "mine",
            failed: report.degraded_instances as usize,
            total: bilingual.len(),
            first,
        });
    }
    Ok(())
}

/// A discovered prompt prefix with its classification, as stored in
/// `prompt_records.jsonl`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifiedPrompt {
    #[serde(flatten)]
    pub record: PromptRecord,
    pub prompt_type: PromptType,
}

fn prompt_counts_csv(counts: &PromptCounts) -> String {
    let mut out = String::from("language,group,type,count\n");
    for (lang, row) in &counts.by_language {
        let group = ResourceGroup::of(*lang).map(|g| g.label()).unwrap_or("-");
        for ty in PromptType::ALL {
            out.push_str(&format!("{},{},{},{}\n", lang.code(), group, ty.label(), row[ty.index()]));
        }
    }
    for (group, row) in &counts.by_group {
        for ty in PromptType::ALL {
            out.push_str(&format!("all,{},{},{}\n", group.label(), ty.label(), row[ty.index()]));
        }
    }
    for ty in PromptType::ALL {
        out.push_str(&format!("all,all,{},{}\n", ty.label(), counts.total[ty.index()]));
    }
    out
}

/// Extract and classify natural prompt prefixes around the accepted pairs.
/// Writes `prompt_records.jsonl`, `prompt_counts.csv`, `prompt_summary.json`.
pub fn run_prompts(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let instances: Vec<Instance> = read_artifact(&arts.instances(), "pack")?;
    let mined: Vec<MinedInstance> = read_artifact(&arts.pairs(), "mine")?;
    let lexicon = match &cfg.prompts.lexicon {
        None => PromptLexicon::builtin(),
        Some(path) => {
            PromptLexicon::from_path(path).map_err(|e| PipelineError::Data(e.to_string()))?
        }
    };
    let by_id: HashMap<&str, &Instance> =
        instances.iter().map(|instance| (instance.id.as_str(), instance)).collect();
    let mut records: Vec<PromptRecord> = Vec::new();
    for m in &mined {
        let instance = by_id.get(m.instance.as_str()).ok_or_else(|| {
            PipelineError::Data(format!(
                "pairs.jsonl references unknown instance {}; re-run mine",
                m.instance
            ))
        })?;
        records.extend(extract_prefixes(instance, &m.pairs));
    }
    let classified: Vec<ClassifiedPrompt> = records
        .iter()
        .map(|record| ClassifiedPrompt {
            record: record.clone(),
            prompt_type: classify_prompt(record, &lexicon),
        })
        .collect();
    let counts = aggregate_prompts(&records, &lexicon);
    log::info!("classified {} prompt prefixes", classified.len());
    write_jsonl(&arts.prompt_records(), &classified)?;
    write_text(&arts.prompt_counts(), &prompt_counts_csv(&counts))?;
    write_json_pretty(&arts.prompt_summary(), &counts)?;
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "prompts",
        &[arts.instances(), arts.pairs()],
        &[arts.prompt_records(), arts.prompt_counts(), arts.prompt_summary()],
        Vec::new(),
    )
}

/// Fold the annotations and mined pairs into the per-run tally. Writes
/// `tally.json`.
pub fn run_stats(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let annotations: Vec<BilingualAnnotation> = read_artifact(&arts.annotations(), "detect")?;
    let mined: Vec<MinedInstance> = read_artifact(&arts.pairs(), "mine")?;
    let mut tally = Tally::new(cfg.run_id()).with_anchor(cfg.languages.anchor);
    for annotation in &annotations {
        tally.observe_annotation(annotation);
    }
    for m in &mined {
        tally.observe_pairs(&m.pairs);
    }
    log::info!(
        "tallied {} instances: {} bilingual, {} translation",
        tally.instances,
        tally.bilingual,
        tally.translation_instances
    );
    write_json_pretty(&arts.tally(), &tally)?;
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "stats",
        &[arts.annotations(), arts.pairs()],
        &[arts.tally()],
        Vec::new(),
    )
}

/// Per-condition summary row in `ablation/ablation_summary.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: Condition,
    pub seed: u64,
    pub target_total: u64,
    pub counts: [u64; GroupLabel::COUNT],
    pub with_replacement: [bool; GroupLabel::COUNT],
    pub examples: u64,
}

/// Partition the instances into ENG/NEN/BIL/TRA, re-pack each group, and
/// sample every configured ablation condition. Writes
/// `ablation/<condition>.plan.json`, `ablation/<condition>.jsonl`, and
/// `ablation/ablation_summary.json`.
pub fn run_ablate(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let instances: Vec<Instance> = read_artifact(&arts.instances(), "pack")?;
    let annotations: Vec<BilingualAnnotation> = read_artifact(&arts.annotations(), "detect")?;
    check_parallel(&instances, &annotations)?;
    let mined: Vec<MinedInstance> = read_artifact(&arts.pairs(), "mine")?;
    let translation: BTreeSet<String> = mined
        .iter()
        .filter(|m| is_translation_instance(&m.pairs))
        .map(|m| m.instance.clone())
        .collect();
    let part = partition(&annotations, &translation, cfg.languages.anchor);
    let grouped = pack_groups(&instances, &part.labels, cfg.corpus.example_len)
        .map_err(|e| PipelineError::Data(e.to_string()))?;
    if grouped.counts().iter().all(|&n| n == 0) {
        return Err(PipelineError::Data(
            "nothing to ablate: no instance survived partitioning".into(),
        ));
    }
    let proportions = grouped.proportions();
    let dir = arts.ablation_dir();
    fs::create_dir_all(&dir).map_err(io_err("create", &dir))?;
    let mut rows = Vec::new();
    let mut outputs = vec![dir.join("ablation_summary.json")];
    let mut warnings = Vec::new();
    for &condition in &cfg.ablation.conditions {
        let seed = mix_seed(cfg.seed, condition.label());
        let plan = AblationPlan::new(condition, cfg.ablation.target_total, proportions, seed)
            .map_err(|e| PipelineError::Data(e.to_string()))?;
        let manifest =
            build_condition(&plan, &grouped).map_err(|e| PipelineError::Data(e.to_string()))?;
        let plan_path = dir.join(format!("{}.plan.json", condition.label()));
        write_json_pretty(&plan_path, &plan)?;
        let entries_path = dir.join(format!("{}.jsonl", condition.label()));
        let file = File::create(&entries_path).map_err(io_err("create", &entries_path))?;
        write_manifest_jsonl(&manifest, BufWriter::new(file))
            .map_err(io_err("write", &entries_path))?;
        for (group, &flag) in GroupLabel::ALL.iter().zip(&manifest.with_replacement) {
            if flag {
                let warning = format!(
                    "{}: group {} exhausted; sampled with replacement",
                    condition.label(),
                    group.label()
                );
                log::warn!("{warning}");
                warnings.push(warning);
            }
        }
        rows.push(ConditionSummary {
            condition,
            seed,
            target_total: cfg.ablation.target_total,
            counts: manifest.counts,
            with_replacement: manifest.with_replacement,
            examples: manifest.entries.len() as u64,
        });
        outputs.push(plan_path);
        outputs.push(entries_path);
    }
    write_json_pretty(&dir.join("ablation_summary.json"), &rows)?;
    log::info!("sampled {} ablation conditions", rows.len());
    write_stage_manifest(
        &arts,
        &cfg.run_id(),
        "ablate",
        &[arts.instances(), arts.annotations(), arts.pairs()],
        &outputs,
        warnings,
    )
}

/// Render the tally into CSV, JSON, and SVG report files under `report/`.
pub fn run_report(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let arts = Artifacts::new(&cfg.out);
    let tally: Tally = read_json_artifact(&arts.tally(), "stats")?;
    let files = emit_report(&tally, &cfg.stats.grouping, arts.report_dir(), ReportFormats::default())
        .map_err(|e| PipelineError::Data(e.to_string()))?;
    log::info!("wrote {} report files", files.len());
    write_stage_manifest(&arts, &cfg.run_id(), "report", &[arts.tally()], &files, Vec::new())
}

/// Run every stage in order. A partial mining failure is remembered but the
/// remaining stages still run over what was mined; any other error aborts.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    run_pack(cfg)?;
    run_detect(cfg)?;
    let partial = match run_mine(cfg) {
        Ok(()) => None,
        Err(e @ PipelineError::Partial { .. }) => Some(e),
        Err(e) => return Err(e),
    };
    run_prompts(cfg)?;
    run_stats(cfg)?;
    run_ablate(cfg)?;
    run_report(cfg)?;
    match partial {
        None => Ok(()),
        Some(e) => Err(e),
    }
}
