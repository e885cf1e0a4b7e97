//! Run the whole file-based pipeline — pack, detect, mine, prompts, stats,
//! ablate, report — over a synthetic corpus, then point at the artifacts.
//!
//! Usage: cargo run --example full_pipeline -- [DIR]

use std::env;
use std::fs;
use std::path::PathBuf;

use bitext_prospector::pipeline::{run_pipeline, Artifacts, PipelineConfig};
use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env::args().nth(1).unwrap_or_else(|| "pipeline-demo".into()));
    fs::create_dir_all(&dir)?;

    let spec = SynthSpec {
        docs: 1000,
        doc_tokens: 128,
        example_len: 512,
        bilingual: 40,
        translation: 15,
        non_english_monolingual: 200,
        ..SynthSpec::default()
    };
    let corpus = spec.generate()?;
    let docs = dir.join("docs.jsonl");
    let alignments = dir.join("alignments.tsv");
    corpus.write_documents(&docs)?;
    corpus.write_alignments(&alignments)?;

    let mut cfg = PipelineConfig::default();
    cfg.out = dir.join("out");
    cfg.corpus.input = docs;
    cfg.corpus.example_len = spec.example_len;
    cfg.miner.alignments = Some(alignments);
    cfg.ablation.target_total = 2000;
    run_pipeline(&cfg)?;

    let arts = Artifacts::new(&cfg.out);
    println!("pipeline artifacts under {}:", arts.dir.display());
    for path in [
        arts.examples(),
        arts.instances(),
        arts.annotations(),
        arts.pairs(),
        arts.pairs_tsv(),
        arts.prompt_counts(),
        arts.tally(),
    ] {
        println!("  {}", path.display());
    }
    println!("  {}/...", arts.report_dir().display());
    println!("  {}/...", arts.ablation_dir().display());

    let tsv = fs::read_to_string(arts.pairs_tsv())?;
    println!();
    println!("accepted pairs (pairs.tsv): {}", tsv.lines().count().saturating_sub(1));
    Ok(())
}
