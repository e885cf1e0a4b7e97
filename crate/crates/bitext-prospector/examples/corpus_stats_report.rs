//! Tally per-language detection and mining counts, then render the CSV,
//! JSON, and SVG report files.
//!
//! Usage: cargo run --example corpus_stats_report -- [DIR]

use std::env;
use std::path::PathBuf;

use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds, Verdict};
use bitext_prospector::filters::FilterConfig;
use bitext_prospector::langid::{Lang, Tagger};
use bitext_prospector::miner::{build_pools, mine_pairs, FixtureEmbedder, SentenceSplitter};
use bitext_prospector::stats::report::{emit_report, ReportFormats};
use bitext_prospector::stats::{ResourceGrouping, Tally};
use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let out = PathBuf::from(env::args().nth(1).unwrap_or_else(|| "stats-report".into()));

    let spec = SynthSpec {
        docs: 1500,
        doc_tokens: 128,
        example_len: 512,
        bilingual: 60,
        translation: 25,
        non_english_monolingual: 300,
        ..SynthSpec::default()
    };
    let corpus = spec.generate()?;
    let embedder = corpus.embedder(FixtureEmbedder::DEFAULT_DIM);
    let output = assemble_examples(corpus.documents, &DefaultTokenizer, spec.example_len)?;
    let instances: Vec<Instance> = output.examples.iter().flat_map(split_instances).collect();

    let tagger = Tagger::builtin();
    let thresholds = RunThresholds::default();
    let policy = FocusPolicy::all_languages();
    let splitter = SentenceSplitter::builtin();
    let filters = FilterConfig::default();

    let mut tally = Tally::new("example-run").with_anchor(Lang::En);
    for instance in &instances {
        let tags = tagger.tag_instance(instance);
        let annotation = detect(&tags, &thresholds, &policy);
        tally.observe_annotation(&annotation);
        if annotation.verdict == Verdict::Bilingual {
            let pools = build_pools(instance, &tags, &annotation, &splitter)?;
            let outcome = mine_pairs(&pools, &embedder, 0.6, &filters, &tagger)?;
            tally.observe_pairs(&outcome.pairs);
        }
    }

    println!(
        "{} instances: {:.3}% bilingual, {:.3}% translation",
        tally.instances,
        100.0 * tally.bilingual_frac(),
        100.0 * tally.translation_frac()
    );

    let files = emit_report(&tally, &ResourceGrouping::FixedLists, &out, ReportFormats::default())?;
    println!("report files:");
    for file in files {
        println!("  {}", file.display());
    }
    Ok(())
}
