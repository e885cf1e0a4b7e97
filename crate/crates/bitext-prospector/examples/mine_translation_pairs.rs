//! Mine sentence-level translation pairs out of bilingual instances with
//! the deterministic fixture embedder.

use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds, Verdict};
use bitext_prospector::filters::FilterConfig;
use bitext_prospector::langid::Tagger;
use bitext_prospector::miner::{build_pools, mine_pairs, FixtureEmbedder, SentenceSplitter};
use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let spec = SynthSpec {
        docs: 400,
        doc_tokens: 128,
        example_len: 512,
        bilingual: 12,
        translation: 5,
        non_english_monolingual: 60,
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
    let threshold = 0.6;

    let mut candidates = 0usize;
    let mut accepted = 0usize;
    for instance in &instances {
        let tags = tagger.tag_instance(instance);
        let annotation = detect(&tags, &thresholds, &policy);
        if annotation.verdict != Verdict::Bilingual {
            continue;
        }
        let pools = build_pools(instance, &tags, &annotation, &splitter)?;
        let outcome = mine_pairs(&pools, &embedder, threshold, &filters, &tagger)?;
        for pair in &outcome.pairs {
            candidates += 1;
            if !pair.accepted {
                continue;
            }
            accepted += 1;
            println!(
                "{}  {} -> {}  distance {:.4}",
                instance.id,
                pair.embedded.language.code(),
                pair.primary.language.code(),
                pair.distance
            );
            println!("  {}", pair.embedded.text);
            println!("  {}", pair.primary.text);
        }
    }

    println!();
    println!(
        "{accepted} accepted of {candidates} nearest-neighbor candidates under distance {threshold}"
    );
    println!("{} pairs were planted", spec.translation);
    Ok(())
}
