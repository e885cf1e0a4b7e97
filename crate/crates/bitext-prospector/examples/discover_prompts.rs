//! Discover natural translation prompts: colon-terminated prefixes right
//! before the sentences of mined translation pairs, classified by how they
//! name the language.

use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds, Verdict};
use bitext_prospector::filters::FilterConfig;
use bitext_prospector::langid::Tagger;
use bitext_prospector::miner::{build_pools, mine_pairs, FixtureEmbedder, SentenceSplitter};
use bitext_prospector::prompts::{
    aggregate_prompts, classify_prompt, extract_prefixes, PromptLexicon, PromptType,
};
use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let spec = SynthSpec {
        docs: 600,
        doc_tokens: 128,
        example_len: 512,
        bilingual: 30,
        translation: 16,
        non_english_monolingual: 80,
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
    let lexicon = PromptLexicon::builtin();

    let mut records = Vec::new();
    for instance in &instances {
        let tags = tagger.tag_instance(instance);
        let annotation = detect(&tags, &thresholds, &policy);
        if annotation.verdict != Verdict::Bilingual {
            continue;
        }
        let pools = build_pools(instance, &tags, &annotation, &splitter)?;
        let outcome = mine_pairs(&pools, &embedder, 0.6, &filters, &tagger)?;
        records.extend(extract_prefixes(instance, &outcome.pairs));
    }

    for record in &records {
        println!(
            "{:<14} {:?} before the {} side of {} ({} -> {})",
            format!("{:?}", classify_prompt(record, &lexicon)),
            record.prefix,
            match record.side {
                bitext_prospector::prompts::PromptSide::SourceSide => "source",
                bitext_prospector::prompts::PromptSide::TargetSide => "target",
            },
            record.pair_id,
            record.language_pair.0.code(),
            record.language_pair.1.code(),
        );
    }

    let counts = aggregate_prompts(&records, &lexicon);
    println!();
    println!("{:<10} {}", "type", "count");
    for ty in PromptType::ALL {
        println!("{:<10} {}", ty.label(), counts.total[ty.index()]);
    }
    Ok(())
}
