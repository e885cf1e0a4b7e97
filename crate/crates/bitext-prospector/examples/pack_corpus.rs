//! Pack a document stream into fixed-width examples and split each example
//! back into its per-document instances.

use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
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

    let output = assemble_examples(corpus.documents, &DefaultTokenizer, spec.example_len)?;
    let report = &output.report;
    println!(
        "packed {} documents ({} tokens) into {} examples of {} tokens each",
        report.documents, report.tokens, report.examples, spec.example_len
    );

    let first = &output.examples[0];
    println!(
        "example 0 holds {} documents; boundaries at token indices {:?}",
        first.provenance.len(),
        first.boundaries
    );

    let instances: Vec<Instance> = output.examples.iter().flat_map(split_instances).collect();
    println!("split back into {} instances", instances.len());
    let sample = &instances[0];
    println!(
        "instance {} ({} tokens): {:?}...",
        sample.id,
        sample.tokens.len(),
        &sample.text[..sample.text.len().min(60)]
    );
    Ok(())
}
