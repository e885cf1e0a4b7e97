//! Tag every token with a language and sort instances into monolingual,
//! bilingual, and excluded.

use std::collections::BTreeMap;

use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds, Verdict};
use bitext_prospector::langid::Tagger;
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
    let instances: Vec<Instance> = output.examples.iter().flat_map(split_instances).collect();

    let tagger = Tagger::builtin();
    let thresholds = RunThresholds::default();
    let policy = FocusPolicy::all_languages();

    let mut verdicts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut shown = false;
    for instance in &instances {
        let tags = tagger.tag_instance(instance);
        let annotation = detect(&tags, &thresholds, &policy);
        let label = match annotation.verdict {
            Verdict::Monolingual => "monolingual",
            Verdict::Bilingual => "bilingual",
            Verdict::ExcludedFocus => "excluded (focus)",
            Verdict::ExcludedUndefined => "excluded (undefined)",
        };
        *verdicts.entry(label).or_default() += 1;
        if annotation.verdict == Verdict::Bilingual && !shown {
            shown = true;
            println!(
                "instance {}: primary {:?}, embedded {:?}, undefined fraction {:.4}",
                annotation.instance, annotation.primary, annotation.embedded, annotation.undef_frac
            );
            for (lang, start, len) in &annotation.segments {
                println!("  {} run of {len} tokens starting at token {start}", lang.code());
            }
        }
    }

    println!();
    for (label, count) in &verdicts {
        println!("{label:>22}: {count}");
    }
    println!("{:>22}: {}", "total", instances.len());
    Ok(())
}
