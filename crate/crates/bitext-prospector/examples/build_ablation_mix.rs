//! Partition instances into ENG/NEN/BIL/TRA, re-pack each group, and sample
//! the four ablation conditions, each removing one more group and passing
//! its share down the chain.

use std::collections::BTreeSet;

use bitext_prospector::ablation::{
    build_condition, pack_groups, partition, AblationPlan, Condition, GroupLabel,
};
use bitext_prospector::corpus::{assemble_examples, split_instances, DefaultTokenizer, Instance};
use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds, Verdict};
use bitext_prospector::filters::FilterConfig;
use bitext_prospector::langid::{Lang, Tagger};
use bitext_prospector::miner::{
    build_pools, is_translation_instance, mine_pairs, FixtureEmbedder, SentenceSplitter,
};
use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let spec = SynthSpec {
        docs: 1200,
        doc_tokens: 128,
        example_len: 512,
        bilingual: 50,
        translation: 20,
        non_english_monolingual: 240,
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

    let mut annotations = Vec::with_capacity(instances.len());
    let mut translation: BTreeSet<String> = BTreeSet::new();
    for instance in &instances {
        let tags = tagger.tag_instance(instance);
        let annotation = detect(&tags, &thresholds, &policy);
        if annotation.verdict == Verdict::Bilingual {
            let pools = build_pools(instance, &tags, &annotation, &splitter)?;
            let outcome = mine_pairs(&pools, &embedder, 0.6, &filters, &tagger)?;
            if is_translation_instance(&outcome.pairs) {
                translation.insert(instance.id.clone());
            }
        }
        annotations.push(annotation);
    }

    let part = partition(&annotations, &translation, Lang::En);
    let grouped = pack_groups(&instances, &part.labels, spec.example_len)?;
    println!("group examples after re-packing:");
    for group in GroupLabel::ALL {
        println!("  {:<4} {}", group.label(), grouped.counts()[group.index()]);
    }

    let target = 2000;
    println!();
    println!("{:<10} {:>6} {:>6} {:>6} {:>6}", "condition", "ENG", "NEN", "BIL", "TRA");
    for condition in Condition::ALL {
        let plan = AblationPlan::new(condition, target, grouped.proportions(), 42)?;
        let manifest = build_condition(&plan, &grouped)?;
        let [eng, nen, bil, tra] = manifest.counts;
        println!("{:<10} {eng:>6} {nen:>6} {bil:>6} {tra:>6}", condition.label());
    }
    println!("each row sums to the {target}-example budget");
    Ok(())
}
