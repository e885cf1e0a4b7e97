use std::time::Instant;

use bitext_prospector::detector::{detect, FocusPolicy, RunThresholds};
use bitext_prospector::langid::Tagger;
use bitext_prospector::synth::SynthSpec;
use bitext_prospector::{assemble_examples, split_instances, DefaultTokenizer};

fn main() {
    let corpus = SynthSpec::default().generate().unwrap();
    let bytes: usize = corpus.documents.iter().map(|d| d.text.len()).sum();
    println!("input text: {:.1} MB", bytes as f64 / 1e6);

    let t0 = Instant::now();
    let packed = assemble_examples(corpus.documents.iter().cloned(), &DefaultTokenizer, 2048).unwrap();
    let t_pack = t0.elapsed();
    let t1 = Instant::now();
    let instances: Vec<_> = packed.examples.iter().flat_map(split_instances).collect();
    let t_split = t1.elapsed();

    let tagger = Tagger::builtin();
    let thresholds = RunThresholds::default();
    let focus = FocusPolicy::all_languages();
    let t2 = Instant::now();
    let mut bilingual = 0usize;
    for inst in &instances {
        let tags = tagger.tag_instance(inst);
        let ann = detect(&tags, &thresholds, &focus);
        if ann.verdict == bitext_prospector::Verdict::Bilingual {
            bilingual += 1;
        }
    }
    let t_detect = t2.elapsed();
    let total = t_pack + t_split + t_detect;
    println!("pack {:?}  split {:?}  tag+detect {:?}  total {:?}", t_pack, t_split, t_detect, total);
    println!("bilingual: {bilingual}, instances: {}", instances.len());
    println!("single-core rate: {:.1} MB/s", bytes as f64 / 1e6 / total.as_secs_f64());
}
