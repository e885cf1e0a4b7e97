//! Generate a deterministic synthetic corpus with planted bilingual and
//! translation documents, plus the alignment fixture that lets the built-in
//! embedder recover the planted pairs.
//!
//! Usage: cargo run --example generate_corpus -- [DIR]

use std::env;
use std::fs;
use std::path::PathBuf;

use bitext_prospector::synth::SynthSpec;

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(env::args().nth(1).unwrap_or_else(|| "synth-corpus".into()));
    fs::create_dir_all(&dir)?;

    let spec = SynthSpec::default();
    let corpus = spec.generate()?;
    let docs = dir.join("docs.jsonl");
    let alignments = dir.join("alignments.tsv");
    corpus.write_documents(&docs)?;
    corpus.write_alignments(&alignments)?;

    println!(
        "wrote {} documents: {} bilingual, of which {} carry a planted translation pair",
        spec.docs, spec.bilingual, spec.translation
    );
    println!("documents:  {}", docs.display());
    println!("alignments: {}", alignments.display());
    println!();
    println!("run the whole pipeline over it with:");
    println!(
        "  cargo run -- pipeline --input {} --example-len {} --alignments {} --out {}",
        docs.display(),
        spec.example_len,
        alignments.display(),
        dir.join("out").display()
    );
    Ok(())
}
