//! Corpus-analysis toolkit for incidental bilingualism.
//!
//! The pipeline packs documents into fixed-width training examples, splits
//! them back into separator-free instances, tags each token with a language,
//! detects bilingual instances, mines sentence-level translation pairs out of
//! them, discovers natural translation prompts, and reports per-language
//! statistics plus ablation dataset mixtures.

pub mod ablation;
pub mod corpus;
pub mod detector;
pub mod filters;
pub mod langid;
pub mod miner;
pub mod pipeline;
pub mod prompts;
pub mod stats;
pub mod synth;

pub use corpus::{assemble_examples, pack_items, split_instances, DefaultTokenizer, Document, Example, Instance, Source, Tokenizer};
pub use detector::{contiguous_runs, detect, BilingualAnnotation, FocusPolicy, RunThresholds, Verdict};
pub use langid::{Lang, Script, Tag};
pub use pipeline::{load_config, run_pipeline, Artifacts, Overrides, PipelineConfig, PipelineError};
