//! Corpus units and packing.
//!
//! Documents are tokenized and packed into fixed-width examples the way LM
//! training batches are assembled: documents are concatenated in stream
//! order, a separator marker is recorded between adjacent documents, long
//! documents spill into consecutive examples, and the final short example is
//! padded. Instances — maximal separator-free token spans — are the unit all
//! downstream analysis works on.

use serde::{Deserialize, Serialize};
use std::fmt;

use thiserror::Error;

use crate::langid::{classify_char, Script};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("example length must be at least 2, got {0}")]
    InvalidExampleLength(usize),
}

#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("text of {len} bytes exceeds the 4 GiB span limit")]
    TooLong { len: usize },
}

/// Byte span into a backing text.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start: start as u32, end: end as u32 }
    }

    pub fn range(self) -> std::ops::Range<usize> {
        self.start as usize..self.end as usize
    }

    pub fn len(self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(self) -> bool {
        self.start == self.end
    }
}

impl Serialize for Span {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.start, self.end).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Span {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (start, end) = <(u32, u32)>::deserialize(d)?;
        Ok(Span { start, end })
    }
}

/// Provenance class of a document.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Web,
    Wiki,
    Conversation,
    Book,
    News,
    Other,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Source::Web => "web",
            Source::Wiki => "wiki",
            Source::Conversation => "conversation",
            Source::Book => "book",
            Source::News => "news",
            Source::Other => "other",
        };
        f.write_str(s)
    }
}

/// One input document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source: Source,
    pub text: String,
}

/// Splits text into token byte spans.
///
/// Spans are strictly increasing, non-overlapping, and cover every byte that
/// is not discarded as whitespace or punctuation.
pub trait Tokenizer: Send + Sync {
    fn tokenize(&self, text: &str) -> Result<Vec<Span>, TokenizeError>;
}

/// Default tokenizer: maximal runs of word characters, except that CJK
/// characters (Han, kana, Hangul) each form their own token, so token-level
/// language tags are character-level for Chinese, Japanese and Korean.
/// Whitespace, punctuation and symbols are discarded.
pub struct DefaultTokenizer;

fn is_word_char(c: char, script: Script) -> bool {
    script != Script::Other || c.is_alphanumeric()
}

impl Tokenizer for DefaultTokenizer {
    fn tokenize(&self, text: &str) -> Result<Vec<Span>, TokenizeError> {
        if text.len() > u32::MAX as usize {
            return Err(TokenizeError::TooLong { len: text.len() });
        }
        let mut spans = Vec::new();
        let mut run_start: Option<usize> = None;
        for (i, c) in text.char_indices() {
            let script = classify_char(c);
            if is_word_char(c, script) {
                if script.is_cjk() {
                    if let Some(start) = run_start.take() {
                        spans.push(Span::new(start, i));
                    }
                    spans.push(Span::new(i, i + c.len_utf8()));
                } else if run_start.is_none() {
                    run_start = Some(i);
                }
            } else if let Some(start) = run_start.take() {
                spans.push(Span::new(start, i));
            }
        }
        if let Some(start) = run_start {
            spans.push(Span::new(start, text.len()));
        }
        Ok(spans)
    }
}

/// A document (or document fragment) already tokenized and ready to pack.
#[derive(Clone, Debug)]
pub struct PackItem {
    pub id: String,
    pub source: Source,
    pub text: String,
    pub tokens: Vec<Span>,
}

impl PackItem {
    pub fn from_document(doc: Document, tokenizer: &dyn Tokenizer) -> Result<Self, TokenizeError> {
        let tokens = tokenizer.tokenize(&doc.text)?;
        Ok(PackItem { id: doc.id, source: doc.source, text: doc.text, tokens })
    }
}

/// Contribution of one document fragment to an example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub doc: String,
    pub source: Source,
    /// Fragment index of this chunk within its document (0 unless the
    /// document spans several examples).
    pub frag: u32,
    /// First token index of the chunk within the example.
    pub tok_start: u32,
    pub tok_len: u32,
    /// Byte range of the chunk within the example text.
    pub text_start: u32,
    pub text_end: u32,
}

/// Fixed-width packed example.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub seq: u64,
    pub text: String,
    pub tokens: Vec<Span>,
    /// Trailing pad slots; `tokens.len() + pad` equals the example width.
    pub pad: u32,
    /// Token indices where a new document begins, strictly increasing,
    /// always inside (0, width).
    pub boundaries: Vec<u32>,
    pub provenance: Vec<Provenance>,
}

impl Example {
    pub fn width(&self) -> usize {
        self.tokens.len() + self.pad as usize
    }
}

/// Maximal separator-free token span of an example; the unit of analysis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Instance {
    /// `<doc id>#<fragment index>`.
    pub id: String,
    pub doc: String,
    pub source: Source,
    pub example: u64,
    pub text: String,
    pub tokens: Vec<Span>,
}

impl Instance {
    pub fn token_texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|span| &self.text[span.range()])
    }
}

/// Incremental packer. Feed [`PackItem`]s in stream order; completed examples
/// come back as soon as they fill, and [`Packer::finish`] pads out the tail.
pub struct Packer {
    len: usize,
    seq: u64,
    text: String,
    tokens: Vec<Span>,
    boundaries: Vec<u32>,
    provenance: Vec<Provenance>,
}

impl Packer {
    pub fn new(len: usize) -> Result<Self, CorpusError> {
        if len < 2 {
            return Err(CorpusError::InvalidExampleLength(len));
        }
        Ok(Packer {
            len,
            seq: 0,
            text: String::new(),
            tokens: Vec::new(),
            boundaries: Vec::new(),
            provenance: Vec::new(),
        })
    }

    fn flush(&mut self, pad: u32) -> Example {
        let example = Example {
            seq: self.seq,
            text: std::mem::take(&mut self.text),
            tokens: std::mem::take(&mut self.tokens),
            pad,
            boundaries: std::mem::take(&mut self.boundaries),
            provenance: std::mem::take(&mut self.provenance),
        };
        self.seq += 1;
        example
    }

    /// Pack one item, returning any examples completed by it. Items with no
    /// tokens contribute nothing.
    pub fn push(&mut self, item: &PackItem) -> Vec<Example> {
        let mut done = Vec::new();
        let total = item.tokens.len();
        let mut offset = 0usize;
        let mut frag = 0u32;
        while offset < total {
            let cap = self.len - self.tokens.len();
            let take = cap.min(total - offset);
            if offset == 0 && !self.tokens.is_empty() {
                self.boundaries.push(self.tokens.len() as u32);
            }
            let chunk = &item.tokens[offset..offset + take];
            let text_lo = chunk[0].start as usize;
            let text_hi = chunk[take - 1].end as usize;
            let base = self.text.len() as u32;
            self.text.push_str(&item.text[text_lo..text_hi]);
            self.provenance.push(Provenance {
                doc: item.id.clone(),
                source: item.source,
                frag,
                tok_start: self.tokens.len() as u32,
                tok_len: take as u32,
                text_start: base,
                text_end: self.text.len() as u32,
            });
            for span in chunk {
                self.tokens.push(Span {
                    start: span.start - text_lo as u32 + base,
                    end: span.end - text_lo as u32 + base,
                });
            }
            offset += take;
            frag += 1;
            if self.tokens.len() == self.len {
                done.push(self.flush(0));
            }
        }
        done
    }

    /// Emit the final, padded example if any content is pending.
    pub fn finish(mut self) -> Option<Example> {
        if self.tokens.is_empty() {
            return None;
        }
        let pad = (self.len - self.tokens.len()) as u32;
        Some(self.flush(pad))
    }
}

/// Per-document failure recorded while packing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkippedDoc {
    pub id: String,
    pub reason: String,
}

/// Summary of one packing run.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PackReport {
    pub documents: u64,
    pub empty_documents: u64,
    pub skipped: Vec<SkippedDoc>,
    pub tokens: u64,
    pub examples: u64,
    pub instances: u64,
}

/// Everything produced by [`assemble_examples`].
pub struct PackOutput {
    pub examples: Vec<Example>,
    pub report: PackReport,
}

/// Pack a stream of already-tokenized items into examples of exactly `len`
/// tokens. Per-document failures arrive as `Err(SkippedDoc)` entries and are
/// recorded in the report; items with no tokens count separately. An empty
/// stream yields no examples.
pub fn pack_items(
    items: impl IntoIterator<Item = Result<PackItem, SkippedDoc>>,
    len: usize,
) -> Result<PackOutput, CorpusError> {
    let mut packer = Packer::new(len)?;
    let mut report = PackReport::default();
    let mut examples = Vec::new();
    for item in items {
        report.documents += 1;
        let item = match item {
            Ok(item) => item,
            Err(skip) => {
                report.skipped.push(skip);
                continue;
            }
        };
        if item.tokens.is_empty() {
            report.empty_documents += 1;
            continue;
        }
        report.tokens += item.tokens.len() as u64;
        examples.extend(packer.push(&item));
    }
    examples.extend(packer.finish());
    report.examples = examples.len() as u64;
    report.instances = examples.iter().map(|e| e.provenance.len() as u64).sum();
    Ok(PackOutput { examples, report })
}

/// Tokenize and pack a document stream into examples of exactly `len` tokens.
pub fn assemble_examples(
    docs: impl IntoIterator<Item = Document>,
    tokenizer: &dyn Tokenizer,
    len: usize,
) -> Result<PackOutput, CorpusError> {
    pack_items(
        docs.into_iter().map(|doc| {
            let id = doc.id.clone();
            PackItem::from_document(doc, tokenizer)
                .map_err(|err| SkippedDoc { id, reason: err.to_string() })
        }),
        len,
    )
}

/// Split an example into its instances.
///
/// Within one example each provenance chunk is a maximal separator-free span
/// (a document never contributes two chunks to the same example), so
/// instances map 1:1 onto provenance entries.
pub fn split_instances(example: &Example) -> Vec<Instance> {
    example
        .provenance
        .iter()
        .map(|prov| {
            let text = example.text[prov.text_start as usize..prov.text_end as usize].to_string();
            let tokens = example.tokens
                [prov.tok_start as usize..(prov.tok_start + prov.tok_len) as usize]
                .iter()
                .map(|span| Span {
                    start: span.start - prov.text_start,
                    end: span.end - prov.text_start,
                })
                .collect();
            Instance {
                id: format!("{}#{}", prov.doc, prov.frag),
                doc: prov.doc.clone(),
                source: prov.source,
                example: example.seq,
                text,
                tokens,
            }
        })
        .collect()
}
