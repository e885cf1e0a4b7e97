//! Sentence embedding providers.
//!
//! Mining needs a cross-lingual sentence encoder; the toolkit treats it as a
//! pluggable interface. [`FixtureEmbedder`] is a deterministic, hermetic
//! stand-in built on hashed character n-grams plus an explicit alignment
//! table that places registered translation pairs at distance zero.
//! [`ServiceEmbedder`] talks to a real encoder over a line-delimited JSON
//! protocol on a child process's stdio.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("embedding service error: {0}")]
    Service(String),
    #[error("failed to read alignment table {path}: {source}")]
    AlignmentIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("alignment table {path} line {line}: expected two tab-separated columns")]
    AlignmentMalformed { path: String, line: usize },
}

/// Deterministic unit-norm sentence encoder.
pub trait SentenceEmbedder: Send + Sync {
    fn dim(&self) -> usize;

    fn embed(&self, text: &str) -> Result<Vec<f32>, EmbedError>;

    /// Embed several texts; the default just loops, services batch on the
    /// wire. One failed text must not fail the rest.
    fn embed_batch(&self, texts: &[&str]) -> Vec<Result<Vec<f32>, EmbedError>> {
        texts.iter().map(|t| self.embed(t)).collect()
    }
}

/// Cosine distance `1 − u·v` for unit vectors, clamped into [0, 2].
/// Computed as half the squared Euclidean distance, so identical vectors
/// are at distance exactly 0.
pub fn cosine_distance(u: &[f32], v: &[f32]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let d2: f64 = u
        .iter()
        .zip(v)
        .map(|(a, b)| {
            let d = *a as f64 - *b as f64;
            d * d
        })
        .sum();
    (d2 / 2.0).clamp(0.0, 2.0)
}

/// Canonical text form used for alignment keys and n-gram hashing:
/// lowercased, whitespace collapsed, terminal punctuation and quotes
/// stripped.
pub fn normalize_for_embedding(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.trim().chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            for lc in c.to_lowercase() {
                out.push(lc);
            }
        }
    }
    while let Some(c) = out.chars().next_back() {
        if matches!(c, '.' | '!' | '?' | ';' | ',' | ':' | '。' | '！' | '？' | '"' | '\'' | '»' | '”' | '’') {
            out.pop();
        } else {
            break;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Hermetic encoder: signed hashed character 3–5-grams, L2-normalized.
/// Distinct sentences land nearly orthogonal; sentences registered as
/// translations of each other share an alignment pivot and embed
/// identically.
pub struct FixtureEmbedder {
    dim: usize,
    alignment: HashMap<String, String>,
}

impl FixtureEmbedder {
    pub const DEFAULT_DIM: usize = 256;

    pub fn new(dim: usize) -> Self {
        assert!(dim >= 8, "embedding dimension too small to separate sentences");
        FixtureEmbedder { dim, alignment: HashMap::new() }
    }

    /// Register `a` and `b` as mutual translations. Transitive: aligning
    /// (a, b) then (b, c) places all three on one pivot.
    pub fn align(&mut self, a: &str, b: &str) {
        let a_norm = normalize_for_embedding(a);
        let b_norm = normalize_for_embedding(b);
        let pivot = self.alignment.get(&a_norm).cloned().unwrap_or_else(|| a_norm.clone());
        self.alignment.insert(a_norm, pivot.clone());
        self.alignment.insert(b_norm, pivot);
    }

    /// True when some registered pair involves this text.
    pub fn is_aligned(&self, text: &str) -> bool {
        self.alignment.contains_key(&normalize_for_embedding(text))
    }

    /// Load alignments from a TSV of `side_a<TAB>side_b` lines. `#` starts
    /// a comment.
    pub fn load_alignments(&mut self, path: &Path) -> Result<usize, EmbedError> {
        let text = std::fs::read_to_string(path).map_err(|source| EmbedError::AlignmentIo {
            path: path.display().to_string(),
            source,
        })?;
        let mut added = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches(['\r']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line.split_once('\t').ok_or(EmbedError::AlignmentMalformed {
                path: path.display().to_string(),
                line: lineno + 1,
            })?;
            self.align(a, b);
            added += 1;
        }
        Ok(added)
    }

    fn hash_into(&self, key: &str, out: &mut [f32]) {
        let chars: Vec<char> = key.chars().collect();
        let mut gram = [0u8; 4 * 5];
        let mut any = false;
        for width in 3..=5usize {
            if chars.len() < width {
                continue;
            }
            for window in chars.windows(width) {
                let mut len = 0;
                for &c in window {
                    len += c.encode_utf8(&mut gram[len..]).len();
                }
                let h = fnv1a(&gram[..len]);
                let bucket = (h % self.dim as u64) as usize;
                let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
                out[bucket] += sign;
                any = true;
            }
        }
        if !any {
            // Shorter than the smallest n-gram: hash the whole key.
            let h = fnv1a(key.as_bytes());
            out[(h % self.dim as u64) as usize] += 1.0;
        }
    }
}

impl SentenceEmbedder for FixtureEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f32>, EmbedError> {
        let norm = normalize_for_embedding(text);
        if norm.is_empty() {
            return Err(EmbedError::EmptyText);
        }
        let key = self.alignment.get(&norm).map(String::as_str).unwrap_or(&norm);
        let mut v = vec![0f32; self.dim];
        self.hash_into(key, &mut v);
        let n = (v.iter().map(|x| (*x as f64) * (*x as f64)).sum::<f64>()).sqrt();
        debug_assert!(n > 0.0);
        for x in &mut v {
            *x = (*x as f64 / n) as f32;
        }
        Ok(v)
    }
}

#[derive(Serialize)]
struct ServiceRequest<'a> {
    id: u64,
    text: &'a str,
}

#[derive(Deserialize)]
struct ServiceResponse {
    id: u64,
    vec: Vec<f32>,
}

struct ServiceIo {
    writer: Box<dyn Write + Send>,
    reader: Box<dyn BufRead + Send>,
    pending: HashMap<u64, Result<Vec<f32>, String>>,
}

impl ServiceIo {
    fn send(&mut self, id: u64, text: &str) -> Result<(), EmbedError> {
        let line = serde_json::to_string(&ServiceRequest { id, text })
            .map_err(|e| EmbedError::Service(e.to_string()))?;
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .map_err(|e| EmbedError::Service(format!("write failed: {e}")))
    }

    fn recv(&mut self, id: u64) -> Result<Vec<f32>, EmbedError> {
        loop {
            if let Some(found) = self.pending.remove(&id) {
                return found.map_err(EmbedError::Service);
            }
            let mut line = String::new();
            let n = self
                .reader
                .read_line(&mut line)
                .map_err(|e| EmbedError::Service(format!("read failed: {e}")))?;
            if n == 0 {
                return Err(EmbedError::Service("service closed the stream".into()));
            }
            if line.trim().is_empty() {
                continue;
            }
            let resp: ServiceResponse = serde_json::from_str(&line)
                .map_err(|e| EmbedError::Service(format!("bad response line: {e}")))?;
            self.pending.insert(resp.id, Ok(resp.vec));
        }
    }
}

/// Client for an external embedding service speaking one JSON object per
/// line: request `{"id": n, "text": s}`, response `{"id": n, "vec": [...]}`.
/// Responses may arrive out of order. Calls are internally serialized, so
/// the client is safe to share across threads.
pub struct ServiceEmbedder {
    dim: usize,
    io: Mutex<ServiceIo>,
    next_id: AtomicU64,
    child: Option<Mutex<Child>>,
}

impl ServiceEmbedder {
    /// Spawn `command` and embed through its stdio.
    pub fn spawn(command: &mut Command, dim: usize) -> Result<Self, EmbedError> {
        let mut child = command
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| EmbedError::Service(format!("failed to spawn service: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut this = Self::from_streams(stdin, BufReader::new(stdout), dim);
        this.child = Some(Mutex::new(child));
        Ok(this)
    }

    /// Wrap an already-connected request writer and response reader.
    pub fn from_streams(
        writer: impl Write + Send + 'static,
        reader: impl BufRead + Send + 'static,
        dim: usize,
    ) -> Self {
        ServiceEmbedder {
            dim,
            io: Mutex::new(ServiceIo {
                writer: Box::new(writer),
                reader: Box::new(reader),
                pending: HashMap::new(),
            }),
            next_id: AtomicU64::new(0),
            child: None,
        }
    }

    fn check(&self, vec: Vec<f32>) -> Result<Vec<f32>, EmbedError> {
        if vec.len() != self.dim {
            return Err(EmbedError::Dimension { expected: self.dim, got: vec.len() });
        }
        let n = (vec.iter().map(|x| (*x as f64) * (*x as f64)).sum::<f64>()).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(EmbedError::Service("service returned a degenerate vector".into()));
        }
        // Enforce the unit-norm contract regardless of service rounding.
        Ok(vec.into_iter().map(|x| (x as f64 / n) as f32).collect())
    }
}

impl Drop for ServiceEmbedder {
    fn drop(&mut self) {
        if let Some(child) = &self.child {
            if let Ok(mut child) = child.lock() {
                let _ = child.kill();
                let _ = child.wait();
            }
        }
    }
}

impl SentenceEmbedder for ServiceEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f32>, EmbedError> {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let mut io = self.io.lock().expect("embedder lock");
        io.send(id, text)?;
        io.writer.flush().map_err(|e| EmbedError::Service(format!("flush failed: {e}")))?;
        let vec = io.recv(id)?;
        drop(io);
        self.check(vec)
    }

    fn embed_batch(&self, texts: &[&str]) -> Vec<Result<Vec<f32>, EmbedError>> {
        let base = self.next_id.fetch_add(texts.len() as u64, Ordering::Relaxed);
        let mut io = self.io.lock().expect("embedder lock");
        let mut results: Vec<Result<Vec<f32>, EmbedError>> = Vec::with_capacity(texts.len());
        let mut sent = Vec::with_capacity(texts.len());
        for (i, text) in texts.iter().enumerate() {
            match io.send(base + i as u64, text) {
                Ok(()) => sent.push(Ok(base + i as u64)),
                Err(e) => sent.push(Err(e)),
            }
        }
        if let Err(e) = io.writer.flush() {
            let msg = format!("flush failed: {e}");
            return texts.iter().map(|_| Err(EmbedError::Service(msg.clone()))).collect();
        }
        for slot in sent {
            match slot {
                Ok(id) => results.push(io.recv(id)),
                Err(e) => results.push(Err(e)),
            }
        }
        drop(io);
        results.into_iter().map(|r| r.and_then(|v| self.check(v))).collect()
    }
}
