//! Candidate translation-pair filters.
//!
//! Mined pairs pass through four checks — length, length ratio, edit
//! distance, and language — and every verdict is recorded whether or not an
//! earlier check failed, so rejected pairs can be audited per filter.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::langid::{Lang, SequenceLid, Tag};

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("token bounds must satisfy 1 <= min ({min}) <= max ({max})")]
    BadTokenBounds { min: usize, max: usize },
    #[error("length ratio bound {0} must be >= 1")]
    BadRatio(f64),
    #[error("edit-distance ratio bound {0} must lie in (0, 1]")]
    BadEditRatio(f64),
}

/// Which language relation a pair must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LanguageRule {
    /// Both sides identified, and as different languages.
    DifferentLanguages,
    /// Both sides identified, and the two together are exactly this pair.
    FixedPair(Lang, Lang),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// Inclusive token-count bounds for each side.
    pub min_tokens: usize,
    pub max_tokens: usize,
    /// Longer side may be at most this many times the shorter (inclusive).
    pub max_len_ratio: f64,
    /// Minimum edit distance between the sides, in tokens (inclusive).
    pub min_edit: usize,
    /// Minimum edit distance relative to the longer side (inclusive).
    pub min_edit_ratio: f64,
    pub language_rule: LanguageRule,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_tokens: 3,
            max_tokens: 200,
            max_len_ratio: 2.0,
            min_edit: 2,
            min_edit_ratio: 0.1,
            language_rule: LanguageRule::DifferentLanguages,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if self.min_tokens < 1 || self.min_tokens > self.max_tokens {
            return Err(FilterError::BadTokenBounds {
                min: self.min_tokens,
                max: self.max_tokens,
            });
        }
        if !(self.max_len_ratio >= 1.0) {
            return Err(FilterError::BadRatio(self.max_len_ratio));
        }
        if !(self.min_edit_ratio > 0.0 && self.min_edit_ratio <= 1.0) {
            return Err(FilterError::BadEditRatio(self.min_edit_ratio));
        }
        Ok(())
    }
}

/// Outcome of every filter for one pair. A pair is accepted only when all
/// four pass; failures do not short-circuit the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdicts {
    pub length: bool,
    pub ratio: bool,
    pub edit: bool,
    pub language: bool,
}

impl FilterVerdicts {
    pub fn accepted(self) -> bool {
        self.length && self.ratio && self.edit && self.language
    }

    /// Compact audit string: `L`, `R`, `E`, `Lang`, each uppercase on pass
    /// and lowercase on fail (e.g. `LRELang` = all passed, `lRELang` =
    /// length failed).
    pub fn flag_string(self) -> String {
        let mut s = String::new();
        s.push(if self.length { 'L' } else { 'l' });
        s.push(if self.ratio { 'R' } else { 'r' });
        s.push(if self.edit { 'E' } else { 'e' });
        s.push_str(if self.language { "Lang" } else { "lang" });
        s
    }
}

/// Levenshtein distance over token sequences.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ai) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, bj) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ai != bj);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Run every filter on a candidate pair. `embedded_tokens` and
/// `primary_tokens` are the token texts of the two sides.
pub fn apply_filters(
    embedded_tokens: &[&str],
    primary_tokens: &[&str],
    embedded_text: &str,
    primary_text: &str,
    config: &FilterConfig,
    lid: &dyn SequenceLid,
) -> FilterVerdicts {
    let (na, nb) = (embedded_tokens.len(), primary_tokens.len());

    let length = (config.min_tokens..=config.max_tokens).contains(&na)
        && (config.min_tokens..=config.max_tokens).contains(&nb);

    let (lo, hi) = (na.min(nb), na.max(nb));
    let ratio = lo > 0 && (hi as f64) <= config.max_len_ratio * (lo as f64);

    let ed = edit_distance(embedded_tokens, primary_tokens);
    let edit = hi > 0
        && ed >= config.min_edit
        && (ed as f64) >= config.min_edit_ratio * (hi as f64);

    let lid_a = lid.identify(embedded_text);
    let lid_b = lid.identify(primary_text);
    let language = match (&config.language_rule, lid_a, lid_b) {
        (LanguageRule::DifferentLanguages, Tag::Lang(a), Tag::Lang(b)) => a != b,
        (LanguageRule::FixedPair(x, y), Tag::Lang(a), Tag::Lang(b)) => {
            (a == *x && b == *y) || (a == *y && b == *x)
        }
        _ => false,
    };

    FilterVerdicts { length, ratio, edit, language }
}
