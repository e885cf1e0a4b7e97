//! Bilingual instance detection.
//!
//! Given the token-level language tags of an instance, the detector names a
//! primary language (most frequent defined tag) and an embedded language
//! (second most frequent), then classifies the instance:
//!
//! 1. instances whose languages fall outside the focus set are excluded;
//! 2. instances with more than the permitted fraction of undefined tokens
//!    are excluded as noise;
//! 3. an instance is *bilingual* when both the primary and the embedded
//!    language form at least one contiguous run of the required length —
//!    runs of English need more tokens than runs of any other language,
//!    which keeps short loanword bursts from counting;
//! 4. everything else is monolingual (or undefined when no tag resolved).
//!
//! Ties for either role are broken toward the lexicographically smaller
//! language code and flagged on the annotation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::langid::{Lang, Tag, TagSequence};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("english run threshold {english} must be >= other run threshold {other}, both >= 1")]
    BadThresholds { english: usize, other: usize },
    #[error("undefined-fraction cutoff {0} must lie in [0, 1]")]
    BadUndefinedMax(f64),
    #[error("focus set must contain the anchor language {0}")]
    AnchorOutsideFocus(&'static str),
}

/// Minimum contiguous-run lengths for a language to count as present, plus
/// the ceiling on the undefined-token fraction.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunThresholds {
    /// Minimum run length for English.
    pub english_n: usize,
    /// Minimum run length for every other language.
    pub other_n: usize,
    /// Instances with undefined fraction strictly above this are excluded.
    pub undefined_max: f64,
}

impl Default for RunThresholds {
    fn default() -> Self {
        RunThresholds { english_n: 10, other_n: 5, undefined_max: 0.10 }
    }
}

impl RunThresholds {
    pub fn validate(&self) -> Result<(), DetectorError> {
        if self.other_n < 1 || self.english_n < self.other_n {
            return Err(DetectorError::BadThresholds {
                english: self.english_n,
                other: self.other_n,
            });
        }
        if !(0.0..=1.0).contains(&self.undefined_max) || self.undefined_max.is_nan() {
            return Err(DetectorError::BadUndefinedMax(self.undefined_max));
        }
        Ok(())
    }

    pub fn min_run(&self, lang: Lang) -> usize {
        if lang == Lang::En {
            self.english_n
        } else {
            self.other_n
        }
    }
}

/// Which languages the study cares about, and the anchor language every
/// bilingual pair must include.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FocusPolicy {
    pub languages: BTreeSet<Lang>,
    pub anchor: Lang,
}

impl FocusPolicy {
    /// All supported languages in focus, anchored on English.
    pub fn all_languages() -> Self {
        FocusPolicy { languages: Lang::ALL.into_iter().collect(), anchor: Lang::En }
    }

    pub fn validate(&self) -> Result<(), DetectorError> {
        if !self.languages.contains(&self.anchor) {
            return Err(DetectorError::AnchorOutsideFocus(self.anchor.code()));
        }
        Ok(())
    }

    pub fn contains(&self, lang: Lang) -> bool {
        self.languages.contains(&lang)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Monolingual,
    Bilingual,
    ExcludedUndefined,
    ExcludedFocus,
}

/// A maximal run of identically tagged tokens.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Run {
    pub tag: Tag,
    pub start: usize,
    pub len: usize,
}

/// Collapse a tag sequence into maximal constant runs. Panics on an empty
/// sequence: instances always hold at least one token.
pub fn contiguous_runs(tags: &[Tag]) -> Vec<Run> {
    assert!(!tags.is_empty(), "an instance has at least one token");
    let mut runs = Vec::new();
    let mut start = 0usize;
    for i in 1..=tags.len() {
        if i == tags.len() || tags[i] != tags[start] {
            runs.push(Run { tag: tags[start], start, len: i - start });
            start = i;
        }
    }
    runs
}

/// Detection result for one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BilingualAnnotation {
    pub instance: String,
    pub verdict: Verdict,
    /// Most frequent defined language; absent when every tag is undefined.
    pub primary: Option<Lang>,
    /// Second most frequent defined language, when one exists.
    pub embedded: Option<Lang>,
    /// Fraction of undefined tokens, in [0, 1].
    pub undef_frac: f64,
    /// Qualifying runs of the primary and embedded languages, as
    /// `(language, start token, run length)`. Empty unless bilingual.
    pub segments: Vec<(Lang, usize, usize)>,
    /// The primary role was decided by a lexicographic tie-break.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub primary_tie: bool,
    /// The embedded role was decided by a lexicographic tie-break.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub embedded_tie: bool,
}

/// Most frequent and second most frequent defined languages, with tie flags.
/// Ties break toward the lexicographically smaller code. Instances tagged in
/// three or more languages keep only these top two; the rest are bystanders.
fn rank_languages(counts: &[usize; Lang::COUNT]) -> (Option<(Lang, bool)>, Option<(Lang, bool)>) {
    let mut ranked: Vec<(Lang, usize)> = Lang::ALL
        .into_iter()
        .zip(counts.iter().copied())
        .filter(|&(_, n)| n > 0)
        .collect();
    // Lang::ALL is in code order, so a stable sort by descending count
    // leaves ties lexicographically resolved.
    ranked.sort_by(|a, b| b.1.cmp(&a.1));
    let top = |i: usize| -> Option<(Lang, bool)> {
        let &(lang, n) = ranked.get(i)?;
        let tied = ranked.iter().any(|&(l, m)| m == n && l != lang);
        Some((lang, tied))
    };
    let primary = top(0);
    let embedded = top(1);
    (primary, embedded)
}

/// Classify one tagged instance.
pub fn detect(
    seq: &TagSequence,
    thresholds: &RunThresholds,
    focus: &FocusPolicy,
) -> BilingualAnnotation {
    let tags = &seq.tags;
    assert!(!tags.is_empty(), "an instance has at least one token");

    let mut counts = [0usize; Lang::COUNT];
    let mut undefined = 0usize;
    for tag in tags {
        match tag {
            Tag::Lang(lang) => counts[lang.index()] += 1,
            Tag::Undefined => undefined += 1,
        }
    }
    let undef_frac = undefined as f64 / tags.len() as f64;

    let (primary, embedded) = rank_languages(&counts);
    let (primary, primary_tie) = match primary {
        Some((lang, tie)) => (Some(lang), tie),
        None => (None, false),
    };
    let (embedded, embedded_tie) = match embedded {
        Some((lang, tie)) => (Some(lang), tie),
        None => (None, false),
    };

    let mut annotation = BilingualAnnotation {
        instance: seq.instance_id.clone(),
        verdict: Verdict::Monolingual,
        primary,
        embedded,
        undef_frac,
        segments: Vec::new(),
        primary_tie,
        embedded_tie,
    };

    // (i) Focus: every named language must be in the focus set, and a
    // bilingual pair must include the anchor.
    let out_of_focus = match (primary, embedded) {
        (Some(p), Some(e)) => {
            !focus.contains(p) || !focus.contains(e) || (p != focus.anchor && e != focus.anchor)
        }
        (Some(p), None) => !focus.contains(p),
        _ => false,
    };
    if out_of_focus {
        annotation.verdict = Verdict::ExcludedFocus;
        return annotation;
    }

    // (ii) Noise: strictly more undefined than permitted.
    if undef_frac > thresholds.undefined_max {
        annotation.verdict = Verdict::ExcludedUndefined;
        return annotation;
    }

    // (iii) Bilingual: both roles form a qualifying contiguous run.
    if let (Some(p), Some(e)) = (primary, embedded) {
        let runs = contiguous_runs(tags);
        let qualifying: Vec<(Lang, usize, usize)> = runs
            .iter()
            .filter_map(|run| match run.tag {
                Tag::Lang(lang) if (lang == p || lang == e) && run.len >= thresholds.min_run(lang) => {
                    Some((lang, run.start, run.len))
                }
                _ => None,
            })
            .collect();
        let has_primary = qualifying.iter().any(|&(l, _, _)| l == p);
        let has_embedded = qualifying.iter().any(|&(l, _, _)| l == e);
        if has_primary && has_embedded {
            annotation.verdict = Verdict::Bilingual;
            annotation.segments = qualifying;
            return annotation;
        }
    }

    // (iv) Monolingual, including the all-undefined degenerate case.
    annotation
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(spec: &[(&str, usize)]) -> TagSequence {
        let mut tags = Vec::new();
        for &(code, n) in spec {
            let tag = if code == "und" {
                Tag::Undefined
            } else {
                Tag::Lang(Lang::from_code(code).unwrap())
            };
            tags.extend(std::iter::repeat(tag).take(n));
        }
        TagSequence { instance_id: "t#0".into(), tags }
    }

    fn detect_default(seq: &TagSequence) -> BilingualAnnotation {
        detect(seq, &RunThresholds::default(), &FocusPolicy::all_languages())
    }

    #[test]
    fn thresholds_validate() {
        assert!(RunThresholds::default().validate().is_ok());
        assert!(RunThresholds { english_n: 4, other_n: 5, undefined_max: 0.1 }
            .validate()
            .is_err());
        assert!(RunThresholds { english_n: 5, other_n: 0, undefined_max: 0.1 }
            .validate()
            .is_err());
        assert!(RunThresholds { english_n: 10, other_n: 5, undefined_max: 1.5 }
            .validate()
            .is_err());
    }

    #[test]
    fn runs_collapse_and_panic_on_empty() {
        let seq = tags(&[("en", 3), ("fr", 2), ("en", 1)]);
        let runs = contiguous_runs(&seq.tags);
        assert_eq!(runs.len(), 3);
        assert_eq!(runs[0], Run { tag: Tag::Lang(Lang::En), start: 0, len: 3 });
        assert_eq!(runs[1], Run { tag: Tag::Lang(Lang::Fr), start: 3, len: 2 });
        assert_eq!(runs[2], Run { tag: Tag::Lang(Lang::En), start: 5, len: 1 });
    }

    #[test]
    #[should_panic(expected = "at least one token")]
    fn empty_tags_panic() {
        contiguous_runs(&[]);
    }

    #[test]
    fn bilingual_when_both_runs_qualify() {
        let seq = tags(&[("en", 12), ("fr", 5), ("en", 3)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::Bilingual);
        assert_eq!(ann.primary, Some(Lang::En));
        assert_eq!(ann.embedded, Some(Lang::Fr));
        assert_eq!(ann.segments, vec![(Lang::En, 0, 12), (Lang::Fr, 12, 5)]);
    }

    #[test]
    fn short_embedded_run_is_monolingual() {
        let seq = tags(&[("en", 12), ("fr", 4), ("en", 3)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::Monolingual);
        assert!(ann.segments.is_empty());
    }

    #[test]
    fn english_needs_the_longer_run_even_as_embedded() {
        // French primary (more tokens), English embedded: the English run
        // still must reach the English threshold.
        let nine = tags(&[("fr", 20), ("en", 9), ("fr", 10)]);
        assert_eq!(detect_default(&nine).verdict, Verdict::Monolingual);
        let ten = tags(&[("fr", 20), ("en", 10), ("fr", 10)]);
        let ann = detect_default(&ten);
        assert_eq!(ann.verdict, Verdict::Bilingual);
        assert_eq!(ann.primary, Some(Lang::Fr));
        assert_eq!(ann.embedded, Some(Lang::En));
    }

    #[test]
    fn scattered_tokens_never_qualify() {
        // 15 French tokens total but no contiguous run of 5.
        let seq = tags(&[
            ("en", 11), ("fr", 3), ("en", 10), ("fr", 4),
            ("en", 10), ("fr", 4), ("en", 10), ("fr", 4),
        ]);
        let ann = detect_default(&seq);
        assert_eq!(ann.embedded, Some(Lang::Fr));
        assert_eq!(ann.verdict, Verdict::Monolingual);
    }

    #[test]
    fn undefined_fraction_boundary_is_inclusive() {
        // Exactly 10% undefined passes; strictly more is excluded.
        let pass = tags(&[("en", 12), ("fr", 6), ("und", 2)]);
        assert_eq!(pass.tags.len(), 20);
        assert_eq!(detect_default(&pass).verdict, Verdict::Bilingual);

        let fail = tags(&[("en", 12), ("fr", 5), ("und", 3)]);
        assert_eq!(fail.tags.len(), 20);
        let ann = detect_default(&fail);
        assert_eq!(ann.verdict, Verdict::ExcludedUndefined);
        assert!(ann.undef_frac > 0.10);
    }

    #[test]
    fn focus_exclusion_beats_noise_exclusion() {
        let mut focus = FocusPolicy::all_languages();
        focus.languages.remove(&Lang::Fr);
        // Out of focus *and* 50% undefined: focus wins.
        let seq = tags(&[("fr", 10), ("und", 10)]);
        let ann = detect(&seq, &RunThresholds::default(), &focus);
        assert_eq!(ann.verdict, Verdict::ExcludedFocus);
    }

    #[test]
    fn pair_without_anchor_is_excluded() {
        // French–German instance: both in focus, but no English.
        let seq = tags(&[("fr", 20), ("de", 10)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::ExcludedFocus);
    }

    #[test]
    fn monolingual_non_anchor_stays_monolingual() {
        let seq = tags(&[("fr", 30)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::Monolingual);
        assert_eq!(ann.primary, Some(Lang::Fr));
        assert_eq!(ann.embedded, None);
    }

    #[test]
    fn all_undefined_is_excluded_as_noise() {
        let seq = tags(&[("und", 8)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::ExcludedUndefined);
        assert_eq!(ann.primary, None);
        assert_eq!(ann.undef_frac, 1.0);
    }

    #[test]
    fn tie_breaks_lexicographically_and_flags() {
        // de and fr tie for the embedded role; de < fr wins.
        let seq = tags(&[("fr", 10), ("de", 10), ("en", 30)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.primary, Some(Lang::En));
        assert_eq!(ann.embedded, Some(Lang::De));
        assert!(ann.embedded_tie);
        assert!(!ann.primary_tie);

        // A dead-even split ties both roles.
        let seq = tags(&[("en", 10), ("fr", 10)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.primary, Some(Lang::En));
        assert_eq!(ann.embedded, Some(Lang::Fr));
        assert!(ann.primary_tie && ann.embedded_tie);
        assert_eq!(ann.verdict, Verdict::Bilingual);
    }

    #[test]
    fn three_languages_keep_top_two() {
        let seq = tags(&[("en", 15), ("fr", 8), ("de", 6)]);
        let ann = detect_default(&seq);
        assert_eq!(ann.verdict, Verdict::Bilingual);
        assert_eq!(ann.primary, Some(Lang::En));
        assert_eq!(ann.embedded, Some(Lang::Fr));
        // The German run is a bystander: not in segments.
        assert!(ann.segments.iter().all(|&(l, _, _)| l != Lang::De));
    }

    #[test]
    fn undefined_break_splits_runs() {
        // 5 French tokens interrupted by one undefined token: no qualifying run.
        let seq = tags(&[("en", 12), ("fr", 3), ("und", 1), ("fr", 2)]);
        assert_eq!(detect_default(&seq).verdict, Verdict::Monolingual);
        // Contiguous: qualifies.
        let seq = tags(&[("en", 12), ("fr", 5), ("und", 1)]);
        assert_eq!(detect_default(&seq).verdict, Verdict::Bilingual);
    }
}
