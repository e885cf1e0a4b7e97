//! Corpus-level aggregation: per-language counts, resource grouping,
//! bilingual/translation fractions, and Pearson correlations between
//! monolingual presence and bilingual/translation yield.

pub mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::{BilingualAnnotation, Verdict};
use crate::langid::Lang;
use crate::miner::TranslationPair;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("vectors differ in length: {xs} vs {ys}")]
    LengthMismatch { xs: usize, ys: usize },
    #[error("correlation needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("correlation undefined: an argument has zero variance")]
    ZeroVariance,
    #[error("cannot merge tallies from different runs: {a:?} vs {b:?}")]
    RunMismatch { a: String, b: String },
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Resourcedness bucket of a language.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceGroup {
    High,
    Medium,
    Low,
}

impl ResourceGroup {
    pub const ALL: [ResourceGroup; 3] =
        [ResourceGroup::High, ResourceGroup::Medium, ResourceGroup::Low];

    pub fn label(self) -> &'static str {
        match self {
            ResourceGroup::High => "high",
            ResourceGroup::Medium => "medium",
            ResourceGroup::Low => "low",
        }
    }

    /// Default fixed grouping. English is the pivot language and belongs to
    /// no group.
    pub fn of(lang: Lang) -> Option<ResourceGroup> {
        use Lang::*;
        Some(match lang {
            En => return None,
            Fr | De | Es | It => ResourceGroup::High,
            Pt | Ru | Zh | Ja | Ar | Id | Ko | Vi | Fa | Sr | Uk => ResourceGroup::Medium,
            _ => ResourceGroup::Low,
        })
    }
}

/// How languages map to resource groups: the default fixed lists, or
/// thresholds on per-language monolingual instance counts for corpora the
/// lists were never written for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceGrouping {
    FixedLists,
    ByMonolingualCount { high_min: u64, medium_min: u64 },
}

impl Default for ResourceGrouping {
    fn default() -> Self {
        ResourceGrouping::FixedLists
    }
}

impl ResourceGrouping {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            ResourceGrouping::FixedLists => Ok(()),
            ResourceGrouping::ByMonolingualCount { high_min, medium_min } => {
                if high_min > medium_min {
                    Ok(())
                } else {
                    Err(format!(
                        "threshold grouping needs high_min ({high_min}) > medium_min ({medium_min})"
                    ))
                }
            }
        }
    }

    pub fn group(&self, lang: Lang, monolingual: u64) -> Option<ResourceGroup> {
        if lang == Lang::En {
            return None;
        }
        match self {
            ResourceGrouping::FixedLists => ResourceGroup::of(lang),
            ResourceGrouping::ByMonolingualCount { high_min, medium_min } => {
                Some(if monolingual >= *high_min {
                    ResourceGroup::High
                } else if monolingual >= *medium_min {
                    ResourceGroup::Medium
                } else {
                    ResourceGroup::Low
                })
            }
        }
    }
}

/// Per-language instance and pair counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageCounts {
    pub monolingual: u64,
    pub bilingual: u64,
    /// Bilingual instances with at least one accepted pair.
    pub translation_instances: u64,
    pub translation_pairs: u64,
}

/// Running corpus totals for one pipeline run. Tallies from shards of the
/// same run merge associatively; merging across runs is a hard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub run_id: String,
    /// Pivot every bilingual pair includes; per-language rows are keyed by
    /// the other member.
    pub anchor: Lang,
    pub instances: u64,
    pub monolingual: u64,
    pub bilingual: u64,
    pub excluded_focus: u64,
    pub excluded_undefined: u64,
    pub translation_instances: u64,
    pub translation_pairs: u64,
    pub per_language: BTreeMap<Lang, LanguageCounts>,
}

impl Tally {
    pub fn new(run_id: impl Into<String>) -> Self {
        Tally {
            run_id: run_id.into(),
            anchor: Lang::En,
            instances: 0,
            monolingual: 0,
            bilingual: 0,
            excluded_focus: 0,
            excluded_undefined: 0,
            translation_instances: 0,
            translation_pairs: 0,
            per_language: BTreeMap::new(),
        }
    }

    pub fn with_anchor(mut self, anchor: Lang) -> Self {
        self.anchor = anchor;
        self
    }

    fn keyed(&self, a: Lang, b: Lang) -> Lang {
        if a == self.anchor {
            b
        } else {
            a
        }
    }

    /// Count one detector verdict.
    pub fn observe_annotation(&mut self, ann: &BilingualAnnotation) {
        self.instances += 1;
        match ann.verdict {
            Verdict::Monolingual => {
                self.monolingual += 1;
                if let Some(primary) = ann.primary {
                    self.per_language.entry(primary).or_default().monolingual += 1;
                }
            }
            Verdict::Bilingual => {
                self.bilingual += 1;
                let primary = ann.primary.expect("bilingual names a primary");
                let embedded = ann.embedded.expect("bilingual names an embedded");
                let key = self.keyed(primary, embedded);
                self.per_language.entry(key).or_default().bilingual += 1;
            }
            Verdict::ExcludedFocus => self.excluded_focus += 1,
            Verdict::ExcludedUndefined => self.excluded_undefined += 1,
        }
    }

    /// Count the mined pairs of one instance (accepted ones only).
    pub fn observe_pairs(&mut self, pairs: &[TranslationPair]) {
        let mut instance_counted = false;
        for pair in pairs.iter().filter(|p| p.accepted) {
            let key = self.keyed(pair.embedded.language, pair.primary.language);
            if !instance_counted {
                self.translation_instances += 1;
                self.per_language.entry(key).or_default().translation_instances += 1;
                instance_counted = true;
            }
            self.translation_pairs += 1;
            self.per_language.entry(key).or_default().translation_pairs += 1;
        }
    }

    /// Associative merge of same-run shard tallies.
    pub fn merge(mut self, other: Tally) -> Result<Tally, StatsError> {
        if self.run_id != other.run_id {
            return Err(StatsError::RunMismatch { a: self.run_id, b: other.run_id });
        }
        self.instances += other.instances;
        self.monolingual += other.monolingual;
        self.bilingual += other.bilingual;
        self.excluded_focus += other.excluded_focus;
        self.excluded_undefined += other.excluded_undefined;
        self.translation_instances += other.translation_instances;
        self.translation_pairs += other.translation_pairs;
        for (lang, counts) in other.per_language {
            let row = self.per_language.entry(lang).or_default();
            row.monolingual += counts.monolingual;
            row.bilingual += counts.bilingual;
            row.translation_instances += counts.translation_instances;
            row.translation_pairs += counts.translation_pairs;
        }
        Ok(self)
    }

    pub fn bilingual_frac(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.bilingual as f64 / self.instances as f64
        }
    }

    pub fn translation_frac(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.translation_instances as f64 / self.instances as f64
        }
    }
}

/// Product-moment correlation coefficient, two-pass formulation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0f64;
    let mut syy = 0.0f64;
    let mut sxy = 0.0f64;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Correlations on both raw and log10(x+1) scales.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub raw: Option<f64>,
    pub log10: Option<f64>,
}

pub fn correlation_pair(xs: &[f64], ys: &[f64]) -> CorrelationPair {
    let log = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| (x + 1.0).log10()).collect() };
    CorrelationPair {
        raw: pearson(xs, ys).ok(),
        log10: pearson(&log(xs), &log(ys)).ok(),
    }
}
