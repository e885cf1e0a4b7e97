//! Ablation mixture construction: partitions instances into four disjoint
//! groups (English, non-English, bilingual, translation), re-packs each
//! group into fixed-length examples, and samples training mixtures for the
//! FULL / −TRA / −BIL / −NEN conditions, reallocating each removed group's
//! share to the next group in the chain TRA→BIL→NEN→ENG.

use std::collections::BTreeSet;
use std::io;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, Example, Instance, PackItem, Packer};
use crate::detector::{BilingualAnnotation, Verdict};
use crate::langid::Lang;

#[derive(Debug, Error)]
pub enum AblationError {
    #[error("{instances} instances but {labels} labels")]
    LengthMismatch { instances: usize, labels: usize },
    #[error("bad mixture proportions: {0}")]
    BadProportions(String),
    #[error("plan for {condition:?} gives ablated group {group:?} a nonzero share")]
    AblatedGroupNonzero { condition: Condition, group: GroupLabel },
    #[error("group {group:?} has no examples but the plan wants {want}")]
    EmptyGroup { group: GroupLabel, want: u64 },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Mixture group of an instance. Assignment precedence is TRA > BIL > NEN >
/// ENG: translation instances never count as plain bilingual, bilingual
/// never as non-English.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GroupLabel {
    Eng,
    Nen,
    Bil,
    Tra,
}

impl GroupLabel {
    pub const COUNT: usize = 4;
    pub const ALL: [GroupLabel; GroupLabel::COUNT] =
        [GroupLabel::Eng, GroupLabel::Nen, GroupLabel::Bil, GroupLabel::Tra];

    pub fn label(self) -> &'static str {
        match self {
            GroupLabel::Eng => "ENG",
            GroupLabel::Nen => "NEN",
            GroupLabel::Bil => "BIL",
            GroupLabel::Tra => "TRA",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Ablation condition. Each condition removes one more group and hands its
/// share down the chain; −NEN is the chain's end with English at 100%.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    #[serde(alias = "FULL")]
    Full,
    #[serde(alias = "MINUS_TRA", alias = "-tra")]
    MinusTra,
    #[serde(alias = "MINUS_BIL", alias = "-bil")]
    MinusBil,
    #[serde(alias = "MINUS_NEN", alias = "-nen")]
    MinusNen,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::Full, Condition::MinusTra, Condition::MinusBil, Condition::MinusNen];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Full => "full",
            Condition::MinusTra => "minus_tra",
            Condition::MinusBil => "minus_bil",
            Condition::MinusNen => "minus_nen",
        }
    }

    /// Groups this condition removes from the mixture.
    pub fn ablated(self) -> &'static [GroupLabel] {
        match self {
            Condition::Full => &[],
            Condition::MinusTra => &[GroupLabel::Tra],
            Condition::MinusBil => &[GroupLabel::Tra, GroupLabel::Bil],
            Condition::MinusNen => &[GroupLabel::Tra, GroupLabel::Bil, GroupLabel::Nen],
        }
    }
}

/// Group labels for a slice of annotated instances. Excluded instances get
/// no label and are only counted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub labels: Vec<Option<GroupLabel>>,
    pub counts: [u64; GroupLabel::COUNT],
    pub excluded: u64,
}

/// Label every instance by precedence TRA > BIL > NEN > ENG. `translation`
/// holds the ids of instances with at least one accepted mined pair; only
/// bilingual instances consult it. Excluded verdicts drop out of the
/// ablation input.
pub fn partition(
    annotations: &[BilingualAnnotation],
    translation: &BTreeSet<String>,
    anchor: Lang,
) -> Partition {
    let mut out = Partition::default();
    for ann in annotations {
        let label = match ann.verdict {
            Verdict::ExcludedFocus | Verdict::ExcludedUndefined => None,
            Verdict::Bilingual => Some(if translation.contains(&ann.instance) {
                GroupLabel::Tra
            } else {
                GroupLabel::Bil
            }),
            Verdict::Monolingual => {
                let primary = ann.primary.expect("monolingual names a primary");
                Some(if primary == anchor { GroupLabel::Eng } else { GroupLabel::Nen })
            }
        };
        match label {
            Some(group) => out.counts[group.index()] += 1,
            None => out.excluded += 1,
        }
        out.labels.push(label);
    }
    out
}

/// Fixed-length examples re-packed per group; examples never mix groups.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupedExamples {
    pub groups: [Vec<Example>; GroupLabel::COUNT],
}

impl GroupedExamples {
    pub fn counts(&self) -> [u64; GroupLabel::COUNT] {
        let mut out = [0u64; GroupLabel::COUNT];
        for (slot, group) in out.iter_mut().zip(&self.groups) {
            *slot = group.len() as u64;
        }
        out
    }

    /// Fraction of examples per group; all zeros when nothing is packed.
    pub fn proportions(&self) -> [f64; GroupLabel::COUNT] {
        mixture_proportions(self.counts())
    }
}

pub fn mixture_proportions(counts: [u64; GroupLabel::COUNT]) -> [f64; GroupLabel::COUNT] {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return [0.0; GroupLabel::COUNT];
    }
    counts.map(|c| c as f64 / total as f64)
}

/// Merge each group's instances into `len`-token examples. `labels` runs
/// parallel to `instances`; unlabeled instances are skipped.
pub fn pack_groups(
    instances: &[Instance],
    labels: &[Option<GroupLabel>],
    len: usize,
) -> Result<GroupedExamples, AblationError> {
    if instances.len() != labels.len() {
        return Err(AblationError::LengthMismatch {
            instances: instances.len(),
            labels: labels.len(),
        });
    }
    let mut packers: Vec<Packer> = (0..GroupLabel::COUNT)
        .map(|_| Packer::new(len))
        .collect::<Result<_, CorpusError>>()?;
    let mut out = GroupedExamples::default();
    for (instance, label) in instances.iter().zip(labels) {
        let Some(group) = label else { continue };
        let item = PackItem {
            id: instance.id.clone(),
            source: instance.source,
            text: instance.text.clone(),
            tokens: instance.tokens.clone(),
        };
        out.groups[group.index()].extend(packers[group.index()].push(&item));
    }
    for (group, packer) in out.groups.iter_mut().zip(packers) {
        group.extend(packer.finish());
    }
    Ok(out)
}

/// Sampling recipe for one ablation condition: the post-reallocation group
/// shares, the example budget, and the sampling seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationPlan {
    pub condition: Condition,
    pub target_total: u64,
    /// Share per group in [`GroupLabel::ALL`] order, after the condition's
    /// reallocation; ablated groups hold exactly 0.
    pub proportions: [f64; GroupLabel::COUNT],
    pub seed: u64,
}

impl AblationPlan {
    /// Build a plan from the FULL-mixture proportions, reallocating shares
    /// down the chain for the ablated groups.
    pub fn new(
        condition: Condition,
        target_total: u64,
        full_proportions: [f64; GroupLabel::COUNT],
        seed: u64,
    ) -> Result<Self, AblationError> {
        check_simplex(&full_proportions)?;
        let mut p = full_proportions;
        let (nen, bil, tra) =
            (GroupLabel::Nen.index(), GroupLabel::Bil.index(), GroupLabel::Tra.index());
        match condition {
            Condition::Full => {}
            Condition::MinusTra => {
                p[bil] += p[tra];
                p[tra] = 0.0;
            }
            Condition::MinusBil => {
                p[bil] += p[tra];
                p[tra] = 0.0;
                p[nen] += p[bil];
                p[bil] = 0.0;
            }
            Condition::MinusNen => p = [1.0, 0.0, 0.0, 0.0],
        }
        let plan = AblationPlan { condition, target_total, proportions: p, seed };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), AblationError> {
        check_simplex(&self.proportions)?;
        for &group in self.condition.ablated() {
            if self.proportions[group.index()] != 0.0 {
                return Err(AblationError::AblatedGroupNonzero {
                    condition: self.condition,
                    group,
                });
            }
        }
        Ok(())
    }

    /// Integer example counts per group: floors of the fractional targets,
    /// with the shortfall handed out by largest remainder (ties to the
    /// group with the larger share, then to the earlier group).
    pub fn condition_counts(&self) -> [u64; GroupLabel::COUNT] {
        let total = self.target_total as f64;
        let raw = self.proportions.map(|p| p * total);
        let mut counts = raw.map(|r| r.floor() as u64);
        let mut deficit = self.target_total as i64 - counts.iter().sum::<u64>() as i64;
        let mut order: Vec<usize> = (0..GroupLabel::COUNT).collect();
        order.sort_by(|&a, &b| {
            raw[b]
                .fract()
                .total_cmp(&raw[a].fract())
                .then(self.proportions[b].total_cmp(&self.proportions[a]))
                .then(a.cmp(&b))
        });
        let mut at = 0;
        while deficit > 0 {
            counts[order[at % GroupLabel::COUNT]] += 1;
            deficit -= 1;
            at += 1;
        }
        let mut at = GroupLabel::COUNT;
        while deficit < 0 {
            at -= 1;
            let g = order[at % GroupLabel::COUNT];
            if counts[g] > 0 {
                counts[g] -= 1;
                deficit += 1;
            }
        }
        counts
    }
}

fn check_simplex(p: &[f64; GroupLabel::COUNT]) -> Result<(), AblationError> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(AblationError::BadProportions(format!(
            "shares must be finite and non-negative, got {p:?}"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(AblationError::BadProportions(format!("shares sum to {sum}, want 1")));
    }
    Ok(())
}

/// One sampled example: its group, its sequence number within the group's
/// packed example set, and the instances it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub group: GroupLabel,
    pub example: u64,
    pub instances: Vec<String>,
}

/// Deterministic sample of one condition's training mixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionManifest {
    pub condition: Condition,
    pub seed: u64,
    pub target_total: u64,
    pub counts: [u64; GroupLabel::COUNT],
    /// Per group: true when the group ran out of examples and sampling fell
    /// back to drawing with replacement.
    pub with_replacement: [bool; GroupLabel::COUNT],
    pub entries: Vec<ManifestEntry>,
}

/// Sample `plan.condition_counts()` examples per group. Each group draws
/// from its own RNG stream (same seed, stream = group index), so one
/// group's draw never shifts another's. Groups with enough examples are
/// sampled without replacement; exhausted groups fall back to replacement
/// and are flagged in the manifest.
pub fn build_condition(
    plan: &AblationPlan,
    grouped: &GroupedExamples,
) -> Result<ConditionManifest, AblationError> {
    plan.validate()?;
    let counts = plan.condition_counts();
    let mut with_replacement = [false; GroupLabel::COUNT];
    let mut entries = Vec::new();
    for group in GroupLabel::ALL {
        let want = counts[group.index()];
        if want == 0 {
            continue;
        }
        let pool = &grouped.groups[group.index()];
        if pool.is_empty() {
            return Err(AblationError::EmptyGroup { group, want });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        rng.set_stream(group.index() as u64);
        let want = want as usize;
        let mut picked: Vec<usize> = if want <= pool.len() {
            let mut idx: Vec<usize> = (0..pool.len()).collect();
            for i in 0..want {
                let j = rng.random_range(i..idx.len());
                idx.swap(i, j);
            }
            idx.truncate(want);
            idx
        } else {
            with_replacement[group.index()] = true;
            log::warn!(
                "group {} has {} examples but the plan wants {want}; sampling with replacement",
                group.label(),
                pool.len()
            );
            (0..want).map(|_| rng.random_range(0..pool.len())).collect()
        };
        picked.sort_unstable();
        for i in picked {
            let example = &pool[i];
            entries.push(ManifestEntry {
                group,
                example: example.seq,
                instances: example
                    .provenance
                    .iter()
                    .map(|p| format!("{}#{}", p.doc, p.frag))
                    .collect(),
            });
        }
    }
    Ok(ConditionManifest {
        condition: plan.condition,
        seed: plan.seed,
        target_total: plan.target_total,
        counts,
        with_replacement,
        entries,
    })
}

/// Write the manifest as JSONL, one line per sampled example.
pub fn write_manifest_jsonl<W: io::Write>(
    manifest: &ConditionManifest,
    mut w: W,
) -> io::Result<()> {
    for entry in &manifest.entries {
        let line = serde_json::to_string(entry).expect("manifest entries serialize");
        w.write_all(line.as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DefaultTokenizer, Source, Tokenizer};

    const PAPER_TOTAL: u64 = 51_200_000;
    const FULL_CELLS: [u64; 4] = [43_186_985, 7_224_737, 517_688, 270_590];

    fn paper_proportions() -> [f64; 4] {
        FULL_CELLS.map(|c| c as f64 / PAPER_TOTAL as f64)
    }

    fn ann(id: &str, verdict: Verdict, primary: Option<Lang>) -> BilingualAnnotation {
        BilingualAnnotation {
            instance: id.into(),
            verdict,
            primary,
            embedded: matches!(verdict, Verdict::Bilingual).then_some(Lang::Fr),
            undef_frac: 0.0,
            segments: vec![],
            primary_tie: false,
            embedded_tie: false,
        }
    }

    fn instance(id: &str, words: usize) -> Instance {
        let text = vec!["tok"; words].join(" ");
        let tokens = DefaultTokenizer.tokenize(&text).unwrap();
        Instance {
            id: format!("{id}#0"),
            doc: id.into(),
            source: Source::Web,
            example: 0,
            text,
            tokens,
        }
    }

    #[test]
    fn partition_follows_precedence() {
        let anns = vec![
            ann("a#0", Verdict::Bilingual, Some(Lang::En)),
            ann("b#0", Verdict::Bilingual, Some(Lang::En)),
            ann("c#0", Verdict::Monolingual, Some(Lang::Fr)),
            ann("d#0", Verdict::Monolingual, Some(Lang::En)),
            ann("e#0", Verdict::ExcludedFocus, Some(Lang::De)),
            ann("f#0", Verdict::ExcludedUndefined, None),
        ];
        let translation = BTreeSet::from(["a#0".to_string()]);
        let part = partition(&anns, &translation, Lang::En);
        assert_eq!(
            part.labels,
            vec![
                Some(GroupLabel::Tra),
                Some(GroupLabel::Bil),
                Some(GroupLabel::Nen),
                Some(GroupLabel::Eng),
                None,
                None,
            ]
        );
        assert_eq!(part.counts, [1, 1, 1, 1]);
        assert_eq!(part.excluded, 2);
    }

    #[test]
    fn pack_groups_merges_three_700_token_instances_into_two_examples() {
        let instances = vec![instance("a", 700), instance("b", 700), instance("c", 700)];
        let labels = vec![Some(GroupLabel::Eng); 3];
        let packed = pack_groups(&instances, &labels, 2048).unwrap();
        assert_eq!(packed.counts(), [2, 0, 0, 0]);
        let eng = &packed.groups[GroupLabel::Eng.index()];
        assert_eq!(eng[0].width(), 2048);
        assert_eq!(eng[0].pad, 0);
        assert_eq!(eng[0].boundaries, vec![700, 1400]);
        assert_eq!(eng[1].tokens.len(), 2100 - 2048);
        assert_eq!(eng[1].pad as usize, 2048 - 52);
    }

    #[test]
    fn empty_group_packs_to_zero_examples() {
        let packed = pack_groups(&[], &[], 2048).unwrap();
        assert_eq!(packed.counts(), [0, 0, 0, 0]);
    }

    #[test]
    fn unlabeled_instances_are_left_out() {
        let instances = vec![instance("a", 10), instance("b", 10)];
        let labels = vec![None, Some(GroupLabel::Bil)];
        let packed = pack_groups(&instances, &labels, 64).unwrap();
        assert_eq!(packed.counts(), [0, 0, 1, 0]);
        assert_eq!(packed.groups[GroupLabel::Bil.index()][0].provenance[0].doc, "b#0");
    }

    #[test]
    fn mixture_proportions_recover_seed_targets() {
        let props = mixture_proportions([844, 141, 10, 5]);
        let targets = [0.844, 0.141, 0.010, 0.005];
        for (p, t) in props.iter().zip(targets) {
            assert!((p - t).abs() < 5e-4, "{p} vs {t}");
        }
    }

    #[test]
    fn full_condition_reproduces_the_published_cells() {
        let plan = AblationPlan::new(Condition::Full, PAPER_TOTAL, paper_proportions(), 7).unwrap();
        let counts = plan.condition_counts();
        assert_eq!(counts.iter().sum::<u64>(), PAPER_TOTAL);
        for (got, want) in counts.iter().zip(FULL_CELLS) {
            assert!(got.abs_diff(want) <= 1, "{got} vs {want}");
        }
    }

    #[test]
    fn minus_tra_moves_tra_share_into_bil() {
        let plan =
            AblationPlan::new(Condition::MinusTra, PAPER_TOTAL, paper_proportions(), 7).unwrap();
        let counts = plan.condition_counts();
        assert_eq!(counts.iter().sum::<u64>(), PAPER_TOTAL);
        let published = [43_186_985u64, 7_224_737, 788_279, 0];
        for (got, want) in counts.iter().zip(published) {
            assert!(got.abs_diff(want) <= 1, "{got} vs {want}");
        }
        assert_eq!(counts[GroupLabel::Tra.index()], 0);
    }

    #[test]
    fn minus_bil_moves_bilingual_share_into_nen() {
        let plan =
            AblationPlan::new(Condition::MinusBil, PAPER_TOTAL, paper_proportions(), 7).unwrap();
        let counts = plan.condition_counts();
        assert_eq!(counts.iter().sum::<u64>(), PAPER_TOTAL);
        let published = [43_186_985u64, 8_013_015, 0, 0];
        for (got, want) in counts.iter().zip(published) {
            assert!(got.abs_diff(want) <= 1, "{got} vs {want}");
        }
    }

    #[test]
    fn minus_nen_is_all_english() {
        let plan = AblationPlan::new(Condition::MinusNen, 1000, paper_proportions(), 7).unwrap();
        assert_eq!(plan.proportions, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(plan.condition_counts(), [1000, 0, 0, 0]);
    }

    #[test]
    fn largest_remainder_breaks_ties_toward_the_larger_group() {
        let plan = AblationPlan {
            condition: Condition::Full,
            target_total: 7,
            proportions: [0.5, 0.3, 0.2, 0.0],
            seed: 0,
        };
        assert_eq!(plan.condition_counts(), [4, 2, 1, 0]);

        let even = AblationPlan {
            condition: Condition::Full,
            target_total: 2,
            proportions: [0.5, 0.25, 0.25, 0.0],
            seed: 0,
        };
        assert_eq!(even.condition_counts(), [1, 1, 0, 0]);
    }

    #[test]
    fn plans_reject_bad_shares() {
        let err = AblationPlan::new(Condition::Full, 10, [0.5, 0.2, 0.2, 0.2], 0).unwrap_err();
        assert!(matches!(err, AblationError::BadProportions(_)));

        let tampered = AblationPlan {
            condition: Condition::MinusBil,
            target_total: 10,
            proportions: [0.8, 0.1, 0.1, 0.0],
            seed: 0,
        };
        assert!(matches!(
            tampered.validate(),
            Err(AblationError::AblatedGroupNonzero { group: GroupLabel::Bil, .. })
        ));
    }

    fn grouped_fixture(per_group: [usize; 4], words: usize, len: usize) -> GroupedExamples {
        let mut instances = Vec::new();
        let mut labels = Vec::new();
        for (gi, group) in GroupLabel::ALL.iter().enumerate() {
            for k in 0..per_group[gi] {
                instances.push(instance(&format!("{}-{k}", group.label()), words));
                labels.push(Some(*group));
            }
        }
        pack_groups(&instances, &labels, len).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let grouped = grouped_fixture([12, 8, 5, 3], 32, 32);
        let plan =
            AblationPlan::new(Condition::Full, 20, [0.5, 0.25, 0.15, 0.10], 99).unwrap();
        let a = build_condition(&plan, &grouped).unwrap();
        let b = build_condition(&plan, &grouped).unwrap();
        assert_eq!(a, b);
        let other_seed = AblationPlan { seed: 100, ..plan };
        let c = build_condition(&other_seed, &grouped).unwrap();
        assert_ne!(a.entries, c.entries);
        assert_eq!(a.counts, c.counts);
    }

    #[test]
    fn sampling_without_replacement_never_repeats_an_example() {
        let grouped = grouped_fixture([10, 10, 10, 10], 32, 32);
        let plan = AblationPlan::new(Condition::Full, 20, [0.25; 4], 5).unwrap();
        let manifest = build_condition(&plan, &grouped).unwrap();
        assert_eq!(manifest.with_replacement, [false; 4]);
        assert_eq!(manifest.entries.len(), 20);
        for group in GroupLabel::ALL {
            let mut seqs: Vec<u64> = manifest
                .entries
                .iter()
                .filter(|e| e.group == group)
                .map(|e| e.example)
                .collect();
            assert_eq!(seqs.len(), 5);
            seqs.dedup();
            assert_eq!(seqs.len(), 5, "repeated example in group {group:?}");
        }
    }

    #[test]
    fn exhausted_group_falls_back_to_replacement_and_is_flagged() {
        let grouped = grouped_fixture([3, 10, 10, 10], 32, 32);
        let plan = AblationPlan::new(Condition::Full, 24, [0.5, 0.25, 0.15, 0.10], 5).unwrap();
        let manifest = build_condition(&plan, &grouped).unwrap();
        assert_eq!(manifest.counts[0], 12);
        assert!(manifest.with_replacement[0]);
        assert!(!manifest.with_replacement[1]);
        assert_eq!(manifest.entries.iter().filter(|e| e.group == GroupLabel::Eng).count(), 12);
    }

    #[test]
    fn empty_group_with_positive_demand_errors() {
        let grouped = grouped_fixture([4, 4, 4, 0], 32, 32);
        let plan = AblationPlan::new(Condition::Full, 8, [0.25; 4], 5).unwrap();
        let err = build_condition(&plan, &grouped).unwrap_err();
        assert!(matches!(err, AblationError::EmptyGroup { group: GroupLabel::Tra, want: 2 }));
    }

    #[test]
    fn manifest_entries_never_mix_groups() {
        let grouped = grouped_fixture([6, 6, 6, 6], 16, 64);
        let plan = AblationPlan::new(Condition::Full, 6, [0.25; 4], 11).unwrap();
        let manifest = build_condition(&plan, &grouped).unwrap();
        for entry in &manifest.entries {
            let prefix = format!("{}-", entry.group.label());
            assert!(
                entry.instances.iter().all(|id| id.starts_with(&prefix)),
                "example {} of group {:?} holds {:?}",
                entry.example,
                entry.group,
                entry.instances
            );
        }
    }

    #[test]
    fn manifest_jsonl_round_trips() {
        let grouped = grouped_fixture([4, 4, 4, 4], 16, 64);
        let plan = AblationPlan::new(Condition::MinusTra, 6, [0.4, 0.3, 0.2, 0.1], 3).unwrap();
        let manifest = build_condition(&plan, &grouped).unwrap();
        assert_eq!(manifest.counts[GroupLabel::Tra.index()], 0);
        let mut buf = Vec::new();
        write_manifest_jsonl(&manifest, &mut buf).unwrap();
        let lines: Vec<ManifestEntry> = String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines, manifest.entries);
        assert!(lines.iter().all(|e| e.group != GroupLabel::Tra));
    }

    #[test]
    fn condition_serde_accepts_published_spellings() {
        for (text, want) in [
            ("\"full\"", Condition::Full),
            ("\"FULL\"", Condition::Full),
            ("\"minus_tra\"", Condition::MinusTra),
            ("\"MINUS_BIL\"", Condition::MinusBil),
            ("\"-nen\"", Condition::MinusNen),
        ] {
            let got: Condition = serde_json::from_str(text).unwrap();
            assert_eq!(got, want, "{text}");
        }
        assert_eq!(serde_json::to_string(&Condition::MinusTra).unwrap(), "\"minus_tra\"");
        assert_eq!(serde_json::to_string(&GroupLabel::Tra).unwrap(), "\"TRA\"");
    }
}
