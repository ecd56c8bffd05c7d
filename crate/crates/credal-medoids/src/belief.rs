//! Frame-of-discernment bookkeeping, basic belief assignments and the
//! decision transforms (credibility, plausibility, pignistic probability,
//! hardening rules).
//!
//! A basic belief assignment (bba) spreads one unit of mass over a family of
//! focal sets: subsets of the frame `{0..c-1}` plus the empty set, which
//! absorbs outlier mass. All types here are immutable after construction and
//! every operation is a pure function.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Row-sum tolerance for a valid bba.
pub const BBA_SUM_TOLERANCE: f64 = 1e-9;

/// A subset of the frame of discernment, stored as a bitset over cluster
/// indices `0..c-1`. The empty bitset is the outlier class.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FocalSet {
    bits: u64,
}

impl FocalSet {
    /// Largest supported frame size.
    pub const MAX_CLUSTERS: usize = 64;

    pub fn empty() -> Self {
        FocalSet { bits: 0 }
    }

    pub fn singleton(k: usize) -> Self {
        debug_assert!(k < Self::MAX_CLUSTERS);
        FocalSet { bits: 1u64 << k }
    }

    /// The full frame over `c` clusters.
    pub fn full(c: usize) -> Self {
        debug_assert!(c <= Self::MAX_CLUSTERS);
        if c == 64 {
            FocalSet { bits: u64::MAX }
        } else {
            FocalSet { bits: (1u64 << c) - 1 }
        }
    }

    pub fn from_members(members: &[usize]) -> Self {
        let mut bits = 0u64;
        for &m in members {
            debug_assert!(m < Self::MAX_CLUSTERS);
            bits |= 1u64 << m;
        }
        FocalSet { bits }
    }

    pub fn members(&self) -> Vec<usize> {
        (0..Self::MAX_CLUSTERS).filter(|&k| self.contains(k)).collect()
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, k: usize) -> bool {
        k < Self::MAX_CLUSTERS && self.bits & (1u64 << k) != 0
    }

    pub fn is_subset_of(&self, other: &FocalSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersects(&self, other: &FocalSet) -> bool {
        self.bits & other.bits != 0
    }

    /// Complement within a frame of `c` clusters.
    pub fn complement(&self, c: usize) -> FocalSet {
        FocalSet { bits: !self.bits & FocalSet::full(c).bits }
    }

    /// If the set is a singleton, its sole member.
    pub fn as_singleton(&self) -> Option<usize> {
        if self.cardinality() == 1 {
            Some(self.bits.trailing_zeros() as usize)
        } else {
            None
        }
    }

    /// Canonical comparison: cardinality ascending, then lexicographic on the
    /// sorted member indices. This is the order focal-set families use, so
    /// mass matrices are comparable across runs and serializations.
    pub fn cmp_canonical(&self, other: &FocalSet) -> Ordering {
        self.cardinality()
            .cmp(&other.cardinality())
            .then_with(|| self.members().cmp(&other.members()))
    }
}

impl fmt::Debug for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members = self.members();
        write!(f, "{{")?;
        for (pos, m) in members.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m)?;
        }
        write!(f, "}}")
    }
}

/// The ordered list of focal sets masses are defined over.
///
/// The family always starts with the empty set, contains every singleton, and
/// lists the remaining sets by cardinality then lexicographic member order,
/// which puts the full frame last whenever it is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocalSetFamily {
    c: usize,
    max_cardinality: usize,
    include_full_frame: bool,
    sets: Vec<FocalSet>,
}

/// All `k`-element subsets of `0..c` in lexicographic order.
fn combinations(c: usize, k: usize) -> Vec<FocalSet> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > c {
        return out;
    }
    loop {
        out.push(FocalSet::from_members(&idx));
        // advance the combination
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != pos + c - k {
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Build the focal-set family for `c` clusters: the empty set, every nonempty
/// subset of cardinality at most `max_cardinality`, and the full frame when
/// `include_full_frame` is set (it is already present when
/// `max_cardinality == c`).
pub fn enumerate_focal_sets(
    c: usize,
    max_cardinality: usize,
    include_full_frame: bool,
) -> Result<FocalSetFamily> {
    if c < 2 {
        return Err(Error::InvalidFrame(format!(
            "at least 2 clusters required, got {c}"
        )));
    }
    if c > FocalSet::MAX_CLUSTERS {
        return Err(Error::InvalidFrame(format!(
            "at most {} clusters supported, got {c}",
            FocalSet::MAX_CLUSTERS
        )));
    }
    if max_cardinality < 1 || max_cardinality > c {
        return Err(Error::InvalidArgument(format!(
            "max_cardinality must be in 1..={c}, got {max_cardinality}"
        )));
    }
    let mut sets = vec![FocalSet::empty()];
    for k in 1..=max_cardinality {
        sets.extend(combinations(c, k));
    }
    if include_full_frame && max_cardinality < c {
        sets.push(FocalSet::full(c));
    }
    Ok(FocalSetFamily { c, max_cardinality, include_full_frame, sets })
}

impl FocalSetFamily {
    pub fn c(&self) -> usize {
        self.c
    }

    pub fn max_cardinality(&self) -> usize {
        self.max_cardinality
    }

    pub fn include_full_frame(&self) -> bool {
        self.include_full_frame
    }

    /// Number of focal sets, including the empty set.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Never true: every family contains at least the empty set.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sets(&self) -> &[FocalSet] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> FocalSet {
        self.sets[j]
    }

    /// Family index of the singleton `{k}`. The empty set sits at index 0 and
    /// singletons follow in member order, so this is `1 + k`.
    pub fn singleton_index(&self, k: usize) -> usize {
        debug_assert!(k < self.c);
        1 + k
    }

    pub fn index_of(&self, set: &FocalSet) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }

    /// Indices and sets of the nonempty focal sets, in canonical order.
    pub fn nonempty(&self) -> impl Iterator<Item = (usize, FocalSet)> + '_ {
        self.sets.iter().copied().enumerate().skip(1)
    }
}

/// A basic belief assignment: nonnegative masses aligned to a family's focal
/// set order, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Bba {
    masses: Vec<f64>,
}

impl Bba {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        for (j, &m) in masses.iter().enumerate() {
            if !(m >= 0.0) {
                return Err(Error::InvalidBba(format!("mass {m} at index {j} is negative or NaN")));
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > BBA_SUM_TOLERANCE {
            return Err(Error::InvalidBba(format!("masses sum to {sum}, expected 1")));
        }
        Ok(Bba { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn get(&self, j: usize) -> f64 {
        self.masses[j]
    }

    /// Mass on the empty set (family index 0).
    pub fn empty_mass(&self) -> f64 {
        self.masses[0]
    }
}

/// Credibility: total mass of the nonempty subsets of `set`.
pub fn bel(family: &FocalSetFamily, bba: &Bba, set: FocalSet) -> f64 {
    family
        .nonempty()
        .filter(|(_, s)| s.is_subset_of(&set))
        .map(|(j, _)| bba.get(j))
        .sum()
}

/// Plausibility: total mass of the sets intersecting `set`.
pub fn pl(family: &FocalSetFamily, bba: &Bba, set: FocalSet) -> f64 {
    family
        .nonempty()
        .filter(|(_, s)| s.intersects(&set))
        .map(|(j, _)| bba.get(j))
        .sum()
}

/// Pignistic probability over the `c` singletons: each focal mass is split
/// equally among its members after discounting the empty-set mass.
///
/// Fails with a total-conflict error when `m(∅) = 1`.
pub fn betp(family: &FocalSetFamily, bba: &Bba) -> Result<Vec<f64>> {
    let conflict = bba.empty_mass();
    let norm = 1.0 - conflict;
    if norm <= 1e-12 {
        return Err(Error::TotalConflict);
    }
    let mut probs = vec![0.0; family.c()];
    for (j, set) in family.nonempty() {
        let share = bba.get(j) / (set.cardinality() as f64 * norm);
        for k in 0..family.c() {
            if set.contains(k) {
                probs[k] += share;
            }
        }
    }
    Ok(probs)
}

/// A hardened per-object decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HardLabel {
    /// Committed to a single cluster.
    Specific(usize),
    /// Committed only to a set of two or more clusters.
    Imprecise(FocalSet),
    /// Assigned to the empty set.
    Outlier,
}

impl HardLabel {
    fn from_set(set: FocalSet) -> HardLabel {
        match set.cardinality() {
            0 => HardLabel::Outlier,
            1 => HardLabel::Specific(set.as_singleton().unwrap()),
            _ => HardLabel::Imprecise(set),
        }
    }

    pub fn is_specific(&self) -> bool {
        matches!(self, HardLabel::Specific(_))
    }

    pub fn as_specific(&self) -> Option<usize> {
        match self {
            HardLabel::Specific(k) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for HardLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardLabel::Specific(k) => write!(f, "{}", k),
            HardLabel::Imprecise(set) => write!(f, "{}", set),
            HardLabel::Outlier => write!(f, "{{}}"),
        }
    }
}

/// Rule used to harden a credal partition into per-object labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HardeningRule {
    /// Focal set with the highest mass; may be imprecise or the outlier class.
    MaxMass,
    /// Singleton with the highest pignistic probability.
    MaxBetp,
    /// Plausibility-weighted rule: argmax over nonempty `X` of
    /// `K λ |X|^{-r} Pl(X)` with `K = 1/(1 - m(∅))`.
    Appriou { r: f64, lambda: f64 },
}

impl HardeningRule {
    /// Appriou rule with the default exponent `r = 0.5` and `λ = 1`.
    pub fn appriou_default() -> Self {
        HardeningRule::Appriou { r: 0.5, lambda: 1.0 }
    }
}

/// A credal partition: one bba per object over a shared focal-set family.
#[derive(Clone, Debug, PartialEq)]
pub struct CredalPartition {
    family: FocalSetFamily,
    masses: Vec<Vec<f64>>,
}

impl CredalPartition {
    pub fn new(family: FocalSetFamily, masses: Vec<Vec<f64>>) -> Result<Self> {
        let f = family.len();
        for (i, row) in masses.iter().enumerate() {
            if row.len() != f {
                return Err(Error::LengthMismatch { left: row.len(), right: f });
            }
            Bba::new(row.clone()).map_err(|e| {
                Error::InvalidBba(format!("object {i}: {e}"))
            })?;
        }
        Ok(CredalPartition { family, masses })
    }

    pub fn family(&self) -> &FocalSetFamily {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.masses[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.masses
    }

    pub fn bba(&self, i: usize) -> Bba {
        Bba { masses: self.masses[i].clone() }
    }

    /// Pignistic probabilities for every object.
    pub fn betp_matrix(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.n()).map(|i| betp(&self.family, &self.bba(i))).collect()
    }
}

/// Harden every row of a credal partition.
///
/// Ties break toward the smaller cardinality, then the lowest canonical
/// index, preferring the more specific decision.
pub fn harden(partition: &CredalPartition, rule: HardeningRule) -> Result<Vec<HardLabel>> {
    (0..partition.n())
        .map(|i| harden_row(partition.family(), &partition.bba(i), rule))
        .collect()
}

fn harden_row(family: &FocalSetFamily, bba: &Bba, rule: HardeningRule) -> Result<HardLabel> {
    match rule {
        HardeningRule::MaxMass => {
            // Family order is canonical (cardinality, then lexicographic), so
            // keeping the first strict maximum implements the tie-break.
            let mut best = 0;
            for j in 1..family.len() {
                if bba.get(j) > bba.get(best) {
                    best = j;
                }
            }
            Ok(HardLabel::from_set(family.set(best)))
        }
        HardeningRule::MaxBetp => {
            let probs = betp(family, bba)?;
            let mut best = 0;
            for (k, &p) in probs.iter().enumerate() {
                if p > probs[best] {
                    best = k;
                }
            }
            Ok(HardLabel::Specific(best))
        }
        HardeningRule::Appriou { r, lambda } => {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidArgument(format!("appriou r must be in [0,1], got {r}")));
            }
            if lambda <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "appriou lambda must be positive, got {lambda}"
                )));
            }
            let conflict = bba.empty_mass();
            let k_norm = if 1.0 - conflict > 1e-12 { 1.0 / (1.0 - conflict) } else { 1.0 };
            // Candidates are all nonempty subsets of the frame, scanned in
            // canonical order so ties resolve to the more specific set.
            let c = family.c();
            let mut best: Option<(FocalSet, f64)> = None;
            for card in 1..=c {
                for set in combinations(c, card) {
                    let weight = k_norm * lambda * (set.cardinality() as f64).powf(-r);
                    let score = weight * pl(family, bba, set);
                    match best {
                        Some((_, best_score)) if score <= best_score => {}
                        _ => best = Some((set, score)),
                    }
                }
            }
            let (set, _) = best.expect("frame has at least one nonempty subset");
            Ok(HardLabel::from_set(set))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family2() -> FocalSetFamily {
        enumerate_focal_sets(2, 2, true).unwrap()
    }

    #[test]
    fn powerset_of_two_clusters() {
        let fam = family2();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.set(0), FocalSet::empty());
        assert_eq!(fam.set(1), FocalSet::singleton(0));
        assert_eq!(fam.set(2), FocalSet::singleton(1));
        assert_eq!(fam.set(3), FocalSet::full(2));
    }

    #[test]
    fn family_count_c4_pairs_plus_frame() {
        let fam = enumerate_focal_sets(4, 2, true).unwrap();
        // 1 empty + 4 singletons + 6 pairs + frame
        assert_eq!(fam.len(), 12);
        assert_eq!(fam.set(11), FocalSet::full(4));
    }

    #[test]
    fn singletons_only_family() {
        let fam = enumerate_focal_sets(3, 1, false).unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.sets()[1..].iter().map(|s| s.cardinality()).max(), Some(1));
    }

    #[test]
    fn family_order_is_canonical() {
        let fam = enumerate_focal_sets(4, 3, true).unwrap();
        for w in fam.sets().windows(2) {
            assert_eq!(w[0].cmp_canonical(&w[1]), Ordering::Less);
        }
        // lexicographic on members, not on raw bit value: {0,3} < {1,2}
        let i03 = fam.index_of(&FocalSet::from_members(&[0, 3])).unwrap();
        let i12 = fam.index_of(&FocalSet::from_members(&[1, 2])).unwrap();
        assert!(i03 < i12);
    }

    #[test]
    fn invalid_frames_rejected() {
        assert!(matches!(enumerate_focal_sets(1, 1, true), Err(Error::InvalidFrame(_))));
        assert!(matches!(enumerate_focal_sets(3, 4, true), Err(Error::InvalidArgument(_))));
        assert!(matches!(enumerate_focal_sets(3, 0, true), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn bba_validation() {
        assert!(Bba::new(vec![0.5, 0.5]).is_ok());
        assert!(Bba::new(vec![0.5, 0.6]).is_err());
        assert!(Bba::new(vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn bel_only_counts_subsets() {
        let fam = family2();
        let bba = Bba::new(vec![0.0, 0.6, 0.0, 0.4]).unwrap();
        assert_eq!(bel(&fam, &bba, FocalSet::singleton(0)), 0.6);
        assert_eq!(bel(&fam, &bba, FocalSet::full(2)), 1.0);
    }

    #[test]
    fn bel_sums_three_terms() {
        let fam = family2();
        let bba = Bba::new(vec![0.0, 0.3, 0.2, 0.5]).unwrap();
        assert!((bel(&fam, &bba, FocalSet::full(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vacuous_bba_bel_pl() {
        let fam = family2();
        let vacuous = Bba::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(bel(&fam, &vacuous, FocalSet::singleton(0)), 0.0);
        assert_eq!(bel(&fam, &vacuous, FocalSet::full(2)), 1.0);
        assert_eq!(pl(&fam, &vacuous, FocalSet::singleton(0)), 1.0);
        assert_eq!(pl(&fam, &vacuous, FocalSet::singleton(1)), 1.0);
    }

    #[test]
    fn pl_through_linkage_relation() {
        let fam = family2();
        // m(∅)=0.2, m({0})=0.8: pl({1}) = 1 - m(∅) - bel({0}) = 0
        let bba = Bba::new(vec![0.2, 0.8, 0.0, 0.0]).unwrap();
        assert!(pl(&fam, &bba, FocalSet::singleton(1)).abs() < 1e-12);
        let bba2 = Bba::new(vec![0.0, 0.6, 0.0, 0.4]).unwrap();
        assert_eq!(pl(&fam, &bba2, FocalSet::singleton(0)), 1.0);
    }

    #[test]
    fn betp_splits_mass_of_meta_sets() {
        let fam = family2();
        let bba = Bba::new(vec![0.0, 0.5, 0.0, 0.5]).unwrap();
        let p = betp(&fam, &bba).unwrap();
        assert!((p[0] - 0.75).abs() < 1e-12);
        assert!((p[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn betp_matches_reported_row() {
        // bridge-data row: masses over (∅, {0}, {1}, {0,1})
        let fam = family2();
        let bba = Bba::new(vec![0.1054, 0.7242, 0.1599, 0.0105]).unwrap();
        let p = betp(&fam, &bba).unwrap();
        assert!((p[0] - 0.8154).abs() < 5e-5);
        assert!((p[1] - 0.1846).abs() < 5e-5);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn betp_uniform_for_vacuous() {
        let fam = enumerate_focal_sets(4, 2, true).unwrap();
        let f = fam.len();
        let mut masses = vec![0.0; f];
        masses[f - 1] = 1.0;
        let p = betp(&fam, &Bba::new(masses).unwrap()).unwrap();
        for &x in &p {
            assert!((x - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn betp_total_conflict_is_error() {
        let fam = family2();
        let bba = Bba::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(betp(&fam, &bba), Err(Error::TotalConflict)));
    }

    #[test]
    fn harden_max_mass_variants() {
        let fam = family2();
        let partition = CredalPartition::new(
            fam,
            vec![
                vec![0.0, 0.0, 0.0, 1.0],
                vec![0.3803, 0.3042, 0.3060, 0.0095],
                vec![0.0, 1.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let labels = harden(&partition, HardeningRule::MaxMass).unwrap();
        assert_eq!(labels[0], HardLabel::Imprecise(FocalSet::full(2)));
        assert_eq!(labels[1], HardLabel::Outlier);
        assert_eq!(labels[2], HardLabel::Specific(0));
    }

    #[test]
    fn all_rules_agree_on_crisp_row() {
        let fam = family2();
        let partition =
            CredalPartition::new(fam, vec![vec![0.0, 1.0, 0.0, 0.0]]).unwrap();
        for rule in [
            HardeningRule::MaxMass,
            HardeningRule::MaxBetp,
            HardeningRule::appriou_default(),
        ] {
            assert_eq!(harden(&partition, rule).unwrap()[0], HardLabel::Specific(0));
        }
    }

    #[test]
    fn harden_max_betp_total_conflict_is_error() {
        let fam = family2();
        let partition =
            CredalPartition::new(fam, vec![vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert!(harden(&partition, HardeningRule::MaxBetp).is_err());
    }

    #[test]
    fn appriou_r_one_prefers_specific() {
        let fam = family2();
        // moderate imprecision: r=1 penalizes the frame by 1/2
        let partition = CredalPartition::new(
            fam,
            vec![vec![0.0, 0.55, 0.15, 0.30]],
        )
        .unwrap();
        let labels =
            harden(&partition, HardeningRule::Appriou { r: 1.0, lambda: 1.0 }).unwrap();
        assert_eq!(labels[0], HardLabel::Specific(0));
    }

    #[test]
    fn appriou_r_zero_prefers_frame() {
        let fam = family2();
        let partition = CredalPartition::new(
            fam,
            vec![vec![0.0, 0.55, 0.15, 0.30]],
        )
        .unwrap();
        let labels =
            harden(&partition, HardeningRule::Appriou { r: 0.0, lambda: 1.0 }).unwrap();
        // Pl of the full frame is 1, unweighted by cardinality when r = 0.
        assert_eq!(labels[0], HardLabel::Imprecise(FocalSet::full(2)));
    }
}
