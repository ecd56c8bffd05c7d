//! Pair-counting clustering metrics, their evidential counterparts that
//! credit cautious imprecise decisions, and the nonspecificity validity
//! index used to select the cluster count.

use crate::belief::{CredalPartition, HardLabel};
use crate::error::{Error, Result};

/// Unordered-pair agreement counts between a predicted and a reference
/// crisp labeling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    /// Same cluster in both.
    pub a: usize,
    /// Different clusters in both.
    pub b: usize,
    /// Same predicted cluster, different reference clusters.
    pub c: usize,
    /// Different predicted clusters, same reference cluster.
    pub d: usize,
}

pub fn pair_counts(pred: &[usize], truth: &[usize]) -> Result<PairCounts> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { left: pred.len(), right: truth.len() });
    }
    let n = pred.len();
    let mut counts = PairCounts::default();
    for i in 0..n {
        for j in i + 1..n {
            let same_pred = pred[i] == pred[j];
            let same_true = truth[i] == truth[j];
            match (same_pred, same_true) {
                (true, true) => counts.a += 1,
                (false, false) => counts.b += 1,
                (true, false) => counts.c += 1,
                (false, true) => counts.d += 1,
            }
        }
    }
    Ok(counts)
}

/// Precision, recall and Rand index of a crisp prediction. Precision and
/// recall are defined as 1 when their denominators are empty (no decisions,
/// no errors); the Rand index of fewer than two objects is 1.
pub fn classical_metrics(pred: &[usize], truth: &[usize]) -> Result<(f64, f64, f64)> {
    let counts = pair_counts(pred, truth)?;
    let n = pred.len();
    let p = ratio(counts.a, counts.a + counts.c);
    let r = ratio(counts.a, counts.a + counts.d);
    let pairs = n * (n - 1).max(0) / 2;
    let ri = if pairs == 0 { 1.0 } else { (counts.a + counts.b) as f64 / pairs as f64 };
    Ok((p, r, ri))
}

fn ratio(num: usize, denom: usize) -> f64 {
    if denom == 0 {
        1.0
    } else {
        num as f64 / denom as f64
    }
}

/// How pairs involving imprecise or outlier labels count toward the
/// different-in-both term of the evidential Rand index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BStarRule {
    /// Only pairs where both labels are specific can count (mirrors the
    /// same-in-both term).
    #[default]
    SpecificOnly,
    /// Any pair whose labels differ counts when the reference also differs,
    /// even if one side is imprecise or an outlier.
    AnyDistinct,
}

/// Evidential precision, recall and Rand index of a hardened credal
/// prediction, under the default counting rule.
pub fn evidential_metrics(pred: &[HardLabel], truth: &[usize]) -> Result<(f64, f64, f64)> {
    evidential_metrics_with(pred, truth, BStarRule::SpecificOnly)
}

/// Evidential metrics with an explicit rule for the different-in-both term.
///
/// Only pairs whose two objects both carry specific labels enter the
/// precision denominator; of those, correctly grouped pairs form the
/// numerator. Recall divides by all reference same-cluster pairs, so
/// imprecise assignments lower recall but never precision.
pub fn evidential_metrics_with(
    pred: &[HardLabel],
    truth: &[usize],
    rule: BStarRule,
) -> Result<(f64, f64, f64)> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { left: pred.len(), right: truth.len() });
    }
    let n = pred.len();
    let mut specific_same = 0usize; // N_e
    let mut specific_same_correct = 0usize; // n_er, also a*
    let mut true_same = 0usize; // N_r
    let mut b_star = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let same_true = truth[i] == truth[j];
            if same_true {
                true_same += 1;
            }
            match (pred[i].as_specific(), pred[j].as_specific()) {
                (Some(ki), Some(kj)) => {
                    if ki == kj {
                        specific_same += 1;
                        if same_true {
                            specific_same_correct += 1;
                        }
                    } else if !same_true {
                        b_star += 1;
                    }
                }
                _ => {
                    if rule == BStarRule::AnyDistinct && !same_true && pred[i] != pred[j] {
                        b_star += 1;
                    }
                }
            }
        }
    }
    let ep = ratio(specific_same_correct, specific_same);
    let er = ratio(specific_same_correct, true_same);
    let pairs = n * (n - 1).max(0) / 2;
    let eri = if pairs == 0 {
        1.0
    } else {
        (specific_same_correct + b_star) as f64 / pairs as f64
    };
    Ok((ep, er, eri))
}

/// Normalized nonspecificity of a credal partition:
/// `N*(c) = (1/(n log₂ c)) Σ_i [Σ_{A≠∅} m_i(A) log₂|A| + m_i(∅) log₂ c]`.
/// Zero for fully specific partitions, one for the vacuous partition; the
/// index is minimized over candidate cluster counts.
pub fn validity_index(partition: &CredalPartition) -> Result<f64> {
    let family = partition.family();
    let c = family.c();
    if c < 2 {
        return Err(Error::InvalidArgument(format!(
            "validity index needs at least 2 clusters, got {c}"
        )));
    }
    let n = partition.n();
    if n == 0 {
        return Err(Error::InvalidArgument("validity index of an empty partition".into()));
    }
    let log_c = (c as f64).log2();
    let mut total = 0.0;
    for i in 0..n {
        let row = partition.row(i);
        total += row[0] * log_c;
        for (j, set) in family.nonempty() {
            let card = set.cardinality() as f64;
            if card > 1.0 {
                total += row[j] * card.log2();
            }
        }
    }
    Ok(total / (n as f64 * log_c))
}

/// Flat metric bundle, serialized by the report module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricReport {
    pub precision: f64,
    pub recall: f64,
    pub rand_index: f64,
    pub ep: f64,
    pub er: f64,
    pub eri: f64,
    /// Validity index, absent for crisp/fuzzy methods without a credal
    /// partition.
    pub nstar: Option<f64>,
}

impl MetricReport {
    /// Score hardened credal labels: classical metrics from the pignistic
    /// labels, evidential metrics from the max-mass labels.
    pub fn from_labels(
        betp_labels: &[usize],
        max_mass_labels: &[HardLabel],
        truth: &[usize],
        nstar: Option<f64>,
    ) -> Result<Self> {
        let (precision, recall, rand_index) = classical_metrics(betp_labels, truth)?;
        let (ep, er, eri) = evidential_metrics(max_mass_labels, truth)?;
        Ok(MetricReport { precision, recall, rand_index, ep, er, eri, nstar })
    }

    /// Score a crisp prediction, for which the evidential metrics coincide
    /// with the classical ones.
    pub fn from_crisp(pred: &[usize], truth: &[usize]) -> Result<Self> {
        let (precision, recall, rand_index) = classical_metrics(pred, truth)?;
        Ok(MetricReport {
            precision,
            recall,
            rand_index,
            ep: precision,
            er: recall,
            eri: rand_index,
            nstar: None,
        })
    }
}
