//! Weighted multi-medoid evidential c-medoids: every object carries a
//! representativeness weight for each class, so a class is described by all
//! of its members rather than a single medoid. Imprecise-class weights are
//! derived from the specific-class rows; two post-processing variants
//! (normalized weights, top-q cores) sparsify the specific rows.

use crate::belief::{CredalPartition, FocalSet, FocalSetFamily, HardeningRule};
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};

use super::{
    init_medoids, objective_value, update_masses, ClassDissimilarity, ClusterResult, EcmddConfig,
    PrototypeModel, Variant,
};

/// Variance floor for the imprecise-weight ratio.
const VARIANCE_FLOOR: f64 = 1e-12;

/// Update the specific-class prototype weights:
/// `v_ki ∝ (Σ_l m_{l,{ω_k}}^β τ_li)^{-1/(ψ-1)}`, each row normalized to 1.
///
/// An object whose mass-weighted column sum is zero takes the whole row
/// weight; several such objects split it equally.
pub fn update_weights_specific(
    d: &DissimilarityMatrix,
    partition: &CredalPartition,
    family: &FocalSetFamily,
    beta: f64,
    psi: f64,
) -> Vec<Vec<f64>> {
    let n = d.n();
    let c = family.c();
    let expo = -1.0 / (psi - 1.0);
    let mut rows = Vec::with_capacity(c);
    for k in 0..c {
        let j = family.singleton_index(k);
        let mass_pow: Vec<f64> = (0..n).map(|l| partition.row(l)[j].powf(beta)).collect();
        let col_sums: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|l| mass_pow[l] * d.get(l, i)).sum())
            .collect();
        rows.push(normalize_inverse_power(&col_sums, expo));
    }
    rows
}

/// Shared kernel for the inverse-power row updates: zero column sums receive
/// the entire row weight (split equally on ties), otherwise
/// `w_i ∝ s_i^{expo}`.
fn normalize_inverse_power(sums: &[f64], expo: f64) -> Vec<f64> {
    let zeros: Vec<usize> =
        sums.iter().enumerate().filter(|(_, &s)| s == 0.0).map(|(i, _)| i).collect();
    let mut row = vec![0.0; sums.len()];
    if !zeros.is_empty() {
        let share = 1.0 / zeros.len() as f64;
        for i in zeros {
            row[i] = share;
        }
        return row;
    }
    let mut total = 0.0;
    for (i, &s) in sums.iter().enumerate() {
        let w = s.powf(expo);
        row[i] = w;
        total += w;
    }
    for w in &mut row {
        *w /= total;
    }
    row
}

/// Derive the weight row of an imprecise class from the specific rows:
/// `v_i ∝ [min_{k∈A} v_ki]^ξ / Var_{k∈A}(v_ki)` (population variance,
/// floored at 1e-12), normalized to sum 1.
pub fn derive_weights_imprecise(
    specific_weights: &[Vec<f64>],
    set: FocalSet,
    xi: f64,
) -> Result<Vec<f64>> {
    let members = set.members();
    if members.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "imprecise weights require a set of at least 2 classes, got {set}"
        )));
    }
    let n = specific_weights.first().map_or(0, |r| r.len());
    let card = members.len() as f64;
    let mut row = Vec::with_capacity(n);
    let mut total = 0.0;
    for i in 0..n {
        let vals: Vec<f64> = members.iter().map(|&k| specific_weights[k][i]).collect();
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = vals.iter().sum::<f64>() / card;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / card;
        let w = min.powf(xi) / var.max(VARIANCE_FLOOR);
        row.push(w);
        total += w;
    }
    if total > 0.0 {
        for w in &mut row {
            *w /= total;
        }
    } else {
        // No object carries weight in every involved class (one-hot rows at
        // initialization): fall back to the mean of the specific rows so the
        // meta class stays on the same dissimilarity scale.
        let share = 1.0 / card;
        for (i, w) in row.iter_mut().enumerate() {
            *w = members.iter().map(|&k| specific_weights[k][i]).sum::<f64>() * share;
        }
    }
    Ok(row)
}

/// Object-to-class dissimilarities under the weighted model:
/// `d_ij = Σ_l v_jl^ψ τ(i,l)` for every nonempty focal set row.
pub fn class_dissimilarities_weighted(
    d: &DissimilarityMatrix,
    weights: &[Vec<f64>],
    psi: f64,
) -> ClassDissimilarity {
    let n = d.n();
    let mut values = vec![vec![0.0; weights.len()]; n];
    for (col, row_weights) in weights.iter().enumerate() {
        let powered: Vec<(usize, f64)> = row_weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(l, &w)| (l, w.powf(psi)))
            .collect();
        for i in 0..n {
            let tau_row = d.row(i);
            values[i][col] = powered.iter().map(|&(l, wp)| wp * tau_row[l]).sum();
        }
    }
    ClassDissimilarity { values }
}

/// Assemble the full (f-1) × n weight matrix: specific rows for singletons,
/// derived rows for every meta class.
fn full_weight_matrix(
    family: &FocalSetFamily,
    specific: &[Vec<f64>],
    xi: f64,
) -> Result<Vec<Vec<f64>>> {
    family
        .nonempty()
        .map(|(_, set)| match set.as_singleton() {
            Some(k) => Ok(specific[k].clone()),
            None => derive_weights_imprecise(specific, set, xi),
        })
        .collect()
}

/// Zero the weights of objects whose max-mass label is not `{ω_k}`, then
/// renormalize. A row left with no member keeps its unrestricted weights.
fn normalize_by_membership(specific: &mut [Vec<f64>], partition: &CredalPartition) {
    let labels = crate::belief::harden(partition, HardeningRule::MaxMass)
        .expect("max-mass hardening cannot fail");
    for (k, row) in specific.iter_mut().enumerate() {
        let mut masked: Vec<f64> = row
            .iter()
            .enumerate()
            .map(|(i, &w)| if labels[i] == crate::belief::HardLabel::Specific(k) { w } else { 0.0 })
            .collect();
        let total: f64 = masked.iter().sum();
        if total > 0.0 {
            for w in &mut masked {
                *w /= total;
            }
            *row = masked;
        }
    }
}

/// The de-facto medoid of each weight row: its top-weight object (ties to
/// the lower index).
fn top_weight_objects(weights: &[Vec<f64>]) -> Vec<usize> {
    weights
        .iter()
        .map(|row| {
            let mut best = 0;
            for (i, &w) in row.iter().enumerate() {
                if w > row[best] {
                    best = i;
                }
            }
            best
        })
        .collect()
}

/// Keep the `q` largest weights of each specific row (ties to the lower
/// index), zero the rest, renormalize.
fn keep_top_q(specific: &mut [Vec<f64>], q: usize) {
    for row in specific.iter_mut() {
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap().then(a.cmp(&b)));
        let keep: Vec<usize> = order.into_iter().take(q).collect();
        let total: f64 = keep.iter().map(|&i| row[i]).sum();
        let mut next = vec![0.0; row.len()];
        if total > 0.0 {
            for &i in &keep {
                next[i] = row[i] / total;
            }
        } else {
            let share = 1.0 / keep.len() as f64;
            for &i in &keep {
                next[i] = share;
            }
        }
        *row = next;
    }
}

/// Run a weighted variant until the prototypes stabilize or
/// `max_iterations` is reached.
///
/// The prototypes of the weighted model are the top-weight objects of each
/// focal-set row, and the loop stops once those stay unchanged between
/// iterations (or earlier if the whole specific weight matrix moves less
/// than `weight_tolerance` in sup norm). Iterating the weight updates to
/// numerical fixed point instead is degenerate: spreading a row always
/// shrinks its `Σ v^ψ τ` dissimilarities, so the weight matrix drifts
/// toward one shared maximally-spread row and every class collapses onto
/// the grand centroid.
pub fn fit_wecmdd(d: &DissimilarityMatrix, config: &EcmddConfig) -> Result<ClusterResult> {
    match config.variant {
        Variant::Weighted | Variant::WeightedNormalized | Variant::WeightedTopQ(_) => {}
        Variant::Single => {
            return Err(Error::InvalidArgument(
                "fit_wecmdd requires a weighted variant".into(),
            ))
        }
    }
    config.validate(d.n())?;
    let family = config.family()?;
    let n = d.n();

    // start from one-hot weights on the usual initial medoids
    let medoids = init_medoids(d, config.c, &config.init, config.seed)?;
    let mut specific: Vec<Vec<f64>> = medoids
        .iter()
        .map(|&m| {
            let mut row = vec![0.0; n];
            row[m] = 1.0;
            row
        })
        .collect();
    let mut weights = full_weight_matrix(&family, &specific, config.xi)?;

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut partition = None;

    while iterations < config.max_iterations {
        iterations += 1;
        let cd = class_dissimilarities_weighted(d, &weights, config.psi);
        let p = update_masses(
            &cd,
            &family,
            config.alpha,
            config.beta,
            config.delta,
            config.empty_set_exponent,
        );
        let objective = objective_value(&cd, &p, config.alpha, config.beta, config.delta);
        trace.push(objective);

        let mut next_specific = update_weights_specific(d, &p, &family, config.beta, config.psi);
        match config.variant {
            Variant::WeightedNormalized => normalize_by_membership(&mut next_specific, &p),
            Variant::WeightedTopQ(q) => keep_top_q(&mut next_specific, q),
            _ => {}
        }

        let change = specific
            .iter()
            .flatten()
            .zip(next_specific.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let next_weights = full_weight_matrix(&family, &next_specific, config.xi)?;

        // The imprecise-row derivation is a heuristic, not a descent step;
        // accept the new weight matrix only while it keeps the objective
        // from rising at the current masses, so the recorded trace stays
        // monotone.
        let cd_next = class_dissimilarities_weighted(d, &next_weights, config.psi);
        let objective_next =
            objective_value(&cd_next, &p, config.alpha, config.beta, config.delta);
        if objective_next > objective + 1e-12 * objective.abs().max(1.0) {
            partition = Some(p);
            converged = true;
            break;
        }

        let stable_prototypes = top_weight_objects(&weights) == top_weight_objects(&next_weights);
        specific = next_specific;
        weights = next_weights;
        partition = Some(p);
        if stable_prototypes || change < config.weight_tolerance {
            converged = true;
            break;
        }
    }

    Ok(ClusterResult {
        partition: partition.expect("at least one iteration runs"),
        prototypes: PrototypeModel::Weighted { weights },
        objective_trace: trace,
        iterations,
        converged,
    })
}
