//! Crisp and fuzzy medoid baselines: partitioning around medoids (PAM),
//! fuzzy c-medoids (FCMdd) and fuzzy clustering with multiple weighted
//! medoids (FMMdd). They share the initialization scheme of the evidential
//! algorithms so results are comparable run for run.

use crate::dissimilarity::DissimilarityMatrix;
use crate::ecmdd::{init_medoids, InitMode};
use crate::error::{Error, Result};

/// A crisp partition: one label per object plus the medoid set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrispPartition {
    /// Cluster index per object, in `0..c`.
    pub labels: Vec<usize>,
    /// Distinct medoid object indices, one per cluster.
    pub medoids: Vec<usize>,
}

/// A fuzzy partition: per-object memberships over `c` clusters, rows sum
/// to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyPartition {
    pub memberships: Vec<Vec<f64>>,
}

impl FuzzyPartition {
    pub fn n(&self) -> usize {
        self.memberships.len()
    }

    /// Label per object by maximum membership (ties to the lower cluster).
    pub fn max_membership_labels(&self) -> Vec<usize> {
        self.memberships
            .iter()
            .map(|row| {
                let mut best = 0;
                for (k, &u) in row.iter().enumerate() {
                    if u > row[best] {
                        best = k;
                    }
                }
                best
            })
            .collect()
    }
}

/// Total cost of serving every object from its nearest medoid.
pub fn assignment_cost(d: &DissimilarityMatrix, medoids: &[usize]) -> f64 {
    (0..d.n())
        .map(|i| medoids.iter().map(|&m| d.get(i, m)).fold(f64::INFINITY, f64::min))
        .sum()
}

fn nearest_medoid(d: &DissimilarityMatrix, medoids: &[usize], i: usize) -> usize {
    let mut best = 0;
    for (k, &m) in medoids.iter().enumerate() {
        if d.get(i, m) < d.get(i, medoids[best]) {
            best = k;
        }
    }
    best
}

/// Partitioning around medoids: greedy BUILD (min-rowsum first medoid, then
/// maximum cost reduction) followed by SWAP passes until no single
/// medoid/non-medoid exchange lowers the assignment cost.
pub fn fit_pam(d: &DissimilarityMatrix, c: usize, _seed: u64) -> Result<CrispPartition> {
    let n = d.n();
    if c == 0 || c > n {
        return Err(Error::InvalidArgument(format!("c must be in 1..={n}, got {c}")));
    }

    // BUILD
    let mut medoids = Vec::with_capacity(c);
    let mut first = 0;
    for i in 1..n {
        if d.row_sum(i) < d.row_sum(first) {
            first = i;
        }
    }
    medoids.push(first);
    // nearest-medoid distance per object
    let mut nearest: Vec<f64> = (0..n).map(|i| d.get(i, first)).collect();
    while medoids.len() < c {
        let mut best: Option<(usize, f64)> = None;
        for cand in 0..n {
            if medoids.contains(&cand) {
                continue;
            }
            let gain: f64 =
                (0..n).map(|i| (nearest[i] - d.get(i, cand)).max(0.0)).sum();
            match best {
                Some((_, g)) if gain <= g => {}
                _ => best = Some((cand, gain)),
            }
        }
        let (chosen, _) = best.expect("candidates remain while medoids < c");
        medoids.push(chosen);
        for i in 0..n {
            nearest[i] = nearest[i].min(d.get(i, chosen));
        }
    }
    let build_cost = assignment_cost(d, &medoids);

    // SWAP
    let mut cost = build_cost;
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for slot in 0..medoids.len() {
            for cand in 0..n {
                if medoids.contains(&cand) {
                    continue;
                }
                let saved = medoids[slot];
                let mut trial = medoids.clone();
                trial[slot] = cand;
                let trial_cost = assignment_cost(d, &trial);
                let _ = saved;
                match best {
                    Some((_, _, c_best)) if trial_cost >= c_best => {}
                    _ => best = Some((slot, cand, trial_cost)),
                }
            }
        }
        match best {
            Some((slot, cand, trial_cost)) if trial_cost < cost => {
                medoids[slot] = cand;
                cost = trial_cost;
            }
            _ => break,
        }
    }
    debug_assert!(cost <= build_cost);

    let labels = (0..n).map(|i| nearest_medoid(d, &medoids, i)).collect();
    Ok(CrispPartition { labels, medoids })
}

/// Result of a fuzzy c-medoids run.
#[derive(Clone, Debug)]
pub struct FcmddResult {
    pub partition: FuzzyPartition,
    pub medoids: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

const BASELINE_MAX_ITERATIONS: usize = 200;

/// Fuzzy c-medoids: memberships `u_ij ∝ τ(x_i, v_j)^{-1/(β-1)}` alternate
/// with the medoid update `v_j = argmin_x Σ_i u_ij^β τ(x_i, x)` until the
/// medoid set repeats. An object at distance zero from a medoid gives its
/// full membership to the first such medoid.
pub fn fit_fcmdd(
    d: &DissimilarityMatrix,
    c: usize,
    beta: f64,
    init: &InitMode,
    seed: u64,
) -> Result<FcmddResult> {
    if !(beta > 1.0) {
        return Err(Error::InvalidArgument(format!("beta must exceed 1, got {beta}")));
    }
    let n = d.n();
    let mut medoids = init_medoids(d, c, init, seed)?;
    let expo = -1.0 / (beta - 1.0);

    let mut memberships = vec![vec![0.0; c]; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < BASELINE_MAX_ITERATIONS {
        iterations += 1;
        for i in 0..n {
            memberships[i] = fcmdd_row(d, &medoids, i, expo);
        }
        let next: Vec<usize> = (0..c)
            .map(|j| {
                let mut best = 0;
                let mut best_cost = f64::INFINITY;
                for cand in 0..n {
                    let cost: f64 =
                        (0..n).map(|i| memberships[i][j].powf(beta) * d.get(i, cand)).sum();
                    if cost < best_cost {
                        best_cost = cost;
                        best = cand;
                    }
                }
                best
            })
            .collect();
        if next == medoids {
            converged = true;
            break;
        }
        medoids = next;
    }
    Ok(FcmddResult { partition: FuzzyPartition { memberships }, medoids, iterations, converged })
}

fn fcmdd_row(d: &DissimilarityMatrix, medoids: &[usize], i: usize, expo: f64) -> Vec<f64> {
    let c = medoids.len();
    if let Some(zero) = medoids.iter().position(|&m| d.get(i, m) == 0.0) {
        let mut row = vec![0.0; c];
        row[zero] = 1.0;
        return row;
    }
    let weights: Vec<f64> = medoids.iter().map(|&m| d.get(i, m).powf(expo)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Result of a multi-medoid fuzzy clustering run.
#[derive(Clone, Debug)]
pub struct FmmddResult {
    pub partition: FuzzyPartition,
    /// Prototype weights, one row per cluster summing to 1.
    pub weights: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value after every membership and every weight half-step.
    pub objective_trace: Vec<f64>,
}

/// The FMMdd objective `Σ_k Σ_i Σ_j u_ik^β v_kj^ψ r_ij`.
pub fn fmmdd_objective(
    d: &DissimilarityMatrix,
    memberships: &[Vec<f64>],
    weights: &[Vec<f64>],
    beta: f64,
    psi: f64,
) -> f64 {
    let n = d.n();
    let c = weights.len();
    let mut total = 0.0;
    for k in 0..c {
        let wp: Vec<f64> = weights[k].iter().map(|&w| w.powf(psi)).collect();
        for i in 0..n {
            let inner: f64 = (0..n).map(|j| wp[j] * d.get(i, j)).sum();
            total += memberships[i][k].powf(beta) * inner;
        }
    }
    total
}

/// Fuzzy clustering with multiple weighted medoids: memberships and
/// prototype weights alternate through their inverse-power updates until the
/// weight matrix moves less than 1e-6 in sup norm.
pub fn fit_fmmdd(
    d: &DissimilarityMatrix,
    c: usize,
    beta: f64,
    psi: f64,
    seed: u64,
) -> Result<FmmddResult> {
    if !(beta > 1.0) {
        return Err(Error::InvalidArgument(format!("beta must exceed 1, got {beta}")));
    }
    if !(psi > 1.0) {
        return Err(Error::InvalidArgument(format!("psi must exceed 1, got {psi}")));
    }
    let n = d.n();
    let medoids = init_medoids(d, c, &InitMode::FarthestRandomStart, seed)?;
    let mut weights: Vec<Vec<f64>> = medoids
        .iter()
        .map(|&m| {
            let mut row = vec![0.0; n];
            row[m] = 1.0;
            row
        })
        .collect();
    let mut memberships = vec![vec![0.0; c]; n];
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let u_expo = -1.0 / (beta - 1.0);
    let v_expo = -1.0 / (psi - 1.0);

    while iterations < BASELINE_MAX_ITERATIONS {
        iterations += 1;
        // membership half-step
        let wp: Vec<Vec<f64>> = weights
            .iter()
            .map(|row| row.iter().map(|&w| w.powf(psi)).collect())
            .collect();
        for i in 0..n {
            let sums: Vec<f64> = (0..c)
                .map(|k| (0..n).map(|j| wp[k][j] * d.get(i, j)).sum())
                .collect();
            memberships[i] = normalize_inverse_power_row(&sums, u_expo);
        }
        trace.push(fmmdd_objective(d, &memberships, &weights, beta, psi));

        // weight half-step
        let mut max_change = 0.0f64;
        let mut next_weights = Vec::with_capacity(c);
        for k in 0..c {
            let up: Vec<f64> = (0..n).map(|i| memberships[i][k].powf(beta)).collect();
            let sums: Vec<f64> = (0..n)
                .map(|j| (0..n).map(|i| up[i] * d.get(i, j)).sum())
                .collect();
            let row = normalize_inverse_power_row(&sums, v_expo);
            for (a, b) in weights[k].iter().zip(&row) {
                max_change = max_change.max((a - b).abs());
            }
            next_weights.push(row);
        }
        weights = next_weights;
        trace.push(fmmdd_objective(d, &memberships, &weights, beta, psi));
        if max_change < 1e-6 {
            converged = true;
            break;
        }
    }
    Ok(FmmddResult {
        partition: FuzzyPartition { memberships },
        weights,
        iterations,
        converged,
        objective_trace: trace,
    })
}

fn normalize_inverse_power_row(sums: &[f64], expo: f64) -> Vec<f64> {
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
