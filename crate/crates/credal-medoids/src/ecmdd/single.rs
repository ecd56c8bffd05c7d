//! Single-medoid evidential c-medoids: one representative object per
//! specific class, meta-class medoids picked to sit evenly between the
//! involved specific medoids, alternating mass and medoid updates until the
//! medoid set stabilizes.

use crate::belief::{FocalSet, FocalSetFamily};
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};

use super::{
    init_medoids, objective_value, update_masses, ClassDissimilarity, ClusterResult, EcmddConfig,
    EmptySetExponent, PrototypeModel, Variant,
};
use crate::belief::CredalPartition;

/// Pick the medoid of a meta class: the object minimizing
/// `ρ + η · mean_{k∈A} τ(x, v_k)`, where ρ is the mean absolute pairwise gap
/// between the object's dissimilarities to the involved specific medoids.
/// The ρ term finds objects equally close to every involved class; the η
/// term keeps outliers (equally *far* from every class) from qualifying.
pub fn meta_medoid(
    d: &DissimilarityMatrix,
    singleton_medoids: &[usize],
    set: FocalSet,
    eta: f64,
) -> Result<usize> {
    let members = set.members();
    if members.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "meta medoid requires a set of at least 2 classes, got {set}"
        )));
    }
    let pair_count = (members.len() * (members.len() - 1) / 2) as f64;
    let medoid_of: Vec<usize> = members.iter().map(|&k| singleton_medoids[k]).collect();
    let mut taus = vec![0.0; members.len()];
    let mut best: Option<(usize, f64)> = None;
    for i in 0..d.n() {
        let row = d.row(i);
        for (t, &m) in taus.iter_mut().zip(&medoid_of) {
            *t = row[m];
        }
        let mut gap_sum = 0.0;
        for a in 0..taus.len() {
            for b in a + 1..taus.len() {
                gap_sum += (taus[a] - taus[b]).abs();
            }
        }
        let rho = gap_sum / pair_count;
        let mean = taus.iter().sum::<f64>() / taus.len() as f64;
        let score = rho + eta * mean;
        match best {
            Some((_, s)) if score >= s => {}
            _ => best = Some((i, score)),
        }
    }
    Ok(best.expect("matrix is nonempty").0)
}

fn meta_medoids_for(
    d: &DissimilarityMatrix,
    family: &FocalSetFamily,
    singleton_medoids: &[usize],
    eta: f64,
) -> Result<Vec<(FocalSet, usize)>> {
    family
        .nonempty()
        .filter(|(_, s)| s.cardinality() >= 2)
        .map(|(_, s)| Ok((s, meta_medoid(d, singleton_medoids, s, eta)?)))
        .collect()
}

/// Object-to-class dissimilarities under the single-medoid model.
///
/// Singleton classes use the plain dissimilarity to their medoid; a meta
/// class mixes the dissimilarity to its own medoid with the mean
/// dissimilarity to the involved specific medoids, weighted by γ.
pub fn class_dissimilarities_single(
    d: &DissimilarityMatrix,
    family: &FocalSetFamily,
    singleton_medoids: &[usize],
    meta_medoids: &[(FocalSet, usize)],
    gamma: f64,
) -> ClassDissimilarity {
    let n = d.n();
    let mut values = vec![vec![0.0; family.len() - 1]; n];
    for (j, set) in family.nonempty() {
        let col = j - 1;
        if let Some(k) = set.as_singleton() {
            let medoid = singleton_medoids[k];
            for i in 0..n {
                values[i][col] = d.get(i, medoid);
            }
        } else {
            let medoid = meta_medoids
                .iter()
                .find(|(s, _)| *s == set)
                .expect("meta medoid computed for every meta class")
                .1;
            let members = set.members();
            let inv_card = 1.0 / members.len() as f64;
            for i in 0..n {
                let mean: f64 = members
                    .iter()
                    .map(|&k| d.get(i, singleton_medoids[k]))
                    .sum::<f64>()
                    * inv_card;
                values[i][col] = (d.get(i, medoid) + gamma * mean) / (1.0 + gamma);
            }
        }
    }
    ClassDissimilarity { values }
}

/// Re-pick each specific class's medoid as the object minimizing the
/// mass-weighted total dissimilarity `Σ_i m_{i,{ω_k}}^β τ(x_i, ·)`.
///
/// Ties break to the lowest object index. If two classes select the same
/// object, the later class takes its best not-yet-taken candidate so the
/// medoids stay distinct.
pub fn update_medoids_single(
    d: &DissimilarityMatrix,
    partition: &CredalPartition,
    family: &FocalSetFamily,
    beta: f64,
) -> Vec<usize> {
    let n = d.n();
    let c = family.c();
    let mut medoids = Vec::with_capacity(c);
    for k in 0..c {
        let j = family.singleton_index(k);
        let weights: Vec<f64> = (0..n).map(|i| partition.row(i)[j].powf(beta)).collect();
        let mut costs: Vec<(f64, usize)> = (0..n)
            .map(|cand| {
                let cost: f64 = (0..n).map(|i| weights[i] * d.get(i, cand)).sum();
                (cost, cand)
            })
            .collect();
        costs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let choice = costs
            .iter()
            .find(|(_, cand)| !medoids.contains(cand))
            .expect("more objects than classes")
            .1;
        medoids.push(choice);
    }
    medoids
}

/// Objective value of a medoid set with its masses re-optimized: the
/// quantity the whole single-medoid search minimizes, since the credal
/// partition is a deterministic function of the prototypes.
///
/// Fused single pass so exchange scans stay cheap on large matrices.
fn refit_objective(
    d: &DissimilarityMatrix,
    family: &FocalSetFamily,
    medoids: &[usize],
    config: &EcmddConfig,
) -> Result<f64> {
    let meta = meta_medoids_for(d, family, medoids, config.eta)?;
    let n = d.n();
    let k = family.len() - 1;
    let expo = -1.0 / (config.beta - 1.0);
    let inv_power: fn(f64, f64) -> f64 =
        if expo == -1.0 { |x, _| 1.0 / x } else { |x, e| x.powf(e) };
    let mass_power: fn(f64, f64) -> f64 =
        if config.beta == 2.0 { |m, _| m * m } else { |m, b| m.powf(b) };
    let delta_term = match config.empty_set_exponent {
        EmptySetExponent::Literal => config.delta.powf(expo),
        EmptySetExponent::Derived => (config.delta * config.delta).powf(expo),
    };
    // per nonempty set: penalty weights and member/meta layout
    let mut card_weight = Vec::with_capacity(k);
    let mut card_penalty = Vec::with_capacity(k);
    let mut layout: Vec<(Option<usize>, Vec<usize>)> = Vec::with_capacity(k);
    for (_, set) in family.nonempty() {
        let card = set.cardinality() as f64;
        card_weight.push(card.powf(config.alpha * expo));
        card_penalty.push(card.powf(config.alpha));
        match set.as_singleton() {
            Some(ksing) => layout.push((None, vec![medoids[ksing]])),
            None => {
                let medoid = meta
                    .iter()
                    .find(|(s, _)| *s == set)
                    .expect("meta medoid for every meta class")
                    .1;
                layout.push((
                    Some(medoid),
                    set.members().iter().map(|&m| medoids[m]).collect(),
                ));
            }
        }
    }

    let mut dist = vec![0.0; k];
    let mut weight = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..n {
        let row = d.row(i);
        let mut zero_at = None;
        for j in 0..k {
            let dij = match &layout[j] {
                (None, singleton) => row[singleton[0]],
                (Some(meta_medoid), members) => {
                    let mean: f64 = members.iter().map(|&m| row[m]).sum::<f64>()
                        / members.len() as f64;
                    (row[*meta_medoid] + config.gamma * mean) / (1.0 + config.gamma)
                }
            };
            dist[j] = dij;
            if dij == 0.0 && zero_at.is_none() {
                zero_at = Some(j);
            }
        }
        match zero_at {
            Some(_) => {
                // full mass on a zero-distance set contributes nothing
            }
            None => {
                let mut denom = delta_term;
                for j in 0..k {
                    let w = card_weight[j] * inv_power(dist[j], expo);
                    weight[j] = w;
                    denom += w;
                }
                for j in 0..k {
                    total += card_penalty[j] * mass_power(weight[j] / denom, config.beta) * dist[j];
                }
                let empty_mass = delta_term / denom;
                total += config.delta * config.delta * mass_power(empty_mass, config.beta);
            }
        }
    }
    Ok(total)
}

/// Best single medoid/non-medoid exchange that lowers the refit objective,
/// or None when no exchange improves it. Ties go to the earlier class and
/// the lower candidate index.
fn best_improving_swap(
    d: &DissimilarityMatrix,
    family: &FocalSetFamily,
    medoids: &[usize],
    current: f64,
    config: &EcmddConfig,
) -> Result<Option<(Vec<usize>, f64)>> {
    let tol = descent_tolerance(current);
    let mut best: Option<(Vec<usize>, f64)> = None;
    for slot in 0..medoids.len() {
        for cand in 0..d.n() {
            if medoids.contains(&cand) {
                continue;
            }
            let mut trial = medoids.to_vec();
            trial[slot] = cand;
            let value = refit_objective(d, family, &trial, config)?;
            if value < current - tol && best.as_ref().map_or(true, |(_, b)| value < *b) {
                best = Some((trial, value));
            }
        }
    }
    Ok(best)
}

/// Strict-descent slack scaled to the objective's magnitude.
fn descent_tolerance(objective: f64) -> f64 {
    1e-12 * objective.abs().max(1.0)
}

/// Run the single-medoid algorithm.
///
/// The loop alternates the mass update with the per-class medoid scan until
/// the medoid set repeats. A medoid at dissimilarity zero from itself holds
/// its class's full mass, which can pin the scan to the incumbents on small
/// data sets; a stalled loop therefore tries single-medoid exchanges,
/// accepting the best one that lowers the objective with masses
/// re-optimized, and only reports convergence when no exchange improves.
pub fn fit_secmdd(d: &DissimilarityMatrix, config: &EcmddConfig) -> Result<ClusterResult> {
    if config.variant != Variant::Single {
        return Err(Error::InvalidArgument(
            "fit_secmdd requires the single-medoid variant".into(),
        ));
    }
    config.validate(d.n())?;
    let family = config.family()?;
    let mut medoids = init_medoids(d, config.c, &config.init, config.seed)?;
    let mut meta = meta_medoids_for(d, &family, &medoids, config.eta)?;

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut partition = None;

    while iterations < config.max_iterations {
        iterations += 1;
        let cd = class_dissimilarities_single(d, &family, &medoids, &meta, config.gamma);
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
        partition = Some(p.clone());

        // Accept the scan's proposal only when it lowers the refit
        // objective; otherwise fall back to the exchange search. This keeps
        // the objective strictly decreasing, so the loop cannot cycle.
        let proposal = update_medoids_single(d, &p, &family, config.beta);
        let accepted = proposal != medoids
            && refit_objective(d, &family, &proposal, config)?
                < objective - descent_tolerance(objective);
        if accepted {
            medoids = proposal;
        } else {
            match best_improving_swap(d, &family, &medoids, objective, config)? {
                Some((swapped, _)) => medoids = swapped,
                None => {
                    converged = true;
                    break;
                }
            }
        }
        meta = meta_medoids_for(d, &family, &medoids, config.eta)?;
    }

    Ok(ClusterResult {
        partition: partition.expect("at least one iteration runs"),
        prototypes: PrototypeModel::Single { singleton_medoids: medoids, meta_medoids: meta },
        objective_trace: trace,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::{enumerate_focal_sets, harden, HardLabel, HardeningRule};
    use crate::dissimilarity::euclidean_dissimilarity;
    use crate::ecmdd::InitMode;

    fn line(points: &[f64]) -> DissimilarityMatrix {
        euclidean_dissimilarity(&points.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn meta_medoid_prefers_equidistant_central_object() {
        // objects: two medoids at 0 and 10, a midpoint at 5, an outlier at 30
        let d = line(&[0.0, 10.0, 5.0, 30.0]);
        let m = meta_medoid(&d, &[0, 1], FocalSet::from_members(&[0, 1]), 1.0).unwrap();
        assert_eq!(m, 2);
    }

    #[test]
    fn meta_medoid_averages_pairwise_gaps() {
        // candidate 3 has τ = (1,2,3) to the three medoids: the gap term is
        // (1+2+1)/3 = 4/3, so its score 4/3 + 2 beats candidate 4's flat
        // 0 + 4; with an unnormalized gap sum the ranking would flip
        let d = crate::dissimilarity::validate_dissimilarity(vec![
            vec![0.0, 5.0, 5.0, 1.0, 4.0],
            vec![5.0, 0.0, 5.0, 2.0, 4.0],
            vec![5.0, 5.0, 0.0, 3.0, 4.0],
            vec![1.0, 2.0, 3.0, 0.0, 5.0],
            vec![4.0, 4.0, 4.0, 5.0, 0.0],
        ])
        .unwrap();
        let full = FocalSet::from_members(&[0, 1, 2]);
        assert_eq!(meta_medoid(&d, &[0, 1, 2], full, 1.0).unwrap(), 3);
        assert!(matches!(
            meta_medoid(&d, &[0, 1, 2], FocalSet::singleton(0), 1.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn class_dissimilarity_gamma_zero_is_meta_medoid_distance() {
        let d = line(&[0.0, 10.0, 5.0, 7.0]);
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let medoids = vec![0, 1];
        let meta = meta_medoids_for(&d, &family, &medoids, 1.0).unwrap();
        let meta_idx = meta[0].1;
        let cd0 = class_dissimilarities_single(&d, &family, &medoids, &meta, 0.0);
        for i in 0..d.n() {
            assert!((cd0.get(i, 2) - d.get(i, meta_idx)).abs() < 1e-12);
        }
        // singleton columns are plain medoid dissimilarities; a medoid is at
        // distance zero from its own class
        assert_eq!(cd0.get(0, 0), 0.0);
        assert_eq!(cd0.get(1, 1), 0.0);
    }

    #[test]
    fn class_dissimilarity_meta_mixes_with_gamma() {
        // meta medoid is the midpoint (index 2), equidistant r=5 from both
        let d = line(&[0.0, 10.0, 5.0]);
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let medoids = vec![0, 1];
        let meta = meta_medoids_for(&d, &family, &medoids, 1.0).unwrap();
        assert_eq!(meta[0].1, 2);
        for gamma in [0.5, 1.0, 2.0] {
            let cd = class_dissimilarities_single(&d, &family, &medoids, &meta, gamma);
            let expected = gamma * 5.0 / (1.0 + gamma);
            assert!((cd.get(2, 2) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn medoid_update_on_crisp_partition() {
        let d = line(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let mut rows = Vec::new();
        for i in 0..6 {
            let mut row = vec![0.0; 4];
            row[if i < 3 { 1 } else { 2 }] = 1.0;
            rows.push(row);
        }
        let p = CredalPartition::new(family.clone(), rows).unwrap();
        let medoids = update_medoids_single(&d, &p, &family, 2.0);
        assert_eq!(medoids, vec![1, 4]);
    }

    #[test]
    fn medoid_update_tie_breaks_low_and_stays_distinct() {
        // two identical points: both classes would pick object 0; the second
        // class must take the runner-up
        let d = line(&[0.0, 0.0, 5.0]);
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let p = CredalPartition::new(
            family.clone(),
            vec![
                vec![0.0, 0.5, 0.5, 0.0],
                vec![0.0, 0.5, 0.5, 0.0],
                vec![0.0, 0.5, 0.5, 0.0],
            ],
        )
        .unwrap();
        let medoids = update_medoids_single(&d, &p, &family, 2.0);
        assert_eq!(medoids, vec![0, 1]);
    }

    #[test]
    fn two_tight_groups_recover_crisply() {
        let d = line(&[0.0, 0.2, 0.4, 100.0, 100.2, 100.4]);
        let mut cfg = EcmddConfig::new(2);
        cfg.alpha = 2.0;
        cfg.init = InitMode::FarthestMinRowsumStart;
        let result = fit_secmdd(&d, &cfg).unwrap();
        assert!(result.converged);
        let labels = harden(&result.partition, HardeningRule::MaxMass).unwrap();
        let first = labels[0];
        assert!(first.is_specific());
        for i in 1..3 {
            assert_eq!(labels[i], first);
        }
        let second = labels[3];
        assert!(second.is_specific());
        assert_ne!(first, second);
        for i in 4..6 {
            assert_eq!(labels[i], second);
        }
        // medoids land at group centers
        if let PrototypeModel::Single { singleton_medoids, .. } = &result.prototypes {
            let mut sorted = singleton_medoids.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![1, 4]);
        } else {
            panic!("single-medoid prototypes expected");
        }
    }

    #[test]
    fn midpoint_object_goes_imprecise() {
        let d = line(&[0.0, 0.5, 1.0, 5.0, 9.0, 9.5, 10.0]);
        let mut cfg = EcmddConfig::new(2);
        cfg.alpha = 0.5;
        cfg.delta = 20.0;
        cfg.init = InitMode::Explicit(vec![1, 5]);
        let result = fit_secmdd(&d, &cfg).unwrap();
        assert!(result.converged);
        let labels = harden(&result.partition, HardeningRule::MaxMass).unwrap();
        assert_eq!(labels[3], HardLabel::Imprecise(FocalSet::from_members(&[0, 1])));
    }

    #[test]
    fn objective_trace_is_nonincreasing() {
        let d = line(&[0.0, 1.0, 2.0, 3.5, 8.0, 9.0, 10.0, 15.0]);
        let mut cfg = EcmddConfig::new(2);
        cfg.init = InitMode::Explicit(vec![0, 7]);
        let result = fit_secmdd(&d, &cfg).unwrap();
        assert!(result.converged);
        for w in result.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "trace rose: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn identical_config_and_seed_reproduce_bitwise() {
        let d = line(&[0.0, 1.0, 2.0, 8.0, 9.0, 10.0, 4.0]);
        let mut cfg = EcmddConfig::new(2);
        cfg.seed = 42;
        let a = fit_secmdd(&d, &cfg).unwrap();
        let b = fit_secmdd(&d, &cfg).unwrap();
        assert_eq!(a.partition.rows(), b.partition.rows());
        assert_eq!(a.objective_trace, b.objective_trace);
        assert_eq!(a.prototypes, b.prototypes);
    }
}
