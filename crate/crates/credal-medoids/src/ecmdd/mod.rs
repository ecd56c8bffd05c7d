//! Evidential c-medoids clustering over dissimilarity data.
//!
//! Two algorithm families share the machinery in this module: the
//! single-medoid variant (one representative object per specific class plus
//! derived meta-class medoids) and the weighted multi-medoid variant (a full
//! prototype-weight row per class). Both alternate a credal-partition update
//! with a prototype update until the prototypes stabilize.

mod single;
mod weighted;

pub use single::{
    class_dissimilarities_single, fit_secmdd, meta_medoid, update_medoids_single,
};
pub use weighted::{
    class_dissimilarities_weighted, derive_weights_imprecise, fit_wecmdd,
    update_weights_specific,
};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::belief::{CredalPartition, FocalSet, FocalSetFamily};
use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};

/// How the first medoids are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitMode {
    /// First medoid drawn uniformly (seeded); the rest maximize the minimum
    /// dissimilarity to the medoids already picked.
    FarthestRandomStart,
    /// First medoid is the object with the smallest total dissimilarity to
    /// all others; the rest as above.
    FarthestMinRowsumStart,
    /// Explicit medoid indices.
    Explicit(Vec<usize>),
}

/// Algorithm variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Single medoid per class.
    Single,
    /// Weighted multi-medoid.
    Weighted,
    /// Weighted, with per-iteration weights zeroed for objects whose max-mass
    /// label is another class, then renormalized.
    WeightedNormalized,
    /// Weighted, keeping only the `q` largest weights per specific class.
    WeightedTopQ(usize),
}

/// Exponent applied to the outlier threshold δ in the mass update
/// denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmptySetExponent {
    /// `δ^{-1/(β-1)}`: treats δ itself as the distance to the empty set.
    Literal,
    /// `(δ²)^{-1/(β-1)}`: the exponent implied by the objective's `δ² m^β`
    /// empty-set term, making the update the exact row-wise minimizer.
    Derived,
}

/// Full parameter set for one clustering run.
#[derive(Clone, Debug, PartialEq)]
pub struct EcmddConfig {
    /// Number of clusters.
    pub c: usize,
    /// Cardinality penalty exponent α ≥ 0.
    pub alpha: f64,
    /// Weighting exponent β > 1.
    pub beta: f64,
    /// Outlier threshold δ > 0.
    pub delta: f64,
    /// Meta-medoid outlier discrimination η > 0 (single-medoid variant).
    pub eta: f64,
    /// Meta-class dissimilarity mixing factor γ ≥ 0 (single-medoid variant).
    pub gamma: f64,
    /// Imprecise-weight balance ξ > 0 (weighted variants).
    pub xi: f64,
    /// Weight smoothness exponent ψ > 1 (weighted variants).
    pub psi: f64,
    /// Cardinality cap for non-frame focal sets.
    pub max_cardinality: usize,
    /// Whether the full frame is a focal set.
    pub include_full_frame: bool,
    pub max_iterations: usize,
    pub seed: u64,
    pub init: InitMode,
    pub variant: Variant,
    pub empty_set_exponent: EmptySetExponent,
    /// Weighted variants stop when the sup-norm change of the specific-class
    /// weight matrix falls below this.
    pub weight_tolerance: f64,
}

impl EcmddConfig {
    /// Defaults: α=1, β=2, δ=100, η=γ=ξ=1, ψ=2, pairs plus full frame,
    /// at most 200 iterations.
    pub fn new(c: usize) -> Self {
        EcmddConfig {
            c,
            alpha: 1.0,
            beta: 2.0,
            delta: 100.0,
            eta: 1.0,
            gamma: 1.0,
            xi: 1.0,
            psi: 2.0,
            max_cardinality: 2.min(c),
            include_full_frame: true,
            max_iterations: 200,
            seed: 0,
            init: InitMode::FarthestRandomStart,
            variant: Variant::Single,
            empty_set_exponent: EmptySetExponent::Literal,
            weight_tolerance: 1e-6,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.c < 2 {
            return Err(Error::InvalidArgument(format!("c must be at least 2, got {}", self.c)));
        }
        if self.c > n {
            return Err(Error::InvalidArgument(format!(
                "c = {} exceeds the number of objects {n}",
                self.c
            )));
        }
        if !(self.beta > 1.0) {
            return Err(Error::InvalidArgument(format!("beta must exceed 1, got {}", self.beta)));
        }
        if !(self.delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "alpha must be nonnegative, got {}",
                self.alpha
            )));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma must be nonnegative, got {}",
                self.gamma
            )));
        }
        match self.variant {
            Variant::Single => {
                if !(self.eta > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "eta must be positive, got {}",
                        self.eta
                    )));
                }
            }
            Variant::Weighted | Variant::WeightedNormalized | Variant::WeightedTopQ(_) => {
                if !(self.psi > 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "psi must exceed 1, got {}",
                        self.psi
                    )));
                }
                if !(self.xi > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "xi must be positive, got {}",
                        self.xi
                    )));
                }
                if let Variant::WeightedTopQ(q) = self.variant {
                    if q < 1 || q >= n {
                        return Err(Error::InvalidArgument(format!(
                            "top-q cardinality must be in 1..{n}, got {q}"
                        )));
                    }
                }
            }
        }
        if let InitMode::Explicit(medoids) = &self.init {
            if medoids.len() != self.c {
                return Err(Error::InvalidArgument(format!(
                    "explicit init lists {} medoids for c = {}",
                    medoids.len(),
                    self.c
                )));
            }
            for &m in medoids {
                if m >= n {
                    return Err(Error::InvalidArgument(format!(
                        "explicit medoid {m} out of range 0..{n}"
                    )));
                }
            }
            let mut sorted = medoids.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != medoids.len() {
                return Err(Error::InvalidArgument("explicit medoids must be distinct".into()));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Result<FocalSetFamily> {
        crate::belief::enumerate_focal_sets(self.c, self.max_cardinality, self.include_full_frame)
    }
}

/// Prototypes of a converged run: either one medoid per class plus the
/// derived meta-class medoids, or a prototype-weight row per focal set.
#[derive(Clone, Debug, PartialEq)]
pub enum PrototypeModel {
    Single {
        /// Medoid object index per specific class, pairwise distinct.
        singleton_medoids: Vec<usize>,
        /// Medoid per meta class, aligned to the family's canonical order.
        meta_medoids: Vec<(FocalSet, usize)>,
    },
    Weighted {
        /// One weight row per nonempty focal set (family order, empty set
        /// skipped); rows sum to 1.
        weights: Vec<Vec<f64>>,
    },
}

/// Dissimilarities between every object and every nonempty focal set.
/// `values[i][j]` corresponds to the family set at index `j + 1` (the empty
/// set carries no dissimilarity).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassDissimilarity {
    pub values: Vec<Vec<f64>>,
}

impl ClassDissimilarity {
    #[inline]
    pub fn get(&self, i: usize, nonempty_idx: usize) -> f64 {
        self.values[i][nonempty_idx]
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Outcome of a clustering run.
#[derive(Clone, Debug)]
pub struct ClusterResult {
    pub partition: CredalPartition,
    pub prototypes: PrototypeModel,
    /// Objective value recorded after each credal-partition update.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Select `c` initial medoids.
///
/// After the first pick, each medoid is the non-selected object maximizing
/// its minimum dissimilarity to the already-selected set; ties break to the
/// lowest index. Deterministic for a given seed.
pub fn init_medoids(
    d: &DissimilarityMatrix,
    c: usize,
    mode: &InitMode,
    seed: u64,
) -> Result<Vec<usize>> {
    let n = d.n();
    if c > n {
        return Err(Error::InvalidArgument(format!("c = {c} exceeds the number of objects {n}")));
    }
    if c == 0 {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    if let InitMode::Explicit(medoids) = mode {
        if medoids.len() != c {
            return Err(Error::InvalidArgument(format!(
                "explicit init lists {} medoids for c = {c}",
                medoids.len()
            )));
        }
        return Ok(medoids.clone());
    }
    let first = match mode {
        InitMode::FarthestRandomStart => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let all: Vec<usize> = (0..n).collect();
            *all.choose(&mut rng).expect("n > 0")
        }
        InitMode::FarthestMinRowsumStart => {
            let mut best = 0;
            for i in 1..n {
                if d.row_sum(i) < d.row_sum(best) {
                    best = i;
                }
            }
            best
        }
        InitMode::Explicit(_) => unreachable!(),
    };
    let mut selected = vec![first];
    while selected.len() < c {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if selected.contains(&i) {
                continue;
            }
            let min_d = selected
                .iter()
                .map(|&m| d.get(i, m))
                .fold(f64::INFINITY, f64::min);
            match best {
                Some((_, score)) if min_d <= score => {}
                _ => best = Some((i, min_d)),
            }
        }
        selected.push(best.expect("fewer medoids than objects").0);
    }
    Ok(selected)
}

/// Credal-partition update: allocate each object's unit mass over the focal
/// sets from the class dissimilarities.
///
/// When some nonempty set is at distance zero, the full mass goes to it
/// (ties resolved by smallest cardinality then canonical order, i.e. family
/// order). Otherwise
/// `m_ij ∝ |A_j|^{-α/(β-1)} d_ij^{-1/(β-1)}` with the δ term of `mode` added
/// to the normalizer, and the remainder goes to the empty set.
pub fn update_masses(
    cd: &ClassDissimilarity,
    family: &FocalSetFamily,
    alpha: f64,
    beta: f64,
    delta: f64,
    mode: EmptySetExponent,
) -> CredalPartition {
    let n = cd.n();
    let f = family.len();
    let expo = -1.0 / (beta - 1.0);
    let delta_term = match mode {
        EmptySetExponent::Literal => delta.powf(expo),
        EmptySetExponent::Derived => (delta * delta).powf(expo),
    };
    let card_weights: Vec<f64> = family
        .sets()
        .iter()
        .skip(1)
        .map(|s| (s.cardinality() as f64).powf(alpha * expo))
        .collect();
    // β = 2 is the common case; 1/x is much cheaper than powf
    let inv_power: fn(f64, f64) -> f64 =
        if expo == -1.0 { |x, _| 1.0 / x } else { |x, e| x.powf(e) };

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0.0; f];
        if let Some(zero_idx) = (0..f - 1).find(|&j| cd.get(i, j) == 0.0) {
            // family order is canonical, so the first zero wins ties
            row[zero_idx + 1] = 1.0;
        } else {
            let mut denom = delta_term;
            let mut weights = vec![0.0; f - 1];
            for j in 0..f - 1 {
                let w = card_weights[j] * inv_power(cd.get(i, j), expo);
                weights[j] = w;
                denom += w;
            }
            let mut assigned = 0.0;
            for j in 0..f - 1 {
                let m = weights[j] / denom;
                row[j + 1] = m;
                assigned += m;
            }
            row[0] = (1.0 - assigned).max(0.0);
        }
        rows.push(row);
    }
    CredalPartition::new(family.clone(), rows).expect("mass update produces valid bbas")
}

/// Objective value: `Σ_i Σ_{A_j≠∅} |A_j|^α m_ij^β d_ij + Σ_i δ² m_i∅^β`.
pub fn objective_value(
    cd: &ClassDissimilarity,
    partition: &CredalPartition,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> f64 {
    let family = partition.family();
    let cards: Vec<f64> = family
        .sets()
        .iter()
        .skip(1)
        .map(|s| (s.cardinality() as f64).powf(alpha))
        .collect();
    let mass_power: fn(f64, f64) -> f64 =
        if beta == 2.0 { |m, _| m * m } else { |m, b| m.powf(b) };
    let mut total = 0.0;
    for i in 0..partition.n() {
        let row = partition.row(i);
        total += delta * delta * mass_power(row[0], beta);
        for j in 0..family.len() - 1 {
            total += cards[j] * mass_power(row[j + 1], beta) * cd.get(i, j);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::enumerate_focal_sets;
    use crate::dissimilarity::euclidean_dissimilarity;

    fn line(points: &[f64]) -> DissimilarityMatrix {
        euclidean_dissimilarity(&points.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn farthest_point_follows_first() {
        let d = line(&[0.0, 1.0, 10.0]);
        let medoids = init_medoids(&d, 2, &InitMode::Explicit(vec![0, 2]), 0).unwrap();
        assert_eq!(medoids, vec![0, 2]);
        // seeded random start: whatever the first pick, the second is the
        // farthest remaining point
        for seed in 0..5 {
            let m = init_medoids(&d, 2, &InitMode::FarthestRandomStart, seed).unwrap();
            match m[0] {
                0 | 1 => assert_eq!(m[1], 2),
                2 => assert_eq!(m[1], 0),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn min_rowsum_start() {
        // row sums are (11, 10, 19): the middle point starts
        let d = line(&[0.0, 1.0, 10.0]);
        let m = init_medoids(&d, 2, &InitMode::FarthestMinRowsumStart, 0).unwrap();
        assert_eq!(m[0], 1);
        assert_eq!(m[1], 2);
    }

    #[test]
    fn c_equals_n_selects_everything() {
        let d = line(&[0.0, 1.0, 10.0]);
        let mut m = init_medoids(&d, 3, &InitMode::FarthestMinRowsumStart, 0).unwrap();
        m.sort_unstable();
        assert_eq!(m, vec![0, 1, 2]);
        assert!(init_medoids(&d, 4, &InitMode::FarthestMinRowsumStart, 0).is_err());
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let d = line(&[0.0, 2.0, 3.0, 9.0, 10.0]);
        let a = init_medoids(&d, 3, &InitMode::FarthestRandomStart, 7).unwrap();
        let b = init_medoids(&d, 3, &InitMode::FarthestRandomStart, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mass_update_matches_hand_evaluation() {
        // c=2, α=2, β=2, δ=100, d = (1,1,1) over ({0},{1},Ω):
        // weights (1,1,0.25) plus δ term 0.01 → denominator 2.26
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let cd = ClassDissimilarity { values: vec![vec![1.0, 1.0, 1.0]] };
        let p = update_masses(&cd, &family, 2.0, 2.0, 100.0, EmptySetExponent::Literal);
        let row = p.row(0);
        assert!((row[1] - 1.0 / 2.26).abs() < 1e-12);
        assert!((row[2] - 1.0 / 2.26).abs() < 1e-12);
        assert!((row[3] - 0.25 / 2.26).abs() < 1e-12);
        assert!((row[0] - 0.01 / 2.26).abs() < 1e-12);
    }

    #[test]
    fn mass_update_symmetric_distances_symmetric_masses() {
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let cd = ClassDissimilarity { values: vec![vec![3.0, 3.0, 5.0]] };
        let p = update_masses(&cd, &family, 1.0, 2.0, 10.0, EmptySetExponent::Literal);
        let row = p.row(0);
        assert!((row[1] - row[2]).abs() < 1e-15);
    }

    #[test]
    fn mass_update_zero_distance_takes_all() {
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        // zero distance to the frame (index 2 of the nonempty list)
        let cd = ClassDissimilarity { values: vec![vec![2.0, 3.0, 0.0]] };
        let p = update_masses(&cd, &family, 1.0, 2.0, 10.0, EmptySetExponent::Literal);
        assert_eq!(p.row(0), &[0.0, 0.0, 0.0, 1.0]);
        // tie between both singletons: smaller canonical index wins
        let cd = ClassDissimilarity { values: vec![vec![0.0, 0.0, 1.0]] };
        let p = update_masses(&cd, &family, 1.0, 2.0, 10.0, EmptySetExponent::Literal);
        assert_eq!(p.row(0), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn derived_exponent_shrinks_empty_mass() {
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let cd = ClassDissimilarity { values: vec![vec![1.0, 2.0, 3.0]] };
        let lit = update_masses(&cd, &family, 1.0, 2.0, 10.0, EmptySetExponent::Literal);
        let der = update_masses(&cd, &family, 1.0, 2.0, 10.0, EmptySetExponent::Derived);
        assert!(der.row(0)[0] < lit.row(0)[0]);
    }

    #[test]
    fn objective_edge_cases() {
        let family = enumerate_focal_sets(2, 2, true).unwrap();
        let cd = ClassDissimilarity { values: vec![vec![1.0, 1.0, 1.0]; 3] };
        // all mass on the empty set: J = n δ²
        let all_empty = CredalPartition::new(
            family.clone(),
            vec![vec![1.0, 0.0, 0.0, 0.0]; 3],
        )
        .unwrap();
        assert!((objective_value(&cd, &all_empty, 1.0, 2.0, 3.0) - 3.0 * 9.0).abs() < 1e-12);

        // all mass on singletons at distance zero: J = 0
        let cd0 = ClassDissimilarity { values: vec![vec![0.0, 1.0, 1.0]; 3] };
        let crisp = CredalPartition::new(
            family.clone(),
            vec![vec![0.0, 1.0, 0.0, 0.0]; 3],
        )
        .unwrap();
        assert_eq!(objective_value(&cd0, &crisp, 1.0, 2.0, 3.0), 0.0);

        // one object, full mass on a singleton at distance 2: J = 2
        let cd2 = ClassDissimilarity { values: vec![vec![2.0, 5.0, 5.0]] };
        let one = CredalPartition::new(family, vec![vec![0.0, 1.0, 0.0, 0.0]]).unwrap();
        assert!((objective_value(&cd2, &one, 7.3, 2.0, 3.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let d = line(&[0.0, 1.0, 2.0, 3.0]);
        let mut cfg = EcmddConfig::new(2);
        assert!(cfg.validate(d.n()).is_ok());
        cfg.beta = 1.0;
        assert!(cfg.validate(d.n()).is_err());
        cfg.beta = 2.0;
        cfg.variant = Variant::WeightedTopQ(4);
        assert!(cfg.validate(d.n()).is_err());
        cfg.variant = Variant::WeightedTopQ(2);
        assert!(cfg.validate(d.n()).is_ok());
        cfg.init = InitMode::Explicit(vec![0, 0]);
        assert!(cfg.validate(d.n()).is_err());
    }
}
