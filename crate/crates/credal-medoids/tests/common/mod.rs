//! Shared test oracles, independent of the library's computation paths.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimize `f` over the probability simplex by projected gradient descent
/// with finite-difference gradients and multiple restarts. Slow and simple;
/// used only to cross-check closed-form updates on small instances.
pub fn minimize_on_simplex(f: &dyn Fn(&[f64]) -> f64, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / dim as f64; dim]];
    for k in 0..dim {
        let mut corner = vec![0.0; dim];
        corner[k] = 1.0;
        starts.push(corner);
    }
    for _ in 0..6 {
        let raw: Vec<f64> = (0..dim).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
        let total: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|x| x / total).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts {
        let candidate = projected_gradient(f, start);
        let value = f(&candidate);
        match &best {
            Some((_, b)) if value >= *b => {}
            _ => best = Some((candidate, value)),
        }
    }
    best.expect("at least one start").0
}

fn projected_gradient(f: &dyn Fn(&[f64]) -> f64, mut x: Vec<f64>) -> Vec<f64> {
    let dim = x.len();
    let h = 1e-7;
    let mut step = 0.1;
    let mut value = f(&x);
    for _ in 0..4000 {
        // central finite differences
        let mut grad = vec![0.0; dim];
        for k in 0..dim {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[k] += h;
            minus[k] -= h;
            grad[k] = (f(&plus) - f(&minus)) / (2.0 * h);
        }
        let proposal: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - step * gi).collect();
        let projected = project_to_simplex(&proposal);
        let new_value = f(&projected);
        if new_value < value - 1e-15 {
            let moved: f64 =
                projected.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
            x = projected;
            value = new_value;
            step = (step * 1.2).min(1.0);
            if moved < 1e-12 {
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
    }
    x
}

/// Euclidean projection onto the probability simplex.
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (k, &val) in sorted.iter().enumerate() {
        cumulative += val;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if val - candidate > 0.0 {
            threshold = candidate;
        }
    }
    v.iter().map(|&x| (x - threshold).max(0.0)).collect()
}

/// Deterministic random dissimilarity matrix for small oracle instances.
pub fn random_dissimilarity(n: usize, seed: u64) -> credal_medoids::DissimilarityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(0.2..10.0);
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    credal_medoids::validate_dissimilarity(values).expect("construction is valid")
}
