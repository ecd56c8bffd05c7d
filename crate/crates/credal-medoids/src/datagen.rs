//! Synthetic data generators and embedded fixtures for reproducible
//! experiments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dissimilarity::{
    euclidean_dissimilarity, validate_dissimilarity, AdjacencyMatrix, DissimilarityMatrix,
};
use crate::error::{Error, Result};

/// A labeled planar point set produced by a generator or fixture.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPointSet {
    pub points: Vec<[f64; 2]>,
    pub truth: Vec<usize>,
    pub seed: u64,
}

impl LabeledPointSet {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point_rows(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.to_vec()).collect()
    }

    /// Pairwise Euclidean dissimilarities of the points.
    pub fn dissimilarity(&self) -> DissimilarityMatrix {
        euclidean_dissimilarity(&self.point_rows()).expect("points are rectangular")
    }
}

/// Payload of a named fixture.
#[derive(Clone, Debug, PartialEq)]
pub enum FixturePayload {
    Dissimilarity(DissimilarityMatrix),
    Graph(AdjacencyMatrix),
    Points(LabeledPointSet),
}

/// A named data set with optional reference labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub payload: FixturePayload,
    pub truth: Option<Vec<usize>>,
}

/// Uniform points in three overlapping disks of radius 5 centered at
/// (5,6), (0,0) and (9,0), labeled by disk of origin.
pub fn generate_circles(points_per_circle: usize, seed: u64) -> LabeledPointSet {
    const RADIUS: f64 = 5.0;
    const CENTERS: [(f64, f64); 3] = [(5.0, 6.0), (0.0, 0.0), (9.0, 0.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(3 * points_per_circle);
    let mut truth = Vec::with_capacity(3 * points_per_circle);
    for (label, &(cx, cy)) in CENTERS.iter().enumerate() {
        for _ in 0..points_per_circle {
            // rejection sampling keeps the disk uniform
            let (dx, dy) = loop {
                let dx = rng.random_range(-RADIUS..=RADIUS);
                let dy = rng.random_range(-RADIUS..=RADIUS);
                if dx * dx + dy * dy <= RADIUS * RADIUS {
                    break (dx, dy);
                }
            };
            points.push([cx + dx, cy + dy]);
            truth.push(label);
        }
    }
    LabeledPointSet { points, truth, seed }
}

/// Isotropic Gaussian components whose means sit evenly on a circle of the
/// given radius.
pub fn generate_gaussian_ring(
    k: usize,
    per_component: usize,
    radius: f64,
    sd: f64,
    seed: u64,
) -> Result<LabeledPointSet> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("at least 2 components required, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(k * per_component);
    let mut truth = Vec::with_capacity(k * per_component);
    for j in 0..k {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        let (mx, my) = (radius * angle.cos(), radius * angle.sin());
        for _ in 0..per_component {
            let (gx, gy) = gaussian_pair(&mut rng);
            points.push([mx + sd * gx, my + sd * gy]);
            truth.push(j);
        }
    }
    Ok(LabeledPointSet { points, truth, seed })
}

/// One standard-normal pair via the Box-Muller transform.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Average dissimilarity scores between twelve countries, with the usual
/// Western / Developing / Communist reference split.
const COUNTRIES: [[f64; 12]; 12] = [
    [0.00, 5.58, 7.00, 7.08, 4.83, 2.17, 6.42, 3.42, 2.50, 6.08, 5.25, 4.75],
    [5.58, 0.00, 6.50, 7.00, 5.08, 5.75, 5.00, 5.50, 4.92, 6.67, 6.83, 3.00],
    [7.00, 6.50, 0.00, 3.83, 8.17, 6.67, 5.58, 6.42, 6.25, 4.25, 4.50, 6.08],
    [7.08, 7.00, 3.83, 0.00, 5.83, 6.92, 6.00, 6.42, 7.33, 2.67, 3.75, 6.67],
    [4.83, 5.08, 8.17, 5.83, 0.00, 4.92, 4.67, 5.00, 4.50, 6.00, 5.75, 5.00],
    [2.17, 5.75, 6.67, 6.92, 4.92, 0.00, 6.42, 3.92, 2.25, 6.17, 5.42, 5.58],
    [6.42, 5.00, 5.58, 6.00, 4.67, 6.42, 0.00, 6.17, 6.33, 6.17, 6.08, 4.83],
    [3.42, 5.50, 6.42, 6.42, 5.00, 3.92, 6.17, 0.00, 2.75, 6.92, 5.83, 6.17],
    [2.50, 4.92, 6.25, 7.33, 4.50, 2.25, 6.33, 2.75, 0.00, 6.17, 6.67, 5.67],
    [6.08, 6.67, 4.25, 2.67, 6.00, 6.17, 6.17, 6.92, 6.17, 0.00, 3.67, 6.50],
    [5.25, 6.83, 4.50, 3.75, 5.75, 5.42, 6.08, 5.83, 6.67, 3.67, 0.00, 6.92],
    [4.75, 3.00, 6.08, 6.67, 5.00, 5.58, 4.83, 6.17, 5.67, 6.50, 6.92, 0.00],
];

pub const COUNTRY_NAMES: [&str; 12] = [
    "Belgium",
    "Brazil",
    "China",
    "Cuba",
    "Egypt",
    "France",
    "India",
    "Israel",
    "USA",
    "USSR",
    "Yugoslavia",
    "Zaire",
];

/// 0 = Western, 1 = Developing, 2 = Communist.
const COUNTRY_TRUTH: [usize; 12] = [0, 1, 2, 2, 1, 0, 1, 0, 0, 2, 2, 1];

/// Zachary's karate club: 34 members, 78 friendship edges (1-based ids).
const KARATE_EDGES: [(usize, usize); 78] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 11),
    (1, 12),
    (1, 13),
    (1, 14),
    (1, 18),
    (1, 20),
    (1, 22),
    (1, 32),
    (2, 3),
    (2, 4),
    (2, 8),
    (2, 14),
    (2, 18),
    (2, 20),
    (2, 22),
    (2, 31),
    (3, 4),
    (3, 8),
    (3, 9),
    (3, 10),
    (3, 14),
    (3, 28),
    (3, 29),
    (3, 33),
    (4, 8),
    (4, 13),
    (4, 14),
    (5, 7),
    (5, 11),
    (6, 7),
    (6, 11),
    (6, 17),
    (7, 17),
    (9, 31),
    (9, 33),
    (9, 34),
    (10, 34),
    (14, 34),
    (15, 33),
    (15, 34),
    (16, 33),
    (16, 34),
    (19, 33),
    (19, 34),
    (20, 34),
    (21, 33),
    (21, 34),
    (23, 33),
    (23, 34),
    (24, 26),
    (24, 28),
    (24, 30),
    (24, 33),
    (24, 34),
    (25, 26),
    (25, 28),
    (25, 32),
    (26, 32),
    (27, 30),
    (27, 34),
    (28, 34),
    (29, 32),
    (29, 34),
    (30, 33),
    (30, 34),
    (31, 33),
    (31, 34),
    (32, 33),
    (32, 34),
    (33, 34),
];

/// Faction that formed around the instructor (node 1), 1-based ids; the
/// remaining members sided with the administrator (node 34).
const KARATE_FACTION_ONE: [usize; 16] = [1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 17, 18, 20, 22];

/// Twelve objects: two mirrored five-point diamonds, a bridge object sitting
/// exactly between them, and a far-off outlier. Coordinates are a
/// reconstruction; the bridge (object 6) and the outlier (object 12) carry
/// nominal labels of their nearest group.
fn x12_points() -> LabeledPointSet {
    let points = vec![
        [-5.0, 0.0],
        [-4.0, 1.0],
        [-4.0, 0.0],
        [-4.0, -1.0],
        [-3.0, 0.0],
        [0.0, 0.0],
        [3.0, 0.0],
        [4.0, 1.0],
        [4.0, 0.0],
        [4.0, -1.0],
        [5.0, 0.0],
        [0.0, 8.0],
    ];
    let truth = vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1];
    LabeledPointSet { points, truth, seed: 0 }
}

/// Eleven objects: a four-point square cluster centered at (-1, 1), a
/// six-point cluster centered at (1, 1), and object 11 at (0.05, 1), slightly
/// nearer the right cluster's center. No single object of the left square
/// represents it better than the other three.
fn x11_points() -> LabeledPointSet {
    let points = vec![
        [-1.35, 1.35],
        [-1.35, 0.65],
        [-0.65, 1.35],
        [-0.65, 0.65],
        [1.075, 1.4],
        [1.075, 0.6],
        [0.85, 1.1],
        [0.85, 0.9],
        [1.075, 1.45],
        [1.075, 0.55],
        [0.05, 1.0],
    ];
    let truth = vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1];
    LabeledPointSet { points, truth, seed: 0 }
}

/// Embedded fixtures: `countries`, `karate`, `x12`, `x11`.
pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    match name {
        "countries" => {
            let matrix =
                validate_dissimilarity(COUNTRIES.iter().map(|row| row.to_vec()).collect())
                    .expect("embedded matrix is valid");
            Ok(Fixture {
                name: name.into(),
                payload: FixturePayload::Dissimilarity(matrix),
                truth: Some(COUNTRY_TRUTH.to_vec()),
            })
        }
        "karate" => {
            let edges: Vec<(usize, usize)> =
                KARATE_EDGES.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
            let adj = AdjacencyMatrix::from_edges(34, &edges).expect("embedded graph is valid");
            let truth = (1..=34)
                .map(|node| usize::from(!KARATE_FACTION_ONE.contains(&node)))
                .collect();
            Ok(Fixture {
                name: name.into(),
                payload: FixturePayload::Graph(adj),
                truth: Some(truth),
            })
        }
        "x12" => {
            let points = x12_points();
            let truth = points.truth.clone();
            Ok(Fixture {
                name: name.into(),
                payload: FixturePayload::Points(points),
                truth: Some(truth),
            })
        }
        "x11" => {
            let points = x11_points();
            let truth = points.truth.clone();
            Ok(Fixture {
                name: name.into(),
                payload: FixturePayload::Points(points),
                truth: Some(truth),
            })
        }
        other => Err(Error::NotFound(format!("unknown fixture '{other}'"))),
    }
}

/// The dissimilarity matrix of a fixture, deriving Euclidean distances for
/// point payloads. Graph fixtures need an explicit similarity index first.
pub fn fixture_dissimilarity(fixture: &Fixture) -> Result<DissimilarityMatrix> {
    match &fixture.payload {
        FixturePayload::Dissimilarity(d) => Ok(d.clone()),
        FixturePayload::Points(p) => Ok(p.dissimilarity()),
        FixturePayload::Graph(_) => Err(Error::InvalidArgument(format!(
            "fixture '{}' is a graph; derive a dissimilarity via a similarity index",
            fixture.name
        ))),
    }
}
