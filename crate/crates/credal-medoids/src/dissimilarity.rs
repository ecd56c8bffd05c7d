//! Dissimilarity matrices: validation, Euclidean construction, graph
//! similarity indices and their conversion to dissimilarities, plus the CSV
//! and edge-list file formats.

use std::io::BufRead;

use crate::error::{Error, Result};

/// Symmetry tolerance for dissimilarity validation.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// A validated symmetric nonnegative pairwise dissimilarity matrix with zero
/// diagonal. The sole input to every clusterer in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<Vec<f64>>,
}

impl DissimilarityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Sum of row `i`, i.e. the total dissimilarity of object `i` to all
    /// other objects.
    pub fn row_sum(&self, i: usize) -> f64 {
        self.values[i].iter().sum()
    }
}

/// Validate a raw square matrix as a dissimilarity matrix.
pub fn validate_dissimilarity(values: Vec<Vec<f64>>) -> Result<DissimilarityMatrix> {
    let n = values.len();
    for (i, row) in values.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
        }
    }
    for i in 0..n {
        if values[i][i] != 0.0 {
            return Err(Error::NonzeroDiagonal { i, value: values[i][i] });
        }
        for j in 0..n {
            let v = values[i][j];
            if !(v >= 0.0) {
                return Err(Error::NegativeDissimilarity { i, j, value: v });
            }
            if j > i && (v - values[j][i]).abs() > SYMMETRY_TOLERANCE {
                return Err(Error::AsymmetricInput { i, j, a: v, b: values[j][i] });
            }
        }
    }
    Ok(DissimilarityMatrix { n, values })
}

/// Pairwise Euclidean distances between coordinate rows.
pub fn euclidean_dissimilarity(points: &[Vec<f64>]) -> Result<DissimilarityMatrix> {
    let n = points.len();
    let dim = points.first().map_or(0, |p| p.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { row: i, len: p.len(), expected: dim });
        }
    }
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            values[i][j] = d;
            values[j][i] = d;
        }
    }
    Ok(DissimilarityMatrix { n, values })
}

/// Undirected unweighted graph as a symmetric binary matrix with zero
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<Vec<bool>>,
}

impl AdjacencyMatrix {
    /// Build from an edge list over nodes `0..n`. Self-loops are rejected,
    /// duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut entries = vec![vec![false; n]; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) outside node range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {u}")));
            }
            entries[u][v] = true;
            entries[v][u] = true;
        }
        Ok(AdjacencyMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.entries[u][v]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.entries[u].iter().filter(|&&e| e).count()
    }

    /// Neighbors of `u`, excluding `u` itself.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.entries[u][v]).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.entries[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Symmetric node-similarity matrix with values in [0, 1] and unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn from_raw(values: Vec<Vec<f64>>) -> Result<Self> {
        let n = values.len();
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::SimilarityOutOfRange { i, j, value: v });
                }
                if j > i && (v - values[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::AsymmetricInput { i, j, a: v, b: values[j][i] });
                }
            }
        }
        Ok(SimilarityMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }
}

/// Graph similarity index choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSimilarityIndex {
    /// Shared-neighbor fraction: `|N(x)∩N(y)| / |N(x)∪N(y)|`.
    Jaccard,
    /// Degree-discounted shared neighbors: `Σ_{z∈N(x)∩N(y)} 1/d(z)`.
    Zhou,
    /// Zhou's index restricted to directly connected pairs.
    Pan,
    /// Global index from `T` steps of signal propagation through `I + A`.
    Signal { steps: usize },
}

/// Compute a node-similarity matrix for an undirected graph.
///
/// Zhou/Pan scores can exceed 1; whenever the maximum off-diagonal value
/// does, the whole matrix is divided by it so the output stays in [0, 1].
/// The diagonal is always set to 1.
pub fn graph_similarity(
    adj: &AdjacencyMatrix,
    index: GraphSimilarityIndex,
) -> Result<SimilarityMatrix> {
    let n = adj.n();
    let mut values = match index {
        GraphSimilarityIndex::Jaccard => pairwise(n, |x, y| {
            let nx = adj.neighbors(x);
            let ny = adj.neighbors(y);
            let inter = nx.iter().filter(|v| ny.contains(v)).count();
            let union = nx.len() + ny.len() - inter;
            if union == 0 {
                0.0
            } else {
                inter as f64 / union as f64
            }
        }),
        GraphSimilarityIndex::Zhou => pairwise(n, |x, y| zhou_score(adj, x, y)),
        GraphSimilarityIndex::Pan => pairwise(n, |x, y| {
            if adj.has_edge(x, y) {
                zhou_score(adj, x, y)
            } else {
                0.0
            }
        }),
        GraphSimilarityIndex::Signal { steps } => {
            if steps < 1 {
                return Err(Error::InvalidArgument(format!(
                    "signal propagation needs at least 1 step, got {steps}"
                )));
            }
            signal_similarity(adj, steps)
        }
    };

    let mut max_off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_off = max_off.max(values[i][j]);
            }
        }
    }
    if max_off > 1.0 {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i][j] /= max_off;
                }
            }
        }
    }
    for i in 0..n {
        values[i][i] = 1.0;
    }
    SimilarityMatrix::from_raw(values)
}

fn pairwise(n: usize, f: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = f(i, j);
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    values
}

fn zhou_score(adj: &AdjacencyMatrix, x: usize, y: usize) -> f64 {
    adj.neighbors(x)
        .into_iter()
        .filter(|&z| adj.has_edge(z, y))
        .map(|z| 1.0 / adj.degree(z) as f64)
        .sum()
}

/// Influence vectors evolve as `U ← (I + A)·U` from `U = I` for `steps`
/// steps; each node's influence column is normalized to unit length and
/// similarity is `1 - ‖u_x - u_y‖ / √2`.
fn signal_similarity(adj: &AdjacencyMatrix, steps: usize) -> Vec<Vec<f64>> {
    let n = adj.n();
    // u[x] is node x's influence vector; (I + A) is symmetric so rows of the
    // power equal its columns.
    let mut u: Vec<Vec<f64>> =
        (0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..steps {
        let mut next = vec![vec![0.0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let mut acc = u[x][y];
                for z in adj.neighbors(y) {
                    acc += u[x][z];
                }
                next[x][y] = acc;
            }
        }
        u = next;
    }
    for row in &mut u {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    pairwise(n, |x, y| {
        let dist = u[x]
            .iter()
            .zip(&u[y])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        (1.0 - dist / sqrt2).clamp(0.0, 1.0)
    })
}

/// Convert similarities to dissimilarities elementwise via `d = 1 - s`,
/// forcing the diagonal to zero.
pub fn similarity_to_dissimilarity(sim: &SimilarityMatrix) -> DissimilarityMatrix {
    let n = sim.n();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            values[i][j] = if i == j { 0.0 } else { 1.0 - sim.get(i, j) };
        }
    }
    DissimilarityMatrix { n, values }
}

/// Parse a dissimilarity matrix from CSV: `n` lines of `n` comma-separated
/// decimals; a single leading line starting with `#` is skipped.
pub fn load_dissimilarity_csv(reader: impl BufRead) -> Result<DissimilarityMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Format { line: line_no, message: e.to_string() })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (trimmed.starts_with('#') && rows.is_empty()) {
            continue;
        }
        let row: Vec<f64> = trimmed
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| Error::Format {
                    line: line_no,
                    message: format!("cannot parse '{}' as a number", tok.trim()),
                })
            })
            .collect::<Result<_>>()?;
        if let Some(exp) = expected {
            if row.len() != exp {
                return Err(Error::Format {
                    line: line_no,
                    message: format!("expected {exp} columns, found {}", row.len()),
                });
            }
        } else {
            expected = Some(row.len());
        }
        rows.push(row);
    }
    let n_cols = expected.unwrap_or(0);
    if rows.len() != n_cols {
        return Err(Error::Format {
            line: rows.len() + 1,
            message: format!("{} rows of {} columns do not form a square matrix", rows.len(), n_cols),
        });
    }
    validate_dissimilarity(rows)
}

/// Parse an undirected edge list: one edge per line as two whitespace-separated
/// node tokens. Lines starting with `#` are ignored. An optional first line
/// `nodes <N>` fixes the node count, in which case tokens must be integers
/// (1-based unless a `0` token appears); otherwise nodes are indexed in
/// first-appearance order.
pub fn load_edge_list(reader: impl BufRead) -> Result<AdjacencyMatrix> {
    let mut declared: Option<usize> = None;
    let mut raw_edges: Vec<(String, String, usize)> = Vec::new();
    let mut seen_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Format { line: line_no, message: e.to_string() })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if !seen_header && raw_edges.is_empty() && toks.len() == 2 && toks[0] == "nodes" {
            let n = toks[1].parse::<usize>().map_err(|_| Error::Format {
                line: line_no,
                message: format!("cannot parse node count '{}'", toks[1]),
            })?;
            declared = Some(n);
            seen_header = true;
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::Format {
                line: line_no,
                message: format!("expected two node tokens, found {}", toks.len()),
            });
        }
        raw_edges.push((toks[0].to_string(), toks[1].to_string(), line_no));
    }

    if let Some(n) = declared {
        let parsed: Vec<(usize, usize, usize)> = raw_edges
            .iter()
            .map(|(a, b, line)| {
                let u = a.parse::<usize>().map_err(|_| Error::Format {
                    line: *line,
                    message: format!("cannot parse node id '{a}'"),
                })?;
                let v = b.parse::<usize>().map_err(|_| Error::Format {
                    line: *line,
                    message: format!("cannot parse node id '{b}'"),
                })?;
                Ok((u, v, *line))
            })
            .collect::<Result<_>>()?;
        let zero_based = parsed.iter().any(|&(u, v, _)| u == 0 || v == 0);
        let offset = if zero_based { 0 } else { 1 };
        let mut edges = Vec::with_capacity(parsed.len());
        for (u, v, line) in parsed {
            if u < offset || v < offset || u - offset >= n || v - offset >= n {
                return Err(Error::Format {
                    line,
                    message: format!("node id out of declared range (nodes {n})"),
                });
            }
            edges.push((u - offset, v - offset));
        }
        AdjacencyMatrix::from_edges(n, &edges)
    } else {
        let mut ids: Vec<String> = Vec::new();
        let index_of = |tok: &str, ids: &mut Vec<String>| -> usize {
            if let Some(pos) = ids.iter().position(|t| t == tok) {
                pos
            } else {
                ids.push(tok.to_string());
                ids.len() - 1
            }
        };
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (a, b, _) in &raw_edges {
            let u = index_of(a, &mut ids);
            let v = index_of(b, &mut ids);
            edges.push((u, v));
        }
        AdjacencyMatrix::from_edges(ids.len(), &edges)
    }
}

/// Write a dissimilarity matrix in the CSV format accepted by
/// [`load_dissimilarity_csv`], with an optional `#`-prefixed header line.
pub fn write_dissimilarity_csv(matrix: &DissimilarityMatrix, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for i in 0..matrix.n() {
        let row: Vec<String> = matrix.row(i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Write an edge list with a `nodes <N>` header (1-based node ids).
pub fn write_edge_list(adj: &AdjacencyMatrix, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    out.push_str(&format!("nodes {}\n", adj.n()));
    for (u, v) in adj.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}
