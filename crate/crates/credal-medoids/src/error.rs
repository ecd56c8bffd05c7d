use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The frame of discernment cannot be built (e.g. fewer than two clusters).
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    /// A parameter is outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The pignistic transform is undefined because the full mass sits on the
    /// empty set.
    #[error("total conflict: m(\u{2205}) = 1, pignistic transform undefined")]
    TotalConflict,

    /// A mass vector does not form a valid basic belief assignment.
    #[error("invalid bba: {0}")]
    InvalidBba(String),

    /// Input matrix is not square.
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    /// Dissimilarity input violates symmetry beyond tolerance.
    #[error("asymmetric input: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    AsymmetricInput { i: usize, j: usize, a: f64, b: f64 },

    /// Dissimilarity input contains a negative entry.
    #[error("negative dissimilarity at ({i},{j}): {value}")]
    NegativeDissimilarity { i: usize, j: usize, value: f64 },

    /// Dissimilarity input has a nonzero diagonal entry.
    #[error("nonzero diagonal at ({i},{i}): {value}")]
    NonzeroDiagonal { i: usize, value: f64 },

    /// Point rows have inconsistent dimensions.
    #[error("dimension mismatch: row {row} has {len} coordinates, expected {expected}")]
    DimensionMismatch { row: usize, len: usize, expected: usize },

    /// A similarity value lies outside [0, 1].
    #[error("similarity out of range at ({i},{j}): {value}")]
    SimilarityOutOfRange { i: usize, j: usize, value: f64 },

    /// A file could not be parsed.
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    /// Unknown fixture or resource name.
    #[error("not found: {0}")]
    NotFound(String),

    /// Two sequences that must agree in length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
