//! Relational clustering with credal partitions.
//!
//! The crate clusters objects described only by a pairwise dissimilarity
//! matrix. Its centerpiece is evidential c-medoids in two flavors — a
//! single-medoid algorithm and a weighted multi-medoid one — which produce
//! credal partitions: per-object mass assignments over subsets of the
//! cluster set, so an object can be committed to one cluster, to a set of
//! clusters it sits between, or to the outlier class. Alongside live the
//! crisp and fuzzy medoid baselines (PAM, fuzzy c-medoids, multi-medoid
//! fuzzy clustering), belief-function decision rules, pair-counting metrics
//! with their evidential counterparts, graph similarity indices for turning
//! networks into dissimilarity data, and generators plus embedded fixtures
//! for reproducible experiments.

pub mod baselines;
pub mod belief;
pub mod datagen;
pub mod dissimilarity;
pub mod ecmdd;
pub mod error;
pub mod evaluation;
pub mod report;

pub use belief::{
    bel, betp, enumerate_focal_sets, harden, pl, Bba, CredalPartition, FocalSet, FocalSetFamily,
    HardLabel, HardeningRule,
};
pub use dissimilarity::{
    euclidean_dissimilarity, graph_similarity, similarity_to_dissimilarity,
    validate_dissimilarity, AdjacencyMatrix, DissimilarityMatrix, GraphSimilarityIndex,
    SimilarityMatrix,
};
pub use ecmdd::{
    fit_secmdd, fit_wecmdd, init_medoids, ClassDissimilarity, ClusterResult, EcmddConfig,
    EmptySetExponent, InitMode, PrototypeModel, Variant,
};
pub use error::{Error, Result};
