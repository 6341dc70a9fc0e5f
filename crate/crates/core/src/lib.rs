//! Community-preserving random graph generation.
//!
//! Given a simple undirected graph, the [`forge`] pipeline produces random
//! graphs whose modularity structure tracks the input to a tunable degree:
//! it keeps the `⌈α·n⌉` largest-modulus eigenpairs of the modularity (or
//! adjacency) matrix, maps the reconstruction back to edge probabilities and
//! samples an inhomogeneous Bernoulli graph.
//!
//! Around that pipeline the crate provides modularity evaluation and
//! Louvain maximization ([`community`]), synthetic benchmark inputs
//! ([`generators`]), two competing modularity-targeting generators
//! ([`baselines`]), and the metrics, experiment harness and
//! seed-based de-anonymization attack used to evaluate them ([`eval`]).

pub mod baselines;
pub mod community;
pub mod error;
pub mod eval;
pub mod forge;
pub mod generators;
pub mod graph;
pub mod rng;
pub mod spectral;

pub use community::{brute_force_max_modularity, louvain_maximize, modularity, partition_count, Partition};
pub use error::{Error, Result};
pub use forge::{
    back_transform, expected_matrix, normalize, normalized_entropy, sample_bernoulli, sgf, EntropyReport, Forge,
    NormalizationRule, ProbabilityMatrix, SgfConfig, Transformation, DEFAULT_LOGISTIC_K,
};
pub use graph::{
    average_clustering, degree_vector, load_attributes, load_edge_list, write_edge_list, DegreeVector, Graph,
    RealMatrix,
};
pub use spectral::{eigendecompose, modularity_matrix, Alpha, EigenDecomposition};
