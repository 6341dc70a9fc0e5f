use thiserror::Error;

/// Errors produced anywhere in the generation and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on node {node}{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    SelfLoop { node: usize, line: Option<usize> },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("duplicate attribute row for node {node}")]
    DuplicateAttributeRow { node: usize },

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate graph: total degree |K| is zero")]
    EmptyGraph,

    #[error("degenerate range: max equals min ({0}) for scale normalization")]
    DegenerateRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph too large for exhaustive search: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
