use thiserror::Error;

use crate::graph::{EdgeId, Violation};

/// Which factor of a tree distance matrix failed the full-rank test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", content = "edge", rename_all = "snake_case")]
pub enum SingularFactor {
    /// An individual edge weight is singular.
    Weight(EdgeId),
    /// The sum of all edge weights is singular.
    WeightSum,
}

impl std::fmt::Display for SingularFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularFactor::Weight(e) => write!(f, "weight of edge {e} is singular"),
            SingularFactor::WeightSum => write!(f, "sum of edge weights is singular"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix data has {found} entries, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("graph is malformed: {}", format_violations(.0))]
    Malformed(Vec<Violation>),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is a tree")]
    IsATree,
    #[error("vertices of a path query must differ (got {0} twice)")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(EdgeId),
    #[error("edge {0} is a bridge")]
    BridgeEdge(EdgeId),
    #[error("graph has no edge lying on a cycle")]
    NoBridgelessEdge,
    #[error("weight of edge {0} is singular")]
    SingularWeight(EdgeId),
    #[error("weight of edge {0} is not symmetric positive definite")]
    WeightNotSpd(EdgeId),
    #[error("distance matrix is not invertible: {0}")]
    NotInvertible(SingularFactor),

    #[error("invalid generator configuration: {0}")]
    BadConfig(String),
    #[error("graph with {n} vertices is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { n: usize, limit: usize },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
