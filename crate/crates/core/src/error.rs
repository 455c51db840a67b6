use serde::Serialize;
use thiserror::Error;

use crate::dist::Dist;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A set of source points whose fiber slots cannot all be placed into the
/// target fibers reachable from them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HallWitness {
    pub source_points: Vec<usize>,
    pub demand: usize,
    pub target_points: Vec<usize>,
    pub capacity: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composition undefined: {0}")]
    CompositionUndefined(String),
    #[error("not a function: {0}")]
    NotAFunction(String),
    #[error("not an embedding: transpose expansion {op_expansion} collapses a component")]
    NotAnEmbedding { op_expansion: Dist },
    #[error("{what} has size {size}, above the enumeration limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("zero matrix has no singular pair")]
    ZeroMatrix,
    #[error("Hall condition violated: demand {} > capacity {}", .0.demand, .0.capacity)]
    HallViolation(HallWitness),
    #[error("hypothesis violated: {name}: {detail}")]
    Hypothesis { name: &'static str, detail: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpaceMismatch(_) => "space_mismatch",
            Error::InvalidSpace(_) => "invalid_space",
            Error::InvalidRelation(_) => "invalid_relation",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::CompositionUndefined(_) => "composition_undefined",
            Error::NotAFunction(_) => "not_a_function",
            Error::NotAnEmbedding { .. } => "not_an_embedding",
            Error::SizeLimit { .. } => "size_limit",
            Error::ZeroMatrix => "zero_matrix",
            Error::HallViolation(_) => "hall_violation",
            Error::Hypothesis { .. } => "hypothesis_violation",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}
