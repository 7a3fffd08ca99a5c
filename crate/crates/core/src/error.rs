use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index tuple has length {found}, tensor order is {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported tensor order {0} (supported: 2, 3, 4)")]
    UnsupportedOrder(usize),
    #[error("tensor dimension must be at least 1")]
    EmptyDimension,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("graph needs at least 2 vertices, found {0}")]
    TooFewVertices(usize),
    #[error("{0}")]
    TooLarge(String),
    #[error("clique size k = {k} is too small (need k >= {min})")]
    CliqueSizeTooSmall { k: usize, min: usize },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: String },
    #[error("vertex set is not a clique of size >= 2")]
    NotAClique,
    #[error("no edge support: coupling denominator is zero")]
    NoEdgeSupport,
    #[error("input vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("oracle mode requires a graph-derived instance")]
    MissingProvenance,
    #[error("instance kind mismatch: expected {expected}")]
    WrongKind { expected: &'static str },
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
