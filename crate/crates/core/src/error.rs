use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate shape: {0}")]
    Degenerate(String),

    #[error("shape is not convex: {0}")]
    NonConvex(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph has {n} vertices, above the cap of {cap} for {what}")]
    SizeCap { what: &'static str, n: usize, cap: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("generator failure: {0}")]
    Generator(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
