use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// geometric primitives: bad shapes, degenerate inputs, violated
/// preconditions and data that is explicitly marked unknown.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("descent obstruction: the form does not descend (q(mu) = 1)")]
    DescentObstruction,
    #[error("derivation error: {0}")]
    Derivation(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
