use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid point: {reason} (defect {defect:e})")]
    InvalidPoint { reason: String, defect: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("indefinite extended-real sum: +inf + -inf")]
    IndefiniteSum,

    #[error("empty probe set")]
    EmptyProbes,

    #[error("degenerate candidate: {0}")]
    Degenerate(String),

    #[error("operation requires a euclidean space, got {0}")]
    NotEuclidean(String),

    #[error("improper function: {0}")]
    Improper(String),

    #[error("universe does not contain {0}")]
    NotInUniverse(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input:\n  {}", .0.join("\n  "))]
    Schema(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
