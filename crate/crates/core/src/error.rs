use thiserror::Error;

/// Errors produced by the truncation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("incompatible coefficient frames: {0}")]
    FrameMismatch(String),

    #[error("element is not representable in this space: {0}")]
    Representation(String),

    #[error("operator `{operator}` does not provide {capability}")]
    CapabilityAbsent {
        operator: String,
        capability: &'static str,
    },

    #[error("invalid weight law: {0}")]
    InvalidLaw(String),

    #[error("sequence is not square-summable: {0}")]
    NonSummable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series too short for classification: need at least {needed} records, got {got}")]
    InsufficientSeries { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
