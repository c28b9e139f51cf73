use nag_core::CoreError;
use nag_network::NetworkError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Network(#[from] NetworkError),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("theory constants undefined: {0}")]
    TheoryDomain(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
