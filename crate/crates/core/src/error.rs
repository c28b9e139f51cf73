use thiserror::Error;

/// Errors raised while building or evaluating a game.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("player index {index} out of range for {players} players")]
    PlayerOutOfRange { index: usize, players: usize },

    #[error("invalid feasible set: {0}")]
    InvalidSet(String),

    #[error("feasible set is empty")]
    EmptySet,

    #[error("feasible set is unbounded")]
    UnboundedSet,

    #[error("projection did not converge after {iterations} iterations (residual {residual:e})")]
    ProjectionNotConverged { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("game has no affine structure and no sampling budget was supplied")]
    NoAffineStructure,
}

pub type Result<T> = std::result::Result<T, CoreError>;
