use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("unknown topology kind `{0}` (expected linear, log or complete)")]
    UnknownTopology(String),

    #[error("network needs at least {min} nodes, got {actual}")]
    TooFewNodes { min: usize, actual: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("graph has no edges")]
    NoEdges,

    #[error("matrix is not doubly stochastic: {0}")]
    NotStochastic(String),

    #[error("network is not connected (sigma = {0})")]
    Disconnected(f64),
}

pub type Result<T> = std::result::Result<T, NetworkError>;
