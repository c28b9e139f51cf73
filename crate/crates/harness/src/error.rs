use std::path::PathBuf;

use nag_core::CoreError;
use nag_network::NetworkError;
use nag_oracle::OracleError;
use nag_solver::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed trace file: {0}")]
    TraceFormat(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl HarnessError {
    /// 1 for configuration and validation problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for HarnessError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ProjectionNotConverged { .. } | CoreError::NonFinite(_) => {
                Self::Numerical(e.to_string())
            }
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<NetworkError> for HarnessError {
    fn from(e: NetworkError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<SolverError> for HarnessError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Core(inner) => inner.into(),
            SolverError::Network(inner) => inner.into(),
            SolverError::InvalidConfig(_) | SolverError::TheoryDomain(_) => {
                Self::Config(e.to_string())
            }
            SolverError::DimensionMismatch { .. } => Self::Numerical(e.to_string()),
        }
    }
}

impl From<OracleError> for HarnessError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Core(inner) => inner.into(),
            OracleError::InvalidParameter(_) => Self::Config(e.to_string()),
            OracleError::NotConverged { .. } | OracleError::NotStronglyMonotone(_) => {
                Self::Numerical(e.to_string())
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
