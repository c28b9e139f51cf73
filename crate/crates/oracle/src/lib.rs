//! Reference Nash equilibria and independent checks used by tests and experiments.
//!
//! Nothing here shares code paths with the distributed solver: the reference
//! solution comes from the centralized projected fixed-point iteration, and
//! [`brute_force_project`] enumerates KKT active sets instead of searching the
//! dual.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod project;
mod reference;

use nag_core::CoreError;
use thiserror::Error;

pub use project::{brute_force_project, DYKSTRA_TOLERANCE};
pub use reference::{
    solve_reference, vi_residual, ReferenceMethod, ReferenceSolution, REFERENCE_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("reference iteration hit the cap of {iterations} iterations (best residual {best_residual:e})")]
    NotConverged {
        iterations: usize,
        best_residual: f64,
    },

    #[error("game is not strongly monotone (mu = {0})")]
    NotStronglyMonotone(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;
