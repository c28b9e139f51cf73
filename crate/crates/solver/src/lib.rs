//! Distributed Nash equilibrium seeking for networked aggregative games.
//!
//! Each player mixes aggregate estimates with its neighbours, takes a projected
//! gradient step against the estimate and moves a fraction `β` of the way
//! towards the result. [`theory`] computes the step sizes for which this
//! converges linearly and the associated rate certificate.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod algorithm;
mod config;
mod error;
mod state;
pub mod theory;
mod trace;

pub use algorithm::{
    centralized_step_size, run_algorithm1, run_algorithm1_with, run_diminishing_baseline,
    step_algorithm1, step_centralized, DIVERGENCE_FACTOR,
};
pub use config::{SolverConfig, StepSchedule};
pub use error::{Result, SolverError};
pub use state::SolverState;
pub use theory::{prop2_bounds, theory_constants, StepSizeRegion, TheoryConstants};
pub use trace::{ConvergenceTrace, RunStatus, TraceRecord};
