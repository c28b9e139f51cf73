//! Experiments on networked Nash–Cournot games: instance generation, step-size
//! tuning, solver comparisons and trace export.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
mod error;
pub mod experiment;
pub mod fit;
pub mod trace_file;
pub mod tuner;

pub use commands::{
    beta_sweep, bounds, compare, derived_constants, run, spectral, BoundsReport, CompareReport,
    RunReport, SpectralReport, SweepReport,
};
pub use config::{ExperimentConfig, Overrides};
pub use error::{HarnessError, Result};
pub use experiment::Experiment;
pub use trace_file::{TraceFile, TraceRow};

/// Caps the number of worker threads used for parallel experiment runs.
pub const WORKERS_ENV: &str = "NAG_WORKERS";
