use crate::error::{Result, SolverError};

/// How the gradient step `α` evolves over iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `α_k = α` for every `k`.
    Fixed,
    /// `α_k = alpha0 / (k + 1)^exponent`; only meaningful with `β = 1`.
    Diminishing { alpha0: f64, exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Gradient step `α > 0` (ignored by the diminishing schedule).
    pub alpha: f64,
    /// Relaxation step `β ∈ (0, 1]`.
    pub beta: f64,
    pub max_iters: usize,
    /// Stop once the gap (or natural residual, without a reference) reaches this.
    pub gap_tolerance: f64,
    pub schedule: StepSchedule,
}

impl SolverConfig {
    pub fn fixed(alpha: f64, beta: f64, max_iters: usize) -> Self {
        Self {
            alpha,
            beta,
            max_iters,
            gap_tolerance: 0.0,
            schedule: StepSchedule::Fixed,
        }
    }

    pub fn diminishing(alpha0: f64, max_iters: usize) -> Self {
        Self {
            alpha: alpha0,
            beta: 1.0,
            max_iters,
            gap_tolerance: 0.0,
            schedule: StepSchedule::Diminishing {
                alpha0,
                exponent: 1.0,
            },
        }
    }

    pub fn with_gap_tolerance(mut self, tol: f64) -> Self {
        self.gap_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SolverError::InvalidConfig(msg));
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad(format!("beta must lie in (0, 1], got {}", self.beta));
        }
        if !(self.gap_tolerance >= 0.0) {
            return bad(format!(
                "gap tolerance must be nonnegative, got {}",
                self.gap_tolerance
            ));
        }
        match self.schedule {
            StepSchedule::Fixed => {
                if !(self.alpha > 0.0 && self.alpha.is_finite()) {
                    return bad(format!("alpha must be positive, got {}", self.alpha));
                }
            }
            StepSchedule::Diminishing { alpha0, exponent } => {
                if !(alpha0 > 0.0 && alpha0.is_finite()) {
                    return bad(format!("alpha0 must be positive, got {alpha0}"));
                }
                if !(exponent > 0.5 && exponent <= 1.0) {
                    return bad(format!(
                        "schedule exponent must lie in (0.5, 1], got {exponent}"
                    ));
                }
                if self.beta != 1.0 {
                    return bad("diminishing schedule requires beta = 1".into());
                }
            }
        }
        Ok(())
    }

    /// Step size used to go from iterate `k` to `k + 1`.
    pub fn step_size(&self, k: usize) -> f64 {
        match self.schedule {
            StepSchedule::Fixed => self.alpha,
            StepSchedule::Diminishing { alpha0, exponent } => {
                if exponent == 1.0 {
                    alpha0 / (k + 1) as f64
                } else {
                    alpha0 / ((k + 1) as f64).powf(exponent)
                }
            }
        }
    }
}
