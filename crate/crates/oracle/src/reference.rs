use nag_core::GameInstance;

use crate::{OracleError, Result};

/// Default natural-residual tolerance for reference solutions.
pub const REFERENCE_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1_000_000;
/// Sampling budget for games without affine structure.
const SAMPLING_BUDGET: usize = 2_000;
/// Fraction of `μ / (2L̄²)` used as the step size.
const STEP_SAFETY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMethod {
    CentralizedFixedPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub x_star: Vec<f64>,
    /// Natural residual at `x_star` for `step_size`.
    pub residual: f64,
    pub iterations_used: usize,
    pub step_size: f64,
    /// Upper bound on `‖x_star − x*‖` implied by the residual and the
    /// contraction factor of the iteration.
    pub error_bound: f64,
    pub method: ReferenceMethod,
}

/// Solves for the unique equilibrium with the centralized iteration
/// `x ← Π_X[x − αφ(x)]`, `α = 0.9·μ/(2L̄²)`, started from the projection of the
/// origin, until the natural residual is at most `tol`.
pub fn solve_reference(game: &GameInstance, tol: f64) -> Result<ReferenceSolution> {
    if !(tol > 0.0) {
        return Err(OracleError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let constants = game.estimate_constants(Some(SAMPLING_BUDGET))?;
    if !(constants.mu > 0.0) {
        return Err(OracleError::NotStronglyMonotone(constants.mu));
    }
    let lbar = constants.pseudo_gradient_lipschitz();
    let alpha = STEP_SAFETY * constants.mu / (2.0 * lbar * lbar);
    // ‖Π[x − αφ(x)] − Π[y − αφ(y)]‖ ≤ q‖x − y‖
    let q = (1.0 - 2.0 * alpha * constants.mu + alpha * alpha * lbar * lbar)
        .max(0.0)
        .sqrt();

    let mut x = game.project(&vec![0.0; game.stacked_len()])?;
    let mut best = f64::INFINITY;
    for k in 0..MAX_ITERATIONS {
        let phi = game.pseudo_gradient(&x)?;
        let trial: Vec<f64> = x.iter().zip(&phi).map(|(xi, g)| xi - alpha * g).collect();
        let next = game.project(&trial)?;
        let residual = distance(&x, &next);
        if !residual.is_finite() {
            return Err(OracleError::Core(nag_core::CoreError::NonFinite(
                "reference iteration",
            )));
        }
        best = best.min(residual);
        if residual <= tol {
            return Ok(ReferenceSolution {
                x_star: x,
                residual,
                iterations_used: k,
                step_size: alpha,
                error_bound: residual / (1.0 - q),
                method: ReferenceMethod::CentralizedFixedPoint,
            });
        }
        x = next;
    }
    Err(OracleError::NotConverged {
        iterations: MAX_ITERATIONS,
        best_residual: best,
    })
}

/// Natural residual `‖x − Π_X[x − αφ(x)]‖`; zero exactly at the equilibrium.
pub fn vi_residual(game: &GameInstance, x: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(OracleError::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    Ok(game.natural_residual(x, alpha)?)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
