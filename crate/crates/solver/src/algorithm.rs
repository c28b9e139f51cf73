//! Consensus + conditional projected-gradient iteration and its relatives.
//!
//! One synchronous round, for every player `i` reading only iteration-`k` data:
//!
//! ```text
//! v̂_i  = Σ_j w_ij v_j
//! x̂_i  = Π_{X_i}[x_i − α F_i(x_i, v̂_i)]
//! x_i⁺ = x_i + β (x̂_i − x_i)
//! v_i⁺ = v̂_i + x_i⁺ − x_i
//! ```
//!
//! `Σ_i v_i = Σ_i x_i` is preserved by every round because `W` is column
//! stochastic and the trackers start at the actions.

use nag_core::{GameInstance, MonotonicityConstants};
use nag_network::WeightMatrix;

use crate::config::{SolverConfig, StepSchedule};
use crate::error::{Result, SolverError};
use crate::state::{check_len, squared_distance, SolverState};
use crate::trace::{ConvergenceTrace, RunStatus, TraceRecord};

/// Runs abort once the gap exceeds this multiple of its running minimum.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// One synchronous round of the distributed iteration.
pub fn step_algorithm1(
    state: &SolverState,
    game: &GameInstance,
    weights: &WeightMatrix,
    alpha: f64,
    beta: f64,
) -> Result<SolverState> {
    let n = game.num_players();
    let p = game.dim();
    check_len(weights.size(), n)?;
    check_len(state.x.len(), n * p)?;
    check_len(state.v.len(), n * p)?;

    let v_hat = weights.mix(&state.v, p);
    let mut x_next = vec![0.0; n * p];
    let mut v_next = vec![0.0; n * p];
    let mut grad = vec![0.0; p];
    let mut trial = vec![0.0; p];
    let mut x_hat = vec![0.0; p];

    for i in 0..n {
        let range = i * p..(i + 1) * p;
        let x_i = &state.x[range.clone()];
        let v_hat_i = &v_hat[range.clone()];
        game.coordinate_gradient_into(i, x_i, v_hat_i, &mut grad)?;
        for j in 0..p {
            trial[j] = x_i[j] - alpha * grad[j];
        }
        game.set(i).project_into(&trial, &mut x_hat)?;
        for j in 0..p {
            let x_new = x_i[j] + beta * (x_hat[j] - x_i[j]);
            x_next[i * p + j] = x_new;
            v_next[i * p + j] = v_hat_i[j] + x_new - x_i[j];
        }
    }

    Ok(SolverState {
        x: x_next,
        v: v_next,
        iteration: state.iteration + 1,
    })
}

/// Runs the distributed iteration from `x0` (projected if infeasible).
///
/// With `x_star` the gap `‖x^k − x*‖` drives stopping and divergence detection;
/// without it the natural residual at the current step size is used instead.
pub fn run_algorithm1(
    game: &GameInstance,
    weights: &WeightMatrix,
    config: &SolverConfig,
    x0: &[f64],
    x_star: Option<&[f64]>,
) -> Result<ConvergenceTrace> {
    run_algorithm1_with(game, weights, config, x0, x_star, |_| {})
}

/// Like [`run_algorithm1`], calling `observe` on every iterate including the first.
pub fn run_algorithm1_with(
    game: &GameInstance,
    weights: &WeightMatrix,
    config: &SolverConfig,
    x0: &[f64],
    x_star: Option<&[f64]>,
    mut observe: impl FnMut(&SolverState),
) -> Result<ConvergenceTrace> {
    config.validate()?;
    check_len(weights.size(), game.num_players())?;
    if let Some(reference) = x_star {
        check_len(reference.len(), game.stacked_len())?;
    }

    let p = game.dim();
    let mut state = SolverState::initial(game, x0)?;
    let mut records = Vec::with_capacity(config.max_iters + 1);
    let mut step_sizes = Vec::with_capacity(config.max_iters);
    let mut best = f64::INFINITY;

    let mut status = RunStatus::MaxIterations;
    loop {
        observe(&state);
        let k = state.iteration;
        let alpha = config.step_size(k);
        let record = record_for(game, &state, x_star, alpha, p)?;
        let progress = record.gap.or(record.residual).unwrap_or(f64::NAN);
        records.push(record);

        if !progress.is_finite() || !record.consensus_error.is_finite() {
            status = RunStatus::Diverged;
            break;
        }
        best = best.min(progress);
        if progress > DIVERGENCE_FACTOR * best {
            status = RunStatus::Diverged;
            break;
        }
        if progress <= config.gap_tolerance {
            status = RunStatus::Converged;
            break;
        }
        if k >= config.max_iters {
            break;
        }

        state = step_algorithm1(&state, game, weights, alpha, config.beta)?;
        step_sizes.push(alpha);
    }

    Ok(ConvergenceTrace {
        records,
        step_sizes,
        status,
        final_state: state,
    })
}

/// The diminishing-step variant: `β = 1` and `α_k = alpha0 / (k + 1)`.
pub fn run_diminishing_baseline(
    game: &GameInstance,
    weights: &WeightMatrix,
    alpha0: f64,
    max_iters: usize,
    x0: &[f64],
    x_star: Option<&[f64]>,
) -> Result<ConvergenceTrace> {
    let config = SolverConfig {
        alpha: alpha0,
        beta: 1.0,
        max_iters,
        gap_tolerance: 0.0,
        schedule: StepSchedule::Diminishing {
            alpha0,
            exponent: 1.0,
        },
    };
    run_algorithm1(game, weights, &config, x0, x_star)
}

/// Centralized projected fixed-point step with the exact aggregate:
/// `x_i⁺ = Π_{X_i}[x_i − α F_i(x_i, x̄)]`.
pub fn step_centralized(x: &[f64], game: &GameInstance, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(SolverError::InvalidConfig(format!(
            "alpha must be nonnegative, got {alpha}"
        )));
    }
    let phi = game.pseudo_gradient(x)?;
    let trial: Vec<f64> = x.iter().zip(&phi).map(|(xi, g)| xi - alpha * g).collect();
    Ok(game.project(&trial)?)
}

/// The largest step the centralized iteration is guaranteed to contract at,
/// scaled by `safety`: `safety · μ / (2 L̄²)`.
pub fn centralized_step_size(constants: &MonotonicityConstants, safety: f64) -> f64 {
    let lbar = constants.pseudo_gradient_lipschitz();
    safety * constants.mu / (2.0 * lbar * lbar)
}

fn record_for(
    game: &GameInstance,
    state: &SolverState,
    x_star: Option<&[f64]>,
    alpha: f64,
    p: usize,
) -> Result<TraceRecord> {
    let zeta2 = state.consensus_deviation_sq(p);
    let (gap, zeta1, residual) = match x_star {
        Some(reference) => {
            let z1 = squared_distance(&state.x, reference);
            (Some(z1.sqrt()), Some(z1), None)
        }
        None => (None, None, Some(game.natural_residual(&state.x, alpha)?)),
    };
    Ok(TraceRecord {
        iteration: state.iteration,
        gap,
        consensus_error: zeta2.sqrt(),
        zeta1,
        zeta2,
        residual,
    })
}
