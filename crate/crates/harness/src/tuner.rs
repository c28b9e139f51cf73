//! Two-stage logarithmic grid search for step sizes.
//!
//! The first stage evaluates `grid_size` log-spaced points on `[lo, hi]`; each
//! refinement round repeats the search between the neighbours of the current
//! best point. Grid points are evaluated in parallel, but the winner depends
//! only on the values (ties go to the smaller step), so results do not depend
//! on scheduling.

use rayon::prelude::*;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneResult {
    pub alpha: f64,
    /// Objective at `alpha`.
    pub value: f64,
    pub evaluations: usize,
}

/// `count` points from `lo` to `hi`, evenly spaced in `ln`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Minimizes `objective` over `[lo, hi]`. Non-finite values count as `+∞`.
pub fn tune_step<F>(
    lo: f64,
    hi: f64,
    grid_size: usize,
    rounds: usize,
    objective: F,
) -> Result<TuneResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(lo > 0.0 && lo < hi && hi.is_finite()) || grid_size < 3 {
        return Err(HarnessError::Config(format!(
            "step-size grid needs 0 < lo < hi and at least 3 points, got [{lo}, {hi}] with {grid_size}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut best: Option<TuneResult> = None;
    let mut evaluations = 0;
    for _ in 0..=rounds {
        let grid = log_grid(lo, hi, grid_size);
        let values: Vec<f64> = grid
            .par_iter()
            .map(|&a| {
                let v = objective(a);
                if v.is_finite() {
                    v
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        evaluations += grid.len();

        let mut idx = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < values[idx] {
                idx = i;
            }
        }
        if values[idx].is_finite() && best.is_none_or(|b| values[idx] < b.value) {
            best = Some(TuneResult {
                alpha: grid[idx],
                value: values[idx],
                evaluations,
            });
        }
        lo = grid[idx.saturating_sub(1)];
        hi = grid[(idx + 1).min(grid.len() - 1)];
        if !(lo < hi) {
            break;
        }
    }
    best.map(|b| TuneResult { evaluations, ..b })
        .ok_or_else(|| {
            HarnessError::Numerical("no step size on the grid produced a finite objective".into())
        })
}
