use nag_core::GameInstance;

use crate::error::{Result, SolverError};

/// Actions `x_i` and aggregate trackers `v_i`, stacked player-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub iteration: usize,
}

impl SolverState {
    /// Projects each block of `x0` onto its action set and starts the
    /// trackers at the actions, `v_i⁰ = x_i⁰`.
    pub fn initial(game: &GameInstance, x0: &[f64]) -> Result<Self> {
        check_len(x0.len(), game.stacked_len())?;
        let x = game.project(x0)?;
        Ok(Self {
            v: x.clone(),
            x,
            iteration: 0,
        })
    }

    /// Distance to a reference profile, `‖x − x*‖`.
    pub fn gap(&self, x_star: &[f64]) -> f64 {
        squared_distance(&self.x, x_star).sqrt()
    }

    /// `‖V − 1x̄ᵀ‖_F²` for blocks of length `p`.
    pub fn consensus_deviation_sq(&self, p: usize) -> f64 {
        let n = self.x.len() / p;
        let mean = nag_core::average_blocks(&self.x, n, p);
        self.v
            .chunks_exact(p)
            .map(|block| squared_distance(block, &mean))
            .sum()
    }

    /// Per-coordinate `(Σ_i v_i, Σ_i x_i)`.
    pub fn column_sums(&self, p: usize) -> Vec<(f64, f64)> {
        let mut sums = vec![(0.0, 0.0); p];
        for (xb, vb) in self.x.chunks_exact(p).zip(self.v.chunks_exact(p)) {
            for (j, s) in sums.iter_mut().enumerate() {
                s.0 += vb[j];
                s.1 += xb[j];
            }
        }
        sums
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn check_len(actual: usize, expected: usize) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(SolverError::DimensionMismatch { expected, actual })
    }
}
