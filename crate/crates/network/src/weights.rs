use nalgebra::DMatrix;

use crate::error::{NetworkError, Result};
use crate::topology::EdgeSet;

/// Row and column sums must equal one to this tolerance.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-12;

/// Doubly stochastic consensus matrix with its cached contraction factor `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    w: DMatrix<f64>,
    sigma: f64,
}

impl WeightMatrix {
    /// Max-degree rule: `w_ij = δ` on edges, `1 − δ·d(i)` on the diagonal,
    /// `δ = 0.5 / max_i d(i)`.
    pub fn from_edges(edges: &EdgeSet) -> Result<Self> {
        let n = edges.num_nodes();
        let degrees = edges.degrees();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        if max_degree == 0 {
            return Err(NetworkError::NoEdges);
        }
        let delta = 0.5 / max_degree as f64;
        let mut w = DMatrix::zeros(n, n);
        for (a, b) in edges.edges() {
            w[(a - 1, b - 1)] = delta;
            w[(b - 1, a - 1)] = delta;
        }
        for (i, &d) in degrees.iter().enumerate() {
            w[(i, i)] = 1.0 - delta * d as f64;
        }
        Self::from_matrix(w)
    }

    /// Wraps an arbitrary matrix after checking it is nonnegative and doubly stochastic.
    pub fn from_matrix(w: DMatrix<f64>) -> Result<Self> {
        let sigma = sigma_of(&w)?;
        Ok(Self { w, sigma })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn size(&self) -> usize {
        self.w.nrows()
    }

    /// Second largest singular value, `‖W − 11ᵀ/n‖₂`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    /// Fails unless `σ < 1`, i.e. the underlying graph is connected.
    pub fn ensure_contractive(&self) -> Result<()> {
        if self.sigma < 1.0 - 1e-12 {
            Ok(())
        } else {
            Err(NetworkError::Disconnected(self.sigma))
        }
    }

    /// One mixing round on stacked blocks of length `p`: `out_i = Σ_j w_ij v_j`.
    pub fn mix_into(&self, stacked: &[f64], p: usize, out: &mut [f64]) {
        let n = self.size();
        debug_assert_eq!(stacked.len(), n * p);
        debug_assert_eq!(out.len(), n * p);
        out.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for j in 0..n {
                let w = self.w[(i, j)];
                if w == 0.0 {
                    continue;
                }
                for (o, v) in row.iter_mut().zip(&stacked[j * p..(j + 1) * p]) {
                    *o += w * v;
                }
            }
        }
    }

    pub fn mix(&self, stacked: &[f64], p: usize) -> Vec<f64> {
        let mut out = vec![0.0; stacked.len()];
        self.mix_into(stacked, p, &mut out);
        out
    }
}

/// `σ = ‖W − 11ᵀ/n‖₂`, via a dense symmetric eigensolve of `DᵀD`.
pub fn sigma_of(w: &DMatrix<f64>) -> Result<f64> {
    check_doubly_stochastic(w)?;
    let n = w.nrows();
    let deviation = w.map(|v| v - 1.0 / n as f64);
    let gram = deviation.transpose() * &deviation;
    let largest = gram.symmetric_eigenvalues().max();
    Ok(largest.max(0.0).sqrt())
}

fn check_doubly_stochastic(w: &DMatrix<f64>) -> Result<()> {
    if !w.is_square() || w.nrows() == 0 {
        return Err(NetworkError::NotStochastic(format!(
            "expected a nonempty square matrix, got {}x{}",
            w.nrows(),
            w.ncols()
        )));
    }
    if let Some(v) = w.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(NetworkError::NotStochastic(format!("invalid entry {v}")));
    }
    for i in 0..w.nrows() {
        let row: f64 = w.row(i).sum();
        let col: f64 = w.column(i).sum();
        if (row - 1.0).abs() > STOCHASTIC_TOLERANCE || (col - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(NetworkError::NotStochastic(format!(
                "row/column {i} sums to {row}/{col}"
            )));
        }
    }
    Ok(())
}
