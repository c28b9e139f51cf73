//! Small player models used for testing and as building blocks.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::game::{AffineMap, PlayerCost};

/// `f(x, z) = w·‖x − c‖²`, independent of the aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableQuadratic {
    pub weight: f64,
    pub center: Vec<f64>,
}

impl SeparableQuadratic {
    pub fn new(weight: f64, center: Vec<f64>) -> Self {
        Self { weight, center }
    }
}

impl PlayerCost for SeparableQuadratic {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn cost(&self, own: &[f64], _aggregate: &[f64]) -> f64 {
        self.weight
            * own
                .iter()
                .zip(&self.center)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
    }

    fn coordinate_gradient(&self, own: &[f64], _aggregate: &[f64], out: &mut [f64]) {
        for ((o, x), c) in out.iter_mut().zip(own).zip(&self.center) {
            *o = 2.0 * self.weight * (x - c);
        }
    }

    fn affine_map(&self) -> Option<AffineMap> {
        let p = self.dim();
        Some(AffineMap {
            own: DMatrix::identity(p, p) * (2.0 * self.weight),
            aggregate: DMatrix::zeros(p, p),
            offset: DVector::from_iterator(p, self.center.iter().map(|c| -2.0 * self.weight * c)),
        })
    }
}

type CostFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync;

/// A player defined by closures. Never reports an affine structure.
#[derive(Clone)]
pub struct FnPlayer {
    dim: usize,
    cost: Arc<CostFn>,
    gradient: Arc<GradFn>,
}

impl FnPlayer {
    pub fn new(
        dim: usize,
        cost: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            cost: Arc::new(cost),
            gradient: Arc::new(gradient),
        }
    }
}

impl fmt::Debug for FnPlayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnPlayer")
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl PlayerCost for FnPlayer {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cost(&self, own: &[f64], aggregate: &[f64]) -> f64 {
        (self.cost)(own, aggregate)
    }

    fn coordinate_gradient(&self, own: &[f64], aggregate: &[f64], out: &mut [f64]) {
        (self.gradient)(own, aggregate, out)
    }
}
