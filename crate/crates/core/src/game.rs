//! Networked aggregative games.
//!
//! Player `i` chooses `x_i ∈ X_i ⊂ R^p` and pays `f_i(x_i, z)` where `z` is the
//! average action. Everything downstream works with the coordinate mapping
//! `F_i(x_i, z) = ∇_{x_i} f_i + (1/n) ∇_z f_i` and the pseudo-gradient
//! `φ(x) = [F_1(x_1, x̄); …; F_n(x_n, x̄)]`.
//!
//! Stacked profiles are flat vectors of length `n·p`, player-major.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::feasible::FeasibleSet;
use crate::sampling::UniformStream;

/// Cost and coordinate gradient of one player.
pub trait PlayerCost: Send + Sync + fmt::Debug {
    /// Action dimension `p`.
    fn dim(&self) -> usize;

    /// `f_i(x_i, z)`.
    fn cost(&self, own: &[f64], aggregate: &[f64]) -> f64;

    /// Writes `F_i(x_i, z)` into `out`.
    fn coordinate_gradient(&self, own: &[f64], aggregate: &[f64], out: &mut [f64]);

    /// `F_i(x_i, z) = own·x_i + aggregate·z + offset`, when `F_i` is affine.
    fn affine_map(&self) -> Option<AffineMap> {
        None
    }
}

/// Affine coordinate mapping of one player.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub own: DMatrix<f64>,
    pub aggregate: DMatrix<f64>,
    pub offset: DVector<f64>,
}

/// `φ(x) = A·x + q` for games whose coordinate mappings are all affine.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineStructure {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

/// A player's cost model paired with its private action set.
#[derive(Debug, Clone)]
pub struct Player {
    pub cost: Arc<dyn PlayerCost>,
    pub set: FeasibleSet,
}

impl Player {
    pub fn new(cost: impl PlayerCost + 'static, set: FeasibleSet) -> Self {
        Self {
            cost: Arc::new(cost),
            set,
        }
    }
}

/// Strong-monotonicity modulus `μ` and coordinate Lipschitz constant `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityConstants {
    pub mu: f64,
    pub lipschitz: f64,
    /// False when the values come from sampling rather than the affine structure.
    pub certified: bool,
}

impl MonotonicityConstants {
    /// Lipschitz constant of the full pseudo-gradient, `√2·L`.
    pub fn pseudo_gradient_lipschitz(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.lipschitz
    }
}

/// An aggregative game ready for the solvers: shared action dimension and
/// compact action sets.
#[derive(Debug, Clone)]
pub struct GameInstance {
    dim: usize,
    players: Vec<Player>,
    affine: Option<AffineStructure>,
}

impl GameInstance {
    pub fn new(players: Vec<Player>) -> Result<Self> {
        let Some(first) = players.first() else {
            return Err(CoreError::InvalidParameter(
                "game needs at least one player".into(),
            ));
        };
        let dim = first.cost.dim();
        for player in &players {
            for actual in [player.cost.dim(), player.set.dim()] {
                if actual != dim {
                    return Err(CoreError::DimensionMismatch {
                        expected: dim,
                        actual,
                    });
                }
            }
            if !player.set.is_bounded() {
                return Err(CoreError::UnboundedSet);
            }
        }
        let affine = assemble_affine(&players, dim);
        Ok(Self {
            dim,
            players,
            affine,
        })
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    /// Action dimension `p`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length `n·p` of a stacked profile.
    pub fn stacked_len(&self) -> usize {
        self.players.len() * self.dim
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn set(&self, i: usize) -> &FeasibleSet {
        &self.players[i].set
    }

    pub fn affine_structure(&self) -> Option<&AffineStructure> {
        self.affine.as_ref()
    }

    /// Block `i` of a stacked profile.
    pub fn block<'a>(&self, stacked: &'a [f64], i: usize) -> &'a [f64] {
        &stacked[i * self.dim..(i + 1) * self.dim]
    }

    /// `f_i(x_i, z)`.
    pub fn cost(&self, i: usize, own: &[f64], aggregate: &[f64]) -> Result<f64> {
        let player = self.player(i)?;
        self.check_len(own.len(), self.dim)?;
        self.check_len(aggregate.len(), self.dim)?;
        Ok(player.cost.cost(own, aggregate))
    }

    /// `F_i(x_i, z)`.
    pub fn coordinate_gradient(
        &self,
        i: usize,
        own: &[f64],
        aggregate: &[f64],
    ) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.coordinate_gradient_into(i, own, aggregate, &mut out)?;
        Ok(out)
    }

    pub fn coordinate_gradient_into(
        &self,
        i: usize,
        own: &[f64],
        aggregate: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        let player = self.player(i)?;
        for len in [own.len(), aggregate.len(), out.len()] {
            self.check_len(len, self.dim)?;
        }
        player.cost.coordinate_gradient(own, aggregate, out);
        Ok(())
    }

    /// Average action `x̄ = (1/n) Σ_i x_i`.
    pub fn aggregate(&self, stacked: &[f64]) -> Result<Vec<f64>> {
        self.check_len(stacked.len(), self.stacked_len())?;
        Ok(average_blocks(stacked, self.num_players(), self.dim))
    }

    /// Pseudo-gradient `φ(x) = F(x, x̄)`.
    pub fn pseudo_gradient(&self, stacked: &[f64]) -> Result<Vec<f64>> {
        let z = self.aggregate(stacked)?;
        let p = self.dim;
        let mut out = vec![0.0; stacked.len()];
        for (i, player) in self.players.iter().enumerate() {
            let range = i * p..(i + 1) * p;
            player
                .cost
                .coordinate_gradient(&stacked[range.clone()], &z, &mut out[range]);
        }
        Ok(out)
    }

    /// Blockwise projection onto `X = X_1 × … × X_n`.
    pub fn project(&self, stacked: &[f64]) -> Result<Vec<f64>> {
        self.check_len(stacked.len(), self.stacked_len())?;
        let p = self.dim;
        let mut out = vec![0.0; stacked.len()];
        for (i, player) in self.players.iter().enumerate() {
            let range = i * p..(i + 1) * p;
            player
                .set
                .project_into(&stacked[range.clone()], &mut out[range])?;
        }
        Ok(out)
    }

    /// Natural residual `‖x − Π_X[x − αφ(x)]‖`.
    pub fn natural_residual(&self, stacked: &[f64], alpha: f64) -> Result<f64> {
        let phi = self.pseudo_gradient(stacked)?;
        let trial: Vec<f64> = stacked
            .iter()
            .zip(&phi)
            .map(|(x, g)| x - alpha * g)
            .collect();
        let projected = self.project(&trial)?;
        Ok(stacked
            .iter()
            .zip(&projected)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    pub fn contains(&self, stacked: &[f64], tol: f64) -> bool {
        stacked.len() == self.stacked_len()
            && self
                .players
                .iter()
                .enumerate()
                .all(|(i, pl)| pl.set.contains(self.block(stacked, i), tol))
    }

    /// Exact `μ` and `L` from the affine structure.
    ///
    /// `μ` is the smallest eigenvalue of `(A + Aᵀ)/2`; `L` is the largest
    /// spectral norm of `[∂F_i/∂x_i, ∂F_i/∂z]` over players.
    pub fn monotonicity_constants(&self) -> Result<MonotonicityConstants> {
        let affine = self.affine.as_ref().ok_or(CoreError::NoAffineStructure)?;
        let sym = (&affine.matrix + affine.matrix.transpose()) * 0.5;
        let mu = sym.symmetric_eigenvalues().min();

        let mut lipschitz: f64 = 0.0;
        for player in &self.players {
            let map = player
                .cost
                .affine_map()
                .ok_or(CoreError::NoAffineStructure)?;
            let jac = concat_columns(&map.own, &map.aggregate);
            let norm = jac.singular_values().max();
            lipschitz = lipschitz.max(norm);
        }
        let constants = MonotonicityConstants {
            mu,
            lipschitz,
            certified: true,
        };
        debug_assert!(mu <= constants.pseudo_gradient_lipschitz() * (1.0 + 1e-12));
        Ok(constants)
    }

    /// Empirical `μ` and `L` from `samples` random pairs; not certified.
    ///
    /// `μ` is the smallest observed displacement ratio of `φ` over pairs in `X`;
    /// `L` is the largest observed ratio for `F_i` over pairs in `X_i × box(X̄)`.
    pub fn sampled_monotonicity_constants(
        &self,
        samples: usize,
        seed: u64,
    ) -> Result<MonotonicityConstants> {
        if samples == 0 {
            return Err(CoreError::InvalidParameter(
                "sampling budget must be positive".into(),
            ));
        }
        let mut rng = UniformStream::new(seed);
        let n = self.num_players();
        let p = self.dim;
        let mut mu = f64::INFINITY;
        let mut lipschitz: f64 = 0.0;
        let mut f1 = vec![0.0; p];
        let mut f2 = vec![0.0; p];
        for _ in 0..samples {
            let x = self.random_feasible(&mut rng)?;
            let y = self.random_feasible(&mut rng)?;
            let dx: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
            if dx == 0.0 {
                continue;
            }
            let gx = self.pseudo_gradient(&x)?;
            let gy = self.pseudo_gradient(&y)?;
            let inner: f64 = x
                .iter()
                .zip(&y)
                .zip(gx.iter().zip(&gy))
                .map(|((a, b), (c, d))| (a - b) * (c - d))
                .sum();
            mu = mu.min(inner / dx);

            let zx = average_blocks(&x, n, p);
            let zy = average_blocks(&y, n, p);
            for (i, player) in self.players.iter().enumerate() {
                let (xi, yi) = (self.block(&x, i), self.block(&y, i));
                player.cost.coordinate_gradient(xi, &zx, &mut f1);
                player.cost.coordinate_gradient(yi, &zy, &mut f2);
                let num = sq_dist(&f1, &f2).sqrt();
                let den = (sq_dist(xi, yi) + sq_dist(&zx, &zy)).sqrt();
                if den > 0.0 {
                    lipschitz = lipschitz.max(num / den);
                }
            }
        }
        Ok(MonotonicityConstants {
            mu,
            lipschitz,
            certified: false,
        })
    }

    /// Exact constants when affine, otherwise sampled with `budget` pairs.
    pub fn estimate_constants(&self, budget: Option<usize>) -> Result<MonotonicityConstants> {
        match (&self.affine, budget) {
            (Some(_), _) => self.monotonicity_constants(),
            (None, Some(samples)) => self.sampled_monotonicity_constants(samples, 0),
            (None, None) => Err(CoreError::NoAffineStructure),
        }
    }

    /// A feasible profile: each block is the projection of a random point drawn
    /// from a box around the finite bounds of `X_i`.
    pub fn random_feasible(&self, rng: &mut UniformStream) -> Result<Vec<f64>> {
        let p = self.dim;
        let mut out = vec![0.0; self.stacked_len()];
        let mut y = vec![0.0; p];
        for (i, player) in self.players.iter().enumerate() {
            let set = &player.set;
            let span = finite_span(set);
            for (j, yj) in y.iter_mut().enumerate() {
                let (lo, hi) = sampling_range(set.lower()[j], set.upper()[j], span);
                *yj = rng.uniform(lo, hi);
            }
            set.project_into(&y, &mut out[i * p..(i + 1) * p])?;
        }
        Ok(out)
    }

    fn player(&self, i: usize) -> Result<&Player> {
        self.players.get(i).ok_or(CoreError::PlayerOutOfRange {
            index: i,
            players: self.players.len(),
        })
    }

    fn check_len(&self, actual: usize, expected: usize) -> Result<()> {
        if actual == expected {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch { expected, actual })
        }
    }
}

/// Mean of `n` contiguous blocks of length `p`.
pub fn average_blocks(stacked: &[f64], n: usize, p: usize) -> Vec<f64> {
    let mut z = vec![0.0; p];
    for block in stacked.chunks_exact(p) {
        for (zj, xj) in z.iter_mut().zip(block) {
            *zj += xj;
        }
    }
    let inv = 1.0 / n as f64;
    z.iter_mut().for_each(|v| *v *= inv);
    z
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn concat_columns(left: &DMatrix<f64>, right: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.columns_mut(0, left.ncols()).copy_from(left);
    out.columns_mut(left.ncols(), right.ncols())
        .copy_from(right);
    out
}

fn assemble_affine(players: &[Player], p: usize) -> Option<AffineStructure> {
    let n = players.len();
    let maps: Vec<AffineMap> = players
        .iter()
        .map(|pl| pl.cost.affine_map())
        .collect::<Option<_>>()?;
    let mut matrix = DMatrix::zeros(n * p, n * p);
    let mut offset = DVector::zeros(n * p);
    let inv = 1.0 / n as f64;
    for (i, map) in maps.iter().enumerate() {
        offset.rows_mut(i * p, p).copy_from(&map.offset);
        for j in 0..n {
            let mut block = matrix.view_mut((i * p, j * p), (p, p));
            block += &map.aggregate * inv;
            if i == j {
                block += &map.own;
            }
        }
    }
    Some(AffineStructure { matrix, offset })
}

/// Largest finite extent among the set's bounds, used to size sampling boxes.
fn finite_span(set: &FeasibleSet) -> f64 {
    set.lower()
        .iter()
        .chain(set.upper())
        .filter(|b| b.is_finite())
        .fold(1.0_f64, |acc, b| acc.max(b.abs()))
}

fn sampling_range(lower: f64, upper: f64, span: f64) -> (f64, f64) {
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => (lower, upper),
        (true, false) => (lower, lower + span),
        (false, true) => (upper - span, upper),
        (false, false) => (-span, span),
    }
}
