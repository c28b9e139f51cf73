//! Nash–Cournot game over `L` locations.
//!
//! Firm `i` produces `g_il ∈ [0, cap_il]` and sells `s_il ≥ 0` at each location,
//! with total production equal to total sales. Its cost is
//!
//! ```text
//! f_i = Σ_l [ a_il g_il + b_il g_il² − s_il (d_l − s_l) ],   s_l = n·z_{s,l}
//! ```
//!
//! where `z` is the average action. Actions are laid out as
//! `[g_i1..g_iL, s_i1..s_iL]`, so `p = 2L`.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::feasible::FeasibleSet;
use crate::game::{AffineMap, GameInstance, Player, PlayerCost};
use crate::sampling::UniformStream;

/// Linear production cost coefficients are drawn from `U(2, 12)`.
pub const LINEAR_COST_RANGE: (f64, f64) = (2.0, 12.0);
/// Quadratic production cost coefficients are drawn from `U(2, 3)`.
pub const QUADRATIC_COST_RANGE: (f64, f64) = (2.0, 3.0);
/// Price intercepts are drawn from `U(90, 100)`.
pub const PRICE_INTERCEPT_RANGE: (f64, f64) = (90.0, 100.0);

/// Sampling intervals for the random Cournot parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CournotRanges {
    pub linear_cost: (f64, f64),
    pub quadratic_cost: (f64, f64),
    pub price_intercept: (f64, f64),
}

impl Default for CournotRanges {
    fn default() -> Self {
        Self {
            linear_cost: LINEAR_COST_RANGE,
            quadratic_cost: QUADRATIC_COST_RANGE,
            price_intercept: PRICE_INTERCEPT_RANGE,
        }
    }
}

impl CournotRanges {
    pub fn validate(&self) -> Result<()> {
        let ordered = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !(ordered(self.linear_cost)
            && ordered(self.quadratic_cost)
            && ordered(self.price_intercept))
        {
            return Err(CoreError::InvalidParameter(
                "parameter ranges must be finite with lo ≤ hi".into(),
            ));
        }
        if self.quadratic_cost.0 <= 0.0 || self.price_intercept.0 <= 0.0 {
            return Err(CoreError::InvalidParameter(
                "quadratic costs and price intercepts must be drawn from positive ranges".into(),
            ));
        }
        Ok(())
    }
}

/// Parameters of a Cournot instance. Matrices are `n × L`.
#[derive(Debug, Clone, PartialEq)]
pub struct CournotParams {
    pub linear_cost: DMatrix<f64>,
    pub quadratic_cost: DMatrix<f64>,
    pub price_intercept: DVector<f64>,
    pub capacity: DMatrix<f64>,
    pub seed: u64,
}

impl CournotParams {
    /// Draws `a` (row-major), then `b` (row-major), then `d` from one
    /// [`UniformStream`] seeded with `seed`; every capacity is `cap`.
    pub fn random(firms: usize, locations: usize, seed: u64, cap: f64) -> Result<Self> {
        Self::random_in(firms, locations, seed, cap, &CournotRanges::default())
    }

    /// Like [`CournotParams::random`] with custom sampling intervals.
    pub fn random_in(
        firms: usize,
        locations: usize,
        seed: u64,
        cap: f64,
        ranges: &CournotRanges,
    ) -> Result<Self> {
        check_sizes(firms, locations)?;
        ranges.validate()?;
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(CoreError::InvalidParameter(format!(
                "capacity must be positive, got {cap}"
            )));
        }
        let mut rng = UniformStream::new(seed);
        let mut draw_matrix = |(lo, hi): (f64, f64)| {
            let mut m = DMatrix::zeros(firms, locations);
            for i in 0..firms {
                for l in 0..locations {
                    m[(i, l)] = rng.uniform(lo, hi);
                }
            }
            m
        };
        let linear_cost = draw_matrix(ranges.linear_cost);
        let quadratic_cost = draw_matrix(ranges.quadratic_cost);
        let (lo, hi) = ranges.price_intercept;
        let price_intercept = DVector::from_fn(locations, |_, _| rng.uniform(lo, hi));
        let params = Self {
            linear_cost,
            quadratic_cost,
            price_intercept,
            capacity: DMatrix::from_element(firms, locations, cap),
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn firms(&self) -> usize {
        self.linear_cost.nrows()
    }

    pub fn locations(&self) -> usize {
        self.linear_cost.ncols()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, l) = (self.firms(), self.locations());
        if n == 0 || l == 0 {
            return Err(CoreError::InvalidParameter("empty Cournot instance".into()));
        }
        for m in [&self.quadratic_cost, &self.capacity] {
            if m.shape() != (n, l) {
                return Err(CoreError::InvalidParameter(
                    "parameter matrix shape mismatch".into(),
                ));
            }
        }
        if self.price_intercept.len() != l {
            return Err(CoreError::DimensionMismatch {
                expected: l,
                actual: self.price_intercept.len(),
            });
        }
        if self.linear_cost.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("linear cost"));
        }
        if self
            .quadratic_cost
            .iter()
            .any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(CoreError::InvalidParameter(
                "quadratic costs must be positive".into(),
            ));
        }
        if self
            .price_intercept
            .iter()
            .any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(CoreError::InvalidParameter(
                "price intercepts must be positive".into(),
            ));
        }
        if self.capacity.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(CoreError::InvalidParameter(
                "capacities must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Cost model of firm `i`.
    pub fn firm(&self, i: usize) -> CournotFirm {
        CournotFirm {
            firms: self.firms(),
            linear_cost: self.linear_cost.row(i).iter().copied().collect(),
            quadratic_cost: self.quadratic_cost.row(i).iter().copied().collect(),
            price_intercept: self.price_intercept.iter().copied().collect(),
        }
    }

    /// `{0 ≤ g ≤ cap_i, s ≥ 0, Σg = Σs}` for firm `i`.
    pub fn action_set(&self, i: usize) -> Result<FeasibleSet> {
        let l = self.locations();
        let mut upper: Vec<f64> = self.capacity.row(i).iter().copied().collect();
        upper.extend(std::iter::repeat_n(f64::INFINITY, l));
        let mut normal = vec![1.0; l];
        normal.extend(std::iter::repeat_n(-1.0, l));
        FeasibleSet::with_hyperplane(vec![0.0; 2 * l], upper, normal, 0.0)
    }

    pub fn game(&self) -> Result<GameInstance> {
        self.validate()?;
        let players = (0..self.firms())
            .map(|i| Ok(Player::new(self.firm(i), self.action_set(i)?)))
            .collect::<Result<Vec<_>>>()?;
        GameInstance::new(players)
    }
}

/// Builds the random Cournot game with `n` firms and `locations` markets.
pub fn build_cournot(n: usize, locations: usize, seed: u64, cap: f64) -> Result<GameInstance> {
    CournotParams::random(n, locations, seed, cap)?.game()
}

fn check_sizes(firms: usize, locations: usize) -> Result<()> {
    if firms < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "need at least 2 firms, got {firms}"
        )));
    }
    if locations < 1 {
        return Err(CoreError::InvalidParameter(
            "need at least 1 location".into(),
        ));
    }
    Ok(())
}

/// Cost of one firm; total sales enter through the average as `n·z_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CournotFirm {
    firms: usize,
    linear_cost: Vec<f64>,
    quadratic_cost: Vec<f64>,
    price_intercept: Vec<f64>,
}

impl CournotFirm {
    fn locations(&self) -> usize {
        self.linear_cost.len()
    }
}

impl PlayerCost for CournotFirm {
    fn dim(&self) -> usize {
        2 * self.locations()
    }

    fn cost(&self, own: &[f64], aggregate: &[f64]) -> f64 {
        let l = self.locations();
        let n = self.firms as f64;
        (0..l)
            .map(|k| {
                let g = own[k];
                let s = own[l + k];
                let price = self.price_intercept[k] - n * aggregate[l + k];
                self.linear_cost[k] * g + self.quadratic_cost[k] * g * g - s * price
            })
            .sum()
    }

    fn coordinate_gradient(&self, own: &[f64], aggregate: &[f64], out: &mut [f64]) {
        let l = self.locations();
        let n = self.firms as f64;
        for k in 0..l {
            out[k] = self.linear_cost[k] + 2.0 * self.quadratic_cost[k] * own[k];
            out[l + k] = -self.price_intercept[k] + n * aggregate[l + k] + own[l + k];
        }
    }

    fn affine_map(&self) -> Option<AffineMap> {
        let l = self.locations();
        let p = 2 * l;
        let mut own = DMatrix::zeros(p, p);
        let mut aggregate = DMatrix::zeros(p, p);
        let mut offset = DVector::zeros(p);
        for k in 0..l {
            own[(k, k)] = 2.0 * self.quadratic_cost[k];
            own[(l + k, l + k)] = 1.0;
            aggregate[(l + k, l + k)] = self.firms as f64;
            offset[k] = self.linear_cost[k];
            offset[l + k] = -self.price_intercept[k];
        }
        Some(AffineMap {
            own,
            aggregate,
            offset,
        })
    }
}
