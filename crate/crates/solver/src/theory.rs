//! Linear-rate certificate for the distributed iteration.
//!
//! With `L̄ = √2·L` the squared errors `ζ^k = (‖X^k − X*‖_F², ‖V^k − X̄^k‖_F²)`
//! satisfy `ζ^{k+1} ≤ M ζ^k` elementwise, where
//!
//! ```text
//! a = αβ(μ − 2αL̄²)             b = αβσ²L²(1/μ + 2α)
//! c = 4β²/(1 − σ²)             d = 2σ²/(1 + σ²)
//! M = [[1 − a, b], [c(2 − a), bc + d]]
//! ```
//!
//! so the iteration converges linearly whenever `ρ(M) < 1`.

use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub m: [[f64; 2]; 2],
    /// Spectral radius of `M`.
    pub rho: f64,
    /// `1 − (a − bc)/2`, an upper bound on `rho` inside the certified region.
    pub rate_bound: f64,
}

impl TheoryConstants {
    /// `a > 0` and `ρ(M) < 1`: the linear-rate certificate applies.
    pub fn is_certified(&self) -> bool {
        self.a > 0.0 && self.rho < 1.0
    }

    /// `M ζ`.
    pub fn apply(&self, zeta: [f64; 2]) -> [f64; 2] {
        let m = &self.m;
        [
            m[0][0] * zeta[0] + m[0][1] * zeta[1],
            m[1][0] * zeta[0] + m[1][1] * zeta[1],
        ]
    }
}

/// Computes `a, b, c, d`, `M`, `ρ(M)` and the rate bound.
///
/// `ρ(M)` uses the closed form `(−B + √Δ)/2` with `B = a − bc − d − 1` and
/// `Δ = B² − 4[(1 − a)d − bc]`. A negative `a` (step too large) is returned
/// as is; check [`TheoryConstants::is_certified`].
pub fn theory_constants(
    alpha: f64,
    beta: f64,
    mu: f64,
    lipschitz: f64,
    sigma: f64,
) -> Result<TheoryConstants> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(SolverError::TheoryDomain(format!(
            "sigma must lie in [0, 1), got {sigma}"
        )));
    }
    if !(mu > 0.0 && lipschitz > 0.0) {
        return Err(SolverError::TheoryDomain(format!(
            "need mu > 0 and L > 0, got mu = {mu}, L = {lipschitz}"
        )));
    }
    if !(alpha > 0.0 && beta > 0.0 && beta <= 1.0) {
        return Err(SolverError::TheoryDomain(format!(
            "need alpha > 0 and beta in (0, 1], got alpha = {alpha}, beta = {beta}"
        )));
    }

    let lbar_sq = 2.0 * lipschitz * lipschitz;
    let s2 = sigma * sigma;
    let a = alpha * beta * (mu - 2.0 * alpha * lbar_sq);
    let b = alpha * beta * s2 * lipschitz * lipschitz * (1.0 / mu + 2.0 * alpha);
    let c = 4.0 * beta * beta / (1.0 - s2);
    let d = 2.0 * s2 / (1.0 + s2);
    let m = [[1.0 - a, b], [c * (2.0 - a), b * c + d]];

    let big_b = a - b * c - d - 1.0;
    let delta = big_b * big_b - 4.0 * ((1.0 - a) * d - b * c);
    let rho = (-big_b + delta.max(0.0).sqrt()) / 2.0;
    let rate_bound = 1.0 - 0.5 * (a - b * c);

    Ok(TheoryConstants {
        a,
        b,
        c,
        d,
        m,
        rho,
        rate_bound,
    })
}

/// Step sizes for which linear convergence is certified:
///
/// ```text
/// 0 < β ≤ min{1, μ(1−σ²) / (2σL√(7+11σ²))}
/// 0 < α ≤ [μ²(1−σ²)² − 4(7+11σ²)(σLβ)²] / [2μL̄²(1−σ²)² + 8μ(7+11σ²)(σLβ)²]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizeRegion {
    pub mu: f64,
    pub lipschitz: f64,
    pub sigma: f64,
    pub beta_max: f64,
}

impl StepSizeRegion {
    pub fn new(mu: f64, lipschitz: f64, sigma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&sigma) {
            return Err(SolverError::TheoryDomain(format!(
                "sigma must lie in [0, 1), got {sigma}"
            )));
        }
        if !(mu > 0.0) || !(lipschitz * std::f64::consts::SQRT_2 >= mu * (1.0 - 1e-12)) {
            return Err(SolverError::TheoryDomain(format!(
                "need mu > 0 and L ≥ mu/√2, got mu = {mu}, L = {lipschitz}"
            )));
        }
        let s2 = sigma * sigma;
        // σ = 0 makes the second argument infinite; the bound is then 1.
        let beta_max = if sigma == 0.0 {
            1.0
        } else {
            let limit = mu * (1.0 - s2) / (2.0 * sigma * lipschitz * (7.0 + 11.0 * s2).sqrt());
            limit.min(1.0)
        };
        let region = Self {
            mu,
            lipschitz,
            sigma,
            beta_max,
        };

        // postcondition: an interior point is certified
        let beta = 0.5 * beta_max;
        let check = theory_constants(0.5 * region.alpha_max(beta), beta, mu, lipschitz, sigma)?;
        if !(check.rho < 1.0) {
            return Err(SolverError::TheoryDomain(format!(
                "interior step sizes not certified (rho = {})",
                check.rho
            )));
        }
        Ok(region)
    }

    /// Largest certified `α` for the given `β`; nonpositive outside the `β` range.
    pub fn alpha_max(&self, beta: f64) -> f64 {
        let (mu, l, sigma) = (self.mu, self.lipschitz, self.sigma);
        let s2 = sigma * sigma;
        let lbar_sq = 2.0 * l * l;
        let one_minus = (1.0 - s2) * (1.0 - s2);
        let k = 7.0 + 11.0 * s2;
        let coupling = (sigma * l * beta).powi(2);
        (mu * mu * one_minus - 4.0 * k * coupling)
            / (2.0 * mu * lbar_sq * one_minus + 8.0 * mu * k * coupling)
    }

    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        beta > 0.0 && beta <= self.beta_max && alpha > 0.0 && alpha <= self.alpha_max(beta)
    }

    /// Whether `β = 1` admits any certified `α`.
    pub fn unit_beta_certified(&self) -> bool {
        self.beta_max >= 1.0 && self.alpha_max(1.0) > 0.0
    }
}

/// The certified step-size region for `(μ, L, σ)`.
pub fn prop2_bounds(mu: f64, lipschitz: f64, sigma: f64) -> Result<StepSizeRegion> {
    StepSizeRegion::new(mu, lipschitz, sigma)
}
