//! Per-player action sets: a box, optionally cut by a single hyperplane.
//!
//! Bounds may be infinite. Projection onto the box alone is an elementwise
//! clamp; projection onto box ∩ {a·x = b} solves the scalar dual problem
//! `a·clamp(y − λa) = b` with a safeguarded Newton/bisection search over λ.

use crate::error::{CoreError, Result};

/// Absolute tolerance on `|a·x − b|`, scaled by `1 + |b|`.
pub const PROJECTION_TOLERANCE: f64 = 1e-12;
/// Iteration cap for the dual root search.
pub const PROJECTION_MAX_ITERS: usize = 200;

/// The affine constraint `normal · x = offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
}

impl Hyperplane {
    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// A nonempty convex set `{lower ≤ x ≤ upper} ∩ {a·x = b}` (hyperplane optional).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
    hyperplane: Option<Hyperplane>,
}

impl FeasibleSet {
    /// Box-only set. Use `f64::INFINITY` / `f64::NEG_INFINITY` for missing bounds.
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        validate_box(&lower, &upper)?;
        Ok(Self {
            lower,
            upper,
            hyperplane: None,
        })
    }

    /// Box intersected with `{x : normal·x = offset}`. Fails if the intersection is empty.
    pub fn with_hyperplane(
        lower: Vec<f64>,
        upper: Vec<f64>,
        normal: Vec<f64>,
        offset: f64,
    ) -> Result<Self> {
        validate_box(&lower, &upper)?;
        if normal.len() != lower.len() {
            return Err(CoreError::DimensionMismatch {
                expected: lower.len(),
                actual: normal.len(),
            });
        }
        if normal.iter().any(|a| !a.is_finite()) || !offset.is_finite() {
            return Err(CoreError::InvalidSet(
                "hyperplane coefficients must be finite".into(),
            ));
        }
        if normal.iter().all(|&a| a == 0.0) {
            return Err(CoreError::InvalidSet("hyperplane normal is zero".into()));
        }

        // Range of a·x over the box.
        let mut lo = 0.0;
        let mut hi = 0.0;
        for ((&a, &l), &u) in normal.iter().zip(&lower).zip(&upper) {
            if a > 0.0 {
                lo += a * l;
                hi += a * u;
            } else if a < 0.0 {
                lo += a * u;
                hi += a * l;
            }
        }
        if !(lo <= offset && offset <= hi) {
            return Err(CoreError::EmptySet);
        }

        Ok(Self {
            lower,
            upper,
            hyperplane: Some(Hyperplane { normal, offset }),
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn hyperplane(&self) -> Option<&Hyperplane> {
        self.hyperplane.as_ref()
    }

    /// True when the set is bounded, i.e. its recession cone is `{0}`.
    ///
    /// Coordinates that are unbounded in the box can still be pinned by the
    /// hyperplane: a nonzero recession direction needs one coordinate that can
    /// push `a·d` up and a different one that can pull it down.
    pub fn is_bounded(&self) -> bool {
        let Some(h) = &self.hyperplane else {
            return self.lower.iter().chain(&self.upper).all(|b| b.is_finite());
        };

        let mut can_raise = Vec::new();
        let mut can_lower = Vec::new();
        for (j, ((&l, &u), &a)) in self
            .lower
            .iter()
            .zip(&self.upper)
            .zip(&h.normal)
            .enumerate()
        {
            let up = u.is_infinite();
            let down = l.is_infinite();
            if !up && !down {
                continue;
            }
            if a == 0.0 {
                return false;
            }
            // sign of a_j·d_j achievable along admissible directions d_j
            if (up && a > 0.0) || (down && a < 0.0) {
                can_raise.push(j);
            }
            if (up && a < 0.0) || (down && a > 0.0) {
                can_lower.push(j);
            }
        }
        !can_raise.iter().any(|j| can_lower.iter().any(|k| k != j))
    }

    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let in_box = x
            .iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .all(|((&v, &l), &u)| v.is_finite() && v >= l - tol && v <= u + tol);
        in_box
            && self
                .hyperplane
                .as_ref()
                .is_none_or(|h| h.residual(x).abs() <= tol * (1.0 + h.offset.abs()))
    }

    /// Euclidean projection of `y` onto the set.
    pub fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.project_into(y, &mut out)?;
        Ok(out)
    }

    /// Same as [`project`](Self::project), writing into `out`.
    pub fn project_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        let p = self.dim();
        for len in [y.len(), out.len()] {
            if len != p {
                return Err(CoreError::DimensionMismatch {
                    expected: p,
                    actual: len,
                });
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("projection input"));
        }
        match &self.hyperplane {
            None => {
                for j in 0..p {
                    out[j] = clamp(y[j], self.lower[j], self.upper[j]);
                }
                Ok(())
            }
            Some(h) => self.project_onto_slice(h, y, out),
        }
    }

    fn project_onto_slice(&self, h: &Hyperplane, y: &[f64], out: &mut [f64]) -> Result<()> {
        let b = h.offset;
        let tol = PROJECTION_TOLERANCE * (1.0 + b.abs());

        // g(λ) = a·clamp(y − λa) is continuous, piecewise linear and nonincreasing.
        // Returns (g(λ) − b, −g'(λ), Σ|a_j x_j|).
        let eval = |lambda: f64, out: &mut [f64]| {
            let mut dot = 0.0;
            let mut slope = 0.0;
            let mut scale = 0.0;
            for j in 0..y.len() {
                let a = h.normal[j];
                let t = y[j] - lambda * a;
                let x = clamp(t, self.lower[j], self.upper[j]);
                out[j] = x;
                dot += a * x;
                scale += (a * x).abs();
                if a != 0.0 && self.lower[j] < t && t < self.upper[j] {
                    slope += a * a;
                }
            }
            (dot - b, slope, scale)
        };
        // Below this the residual is indistinguishable from rounding in the dot product.
        let rounding_floor = |scale: f64| 16.0 * f64::EPSILON * (scale + b.abs());

        // lo: largest λ known with g > b; hi: smallest λ known with g < b.
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let mut step: f64 = 1.0;
        let mut lambda = 0.0;
        let mut last_width = f64::INFINITY;
        let mut residual = f64::NAN;

        for _ in 0..PROJECTION_MAX_ITERS {
            let (r, slope, scale) = eval(lambda, out);
            residual = r;
            if r.abs() <= tol || r.abs() <= rounding_floor(scale) {
                return Ok(());
            }
            if r > 0.0 {
                lo = lambda;
            } else {
                hi = lambda;
            }

            let width = hi - lo;
            if width.is_finite() && width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                // bracket collapsed onto the root; g is continuous so r is rounding noise
                return Ok(());
            }

            let newton = if slope > 0.0 {
                lambda + r / slope
            } else {
                f64::NAN
            };
            let stalled = width.is_finite() && width > 0.5 * last_width;
            last_width = width;

            lambda = if newton > lo && newton < hi && !stalled {
                newton
            } else if lo.is_finite() && hi.is_finite() {
                0.5 * (lo + hi)
            } else if lo.is_finite() {
                step = step.max(lo.abs());
                let next = lo + step;
                step *= 2.0;
                next
            } else {
                step = step.max(hi.abs());
                let next = hi - step;
                step *= 2.0;
                next
            };
        }

        Err(CoreError::ProjectionNotConverged {
            iterations: PROJECTION_MAX_ITERS,
            residual,
        })
    }
}

#[inline]
pub(crate) fn clamp(v: f64, lower: f64, upper: f64) -> f64 {
    v.max(lower).min(upper)
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn validate_box(lower: &[f64], upper: &[f64]) -> Result<()> {
    if lower.len() != upper.len() {
        return Err(CoreError::DimensionMismatch {
            expected: lower.len(),
            actual: upper.len(),
        });
    }
    if lower.is_empty() {
        return Err(CoreError::InvalidSet("zero-dimensional set".into()));
    }
    for (j, (&l, &u)) in lower.iter().zip(upper).enumerate() {
        if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
            return Err(CoreError::InvalidSet(format!(
                "bad bounds at coordinate {j}"
            )));
        }
        if l > u {
            return Err(CoreError::InvalidSet(format!(
                "lower bound {l} exceeds upper bound {u} at coordinate {j}"
            )));
        }
    }
    Ok(())
}
