//! Projection oracle that does not touch the dual search used by `FeasibleSet`.
//!
//! Up to three dimensions every KKT active set is enumerated: each coordinate
//! sits at its lower bound, its upper bound, or is free, and the hyperplane
//! multiplier is solved in closed form. The nearest feasible candidate is the
//! projection. Larger sets fall back to Dykstra's alternating projections
//! between the box and the hyperplane.

use nag_core::{CoreError, FeasibleSet};

use crate::Result;

/// Stopping tolerance for the Dykstra path.
pub const DYKSTRA_TOLERANCE: f64 = 1e-10;
const DYKSTRA_MAX_ITERS: usize = 1_000_000;
const ENUMERATION_MAX_DIM: usize = 3;

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Lower,
    Upper,
    Free,
}

pub fn brute_force_project(set: &FeasibleSet, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != set.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: set.dim(),
            actual: y.len(),
        }
        .into());
    }
    if set.hyperplane().is_none() {
        return Ok(y
            .iter()
            .zip(set.lower().iter().zip(set.upper()))
            .map(|(&v, (&l, &u))| v.max(l).min(u))
            .collect());
    }
    if set.dim() <= ENUMERATION_MAX_DIM {
        enumerate(set, y)
    } else {
        dykstra(set, y)
    }
}

fn enumerate(set: &FeasibleSet, y: &[f64]) -> Result<Vec<f64>> {
    let p = set.dim();
    let (lower, upper) = (set.lower(), set.upper());
    let h = set
        .hyperplane()
        .expect("enumeration only runs with a hyperplane");
    let (a, b) = (h.normal(), h.offset());

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut slots = vec![Slot::Lower; p];
    for code in 0..3usize.pow(p as u32) {
        let mut c = code;
        for s in slots.iter_mut() {
            *s = [Slot::Lower, Slot::Upper, Slot::Free][c % 3];
            c /= 3;
        }

        let mut x = vec![0.0; p];
        let mut fixed_dot = 0.0;
        let mut free_dot = 0.0;
        let mut free_norm = 0.0;
        let mut valid = true;
        for j in 0..p {
            match slots[j] {
                Slot::Lower | Slot::Upper => {
                    let bound = if slots[j] == Slot::Lower {
                        lower[j]
                    } else {
                        upper[j]
                    };
                    if !bound.is_finite() {
                        valid = false;
                        break;
                    }
                    x[j] = bound;
                    fixed_dot += a[j] * bound;
                }
                Slot::Free => {
                    free_dot += a[j] * y[j];
                    free_norm += a[j] * a[j];
                }
            }
        }
        if !valid {
            continue;
        }

        // stationarity on free coordinates: x_j = y_j − λ a_j
        let lambda = if free_norm > 0.0 {
            (free_dot + fixed_dot - b) / free_norm
        } else {
            0.0
        };
        for j in 0..p {
            if slots[j] == Slot::Free {
                x[j] = y[j] - lambda * a[j];
            }
        }

        let scale = 1.0
            + b.abs()
            + a.iter()
                .zip(&x)
                .map(|(ai, xi)| (ai * xi).abs())
                .sum::<f64>();
        let plane_ok = (dot(a, &x) - b).abs() <= 1e-10 * scale;
        let box_ok = x.iter().zip(lower.iter().zip(upper)).all(|(&v, (&l, &u))| {
            v >= l - 1e-12 * (1.0 + l.abs()) && v <= u + 1e-12 * (1.0 + u.abs())
        });
        if !(plane_ok && box_ok) {
            continue;
        }
        let d: f64 = x.iter().zip(y).map(|(u, v)| (u - v) * (u - v)).sum();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    best.map(|(_, x)| x)
        .ok_or_else(|| CoreError::EmptySet.into())
}

fn dykstra(set: &FeasibleSet, y: &[f64]) -> Result<Vec<f64>> {
    let p = set.dim();
    let (lower, upper) = (set.lower(), set.upper());
    let h = set
        .hyperplane()
        .expect("dykstra only runs with a hyperplane");
    let (a, b) = (h.normal(), h.offset());
    let a_sq = dot(a, a);

    let mut x = y.to_vec();
    let mut box_pt = vec![0.0; p];
    let mut box_corr = vec![0.0; p];
    for _ in 0..DYKSTRA_MAX_ITERS {
        for j in 0..p {
            let t = x[j] + box_corr[j];
            box_pt[j] = t.max(lower[j]).min(upper[j]);
            box_corr[j] = t - box_pt[j];
        }
        // the hyperplane is affine, so its correction term vanishes
        let shift = (dot(a, &box_pt) - b) / a_sq;
        let mut change: f64 = 0.0;
        for j in 0..p {
            let next = box_pt[j] - shift * a[j];
            change = change.max((next - x[j]).abs());
            x[j] = next;
        }
        let gap: f64 = x
            .iter()
            .zip(&box_pt)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        let scale = 1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if gap <= DYKSTRA_TOLERANCE * scale && change <= DYKSTRA_TOLERANCE * scale {
            return Ok(x);
        }
    }
    Err(CoreError::ProjectionNotConverged {
        iterations: DYKSTRA_MAX_ITERS,
        residual: (dot(a, &x) - b).abs(),
    }
    .into())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
