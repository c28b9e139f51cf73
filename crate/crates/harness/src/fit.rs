//! Empirical convergence rates of gap sequences.

use std::ops::RangeInclusive;

/// Gaps below `FLOOR_FACTOR × (reference error bound)` are excluded from fits:
/// they measure the reference solution rather than the iteration.
pub const FLOOR_FACTOR: f64 = 10.0;

/// Per-iteration factor `exp(slope)` of a least-squares line through
/// `(k, ln gap_k)` for `k` in `window`, skipping gaps at or below `floor`.
///
/// `None` when fewer than three usable points remain.
pub fn geometric_rate(gaps: &[f64], window: RangeInclusive<usize>, floor: f64) -> Option<f64> {
    let points: Vec<(f64, f64)> = window
        .filter_map(|k| gaps.get(k).map(|&g| (k as f64, g)))
        .filter(|&(_, g)| g.is_finite() && g > floor)
        .map(|(k, g)| (k, g.ln()))
        .collect();
    if points.len() < 3 {
        return None;
    }
    let count = points.len() as f64;
    let mean_k = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, y) in &points {
        sxy += (k - mean_k) * (y - mean_y);
        sxx += (k - mean_k) * (k - mean_k);
    }
    Some((sxy / sxx).exp())
}

/// Rate over the last `span` iterations of `gaps`.
pub fn tail_rate(gaps: &[f64], span: usize, floor: f64) -> Option<f64> {
    let last = gaps.len().checked_sub(1)?;
    geometric_rate(gaps, last.saturating_sub(span)..=last, floor)
}

/// Whether `gaps[k] ≤ gaps[k − 1]` for every `k > start`.
pub fn monotone_after(gaps: &[f64], start: usize) -> bool {
    gaps.windows(2).skip(start).all(|w| w[1] <= w[0])
}
