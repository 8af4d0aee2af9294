use super::ProjectiveMap;
use crate::error::{Error, Result};

/// Step of the five-point stencils.
pub const SCHWARZIAN_STEP: f64 = 1e-3;

/// Minimum distance from a sample point to the pole of the affine chart.
const POLE_MARGIN: f64 = 5.0;

/// Schwarzian derivative from increments `s ↦ f(t + s) - f(t)`.
///
/// Feeding increments instead of values keeps the stencils free of the
/// cancellation `f(t ± h) - f(t)` when `f(t)` is large.
pub fn schwarzian_from_increments<F: Fn(f64) -> f64>(inc: F, h: f64) -> f64 {
    let (p1, p2, m1, m2) = (inc(h), inc(2.0 * h), inc(-h), inc(-2.0 * h));
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 + 16.0 * m1 - m2) / (12.0 * h * h);
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
    d3 / d1 - 1.5 * (d2 / d1).powi(2)
}

/// Schwarzian derivative of a raw real function at `t`.
pub fn schwarzian_of_fn<F: Fn(f64) -> f64>(f: F, t: f64) -> f64 {
    let ft = f(t);
    schwarzian_from_increments(|s| f(t + s) - ft, SCHWARZIAN_STEP)
}

/// Schwarzian derivative of `g` in the affine chart `t = u/v`. Vanishes for
/// every projective map up to finite-difference error.
pub fn schwarzian(g: &ProjectiveMap, t: f64) -> Result<f64> {
    let [_, _, c, d] = g.entries();
    let h = SCHWARZIAN_STEP;
    for s in [0.0, h, -h, 2.0 * h, -2.0 * h] {
        if (c * (t + s) + d).abs() < 1e-6 {
            return Err(Error::NearPole(t));
        }
    }
    Ok(schwarzian_from_increments(|s| g.affine_increment(t, s), h))
}

/// `n` evenly spaced points of `[-60, 60]`, skipping those within distance
/// 5 of the pole of `g`.
pub fn schwarzian_sample_points(g: &ProjectiveMap, n: usize) -> Vec<f64> {
    let pole = g.affine_pole();
    let mut out = Vec::with_capacity(n);
    let mut i = 0usize;
    let span = 120.0;
    let step = span / (2 * n).max(1) as f64;
    while out.len() < n && i < 4 * n + 4 {
        // alternate sides of the origin, working outward
        let k = (i / 2) as f64 + 0.5;
        let t = if i % 2 == 0 { k * step } else { -k * step };
        i += 1;
        if pole.map_or(true, |p| (t - p).abs() >= POLE_MARGIN) {
            out.push(t);
        }
    }
    out
}
