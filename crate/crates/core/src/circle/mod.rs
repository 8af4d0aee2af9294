//! Projective circle maps and their lifts to cyclic covers: real action,
//! derivatives, composition, holomorphic extension to the strip `C/Z`,
//! distortion, Koebe checks and the Schwarzian derivative.

mod complex;
mod distortion;
mod lift;
mod projective;
mod schwarzian;

pub use complex::{
    ball_samples, chart_radius, complex_apply, strip_diff, ChartWord, Holomorphic, RawFn, R_MAX,
};
pub use distortion::{distortion, koebe_check, KoebeRecord, Region, KOEBE_KAPPA};
pub use lift::{Element, LiftedMap};
pub use projective::ProjectiveMap;
pub use schwarzian::{
    schwarzian, schwarzian_from_increments, schwarzian_of_fn, schwarzian_sample_points,
    SCHWARZIAN_STEP,
};

/// Determinants below this magnitude are treated as singular.
pub const DET_SINGULAR: f64 = 1e-14;

/// Entries of a normalized matrix below this magnitude count as zero when
/// choosing the canonical sign.
pub const NONZERO_TOL: f64 = 1e-12;

/// Reduce a real coordinate to `[0, 1)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on `R/Z`.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Signed representative of `y - x` in `(-1/2, 1/2]`.
pub fn signed_diff(y: f64, x: f64) -> f64 {
    let d = (y - x).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}
