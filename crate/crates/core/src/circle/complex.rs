use std::f64::consts::PI;

use num_complex::Complex64;

use super::LiftedMap;
use crate::error::{Error, Result};

/// Validity radius of the strip chart: holomorphic extensions are followed
/// only while `|Im z| ≤ R_MAX`.
pub const R_MAX: f64 = 0.25;

/// Validity radius in the chart of the `k`-fold cover, where `|Im z|` is
/// scaled by `k` before the base map sees it.
pub fn chart_radius(k: u32) -> f64 {
    R_MAX / f64::from(k.max(1))
}

/// A holomorphic map on a region of `C/Z` (or of `C` for raw test
/// functions).
pub trait Holomorphic: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn deriv(&self, z: Complex64) -> Result<Complex64>;

    /// Whether values live in `C/Z`, i.e. real parts are taken mod 1.
    fn periodic(&self) -> bool {
        true
    }
}

impl Holomorphic for LiftedMap {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.complex_apply(z))
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.complex_derivative(z))
    }
}

/// A word of generators evaluated letter by letter, with a chart check
/// after every letter. Letters are in algebraic order: the last letter acts
/// first.
#[derive(Clone, Copy, Debug)]
pub struct ChartWord<'a> {
    letters: &'a [LiftedMap],
}

impl<'a> ChartWord<'a> {
    pub fn new(letters: &'a [LiftedMap]) -> Self {
        ChartWord { letters }
    }

    /// Value and derivative at `z`.
    pub fn run(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let bound = chart_radius(self.letters.first().map_or(1, LiftedMap::k));
        check_chart(z, 0, bound)?;
        let mut value = z;
        let mut deriv = Complex64::new(1.0, 0.0);
        for (applied, g) in self.letters.iter().rev().enumerate() {
            deriv *= g.complex_derivative(value);
            value = g.complex_apply(value);
            check_chart(value, applied + 1, bound)?;
        }
        Ok((value, deriv))
    }
}

impl Holomorphic for ChartWord<'_> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.run(z).map(|(v, _)| v)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        self.run(z).map(|(_, d)| d)
    }
}

fn check_chart(z: Complex64, prefix: usize, bound: f64) -> Result<()> {
    if !z.im.is_finite() || z.im.abs() > bound * (1.0 + 1e-12) {
        return Err(Error::ExtensionLeavesChart {
            prefix,
            imag: z.im.abs(),
        });
    }
    Ok(())
}

/// Apply a word (algebraic order) to a point of the strip chart.
pub fn complex_apply(letters: &[LiftedMap], z: Complex64) -> Result<Complex64> {
    ChartWord::new(letters).eval(z)
}

/// A holomorphic function of `C` given by closures, for checks against
/// closed-form test functions such as `z ↦ z²`.
pub struct RawFn<F, D> {
    f: F,
    df: D,
}

impl<F, D> RawFn<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn new(f: F, df: D) -> Self {
        RawFn { f, df }
    }
}

impl<F, D> Holomorphic for RawFn<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.f)(z))
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.df)(z))
    }

    fn periodic(&self) -> bool {
        false
    }
}

/// `a - b`, with the real part reduced to `(-1/2, 1/2]` when `periodic`.
pub fn strip_diff(a: Complex64, b: Complex64, periodic: bool) -> Complex64 {
    let mut d = a - b;
    if periodic {
        d.re = super::signed_diff(a.re, b.re);
    }
    d
}

/// Polar grid on the closed ball `B(center, radius)`: the center plus
/// concentric rings, the outermost on the boundary. Roughly `n` points.
pub fn ball_samples(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    let rings = ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize;
    let per_ring = (n / rings).max(4);
    let mut out = Vec::with_capacity(1 + rings * per_ring);
    out.push(center);
    for j in 1..=rings {
        let rho = radius * j as f64 / rings as f64;
        for i in 0..per_ring {
            let theta = 2.0 * PI * i as f64 / per_ring as f64;
            out.push(center + Complex64::from_polar(rho, theta));
        }
    }
    out
}
