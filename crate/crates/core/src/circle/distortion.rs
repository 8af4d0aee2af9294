use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::complex::{ball_samples, strip_diff, Holomorphic};
use crate::error::{Error, Result};
use crate::par;

/// Koebe constant: the distortion of a univalent map on a ball is at most
/// `log 81` on the concentric ball of half the radius.
pub const KOEBE_KAPPA: f64 = 4.394_449_154_672_439; // ln 81

/// Boundary resolution used by the univalence and containment tests.
const BOUNDARY_POINTS: usize = 512;
/// Interior samples used to measure distortion in [`koebe_check`].
const KOEBE_SAMPLES: usize = 1600;

/// Sampling region for [`distortion`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Point(Complex64),
    /// Real interval `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// Closed ball in the strip chart.
    Ball { center: Complex64, radius: f64 },
}

impl Region {
    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        match *self {
            Region::Point(z) => vec![z],
            Region::Interval { lo, hi } => (0..n)
                .map(|i| {
                    let t = if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
                    Complex64::new(lo + (hi - lo) * t, 0.0)
                })
                .collect(),
            Region::Ball { center, radius } => ball_samples(center, radius, n),
        }
    }
}

/// `max log |Dg(y)| - min log |Dg(x)|` over a sample of `region`.
pub fn distortion<G: Holomorphic + ?Sized>(g: &G, region: Region, n_samples: usize) -> Result<f64> {
    if n_samples < 2 {
        return Err(Error::InvalidSampleCount);
    }
    if let Region::Point(z) = region {
        g.deriv(z)?;
        return Ok(0.0);
    }
    let pts = region.samples(n_samples);
    let logs = par::map_slice(&pts, |&z| g.deriv(z).map(|d| d.norm().ln()));
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for l in logs {
        let l = l?;
        lo = lo.min(l);
        hi = hi.max(l);
    }
    Ok((hi - lo).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KoebeRecord {
    pub kappa_measured: f64,
    pub image_contains_ball: bool,
    /// Radius `r' e^{-κ₀} |Dg(center)|` of the ball that must be covered.
    pub required_radius: f64,
    /// Distance from `g(center)` to the sampled image of `∂B(center, r')`.
    pub image_inradius: f64,
}

/// Koebe check on `B(center, r)`: univalence is tested through the image
/// of the boundary circle (a simple closed curve winding once around
/// `g(center)`, with nonvanishing derivative inside), then distortion on
/// `B(center, r')` and the covering of `B(g(center), r' e^{-κ₀} |Dg(center)|)`
/// are measured.
pub fn koebe_check<G: Holomorphic + ?Sized>(
    g: &G,
    center: Complex64,
    r: f64,
    r_prime: f64,
) -> Result<KoebeRecord> {
    if !(r > 0.0 && r_prime > 0.0 && r_prime <= r / 2.0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r' <= r/2, got r = {r}, r' = {r_prime}"
        )));
    }
    let gc = g.eval(center)?;
    let periodic = g.periodic();

    for z in ball_samples(center, r, KOEBE_SAMPLES) {
        let d = g.deriv(z)?;
        if !(d.norm() > 0.0 && d.norm().is_finite()) {
            return Err(Error::NotUnivalent(format!("derivative vanishes near {z}")));
        }
    }
    let outer = image_polygon(g, center, r, gc, periodic)?;
    if !is_simple(&outer) {
        return Err(Error::NotUnivalent("image of the boundary circle self-intersects".into()));
    }
    if winding_number(&outer, Complex64::new(0.0, 0.0)) != 1 {
        return Err(Error::NotUnivalent("image of the boundary circle is not a simple loop".into()));
    }

    let kappa_measured = distortion(
        g,
        Region::Ball {
            center,
            radius: r_prime,
        },
        KOEBE_SAMPLES,
    )?;
    let required_radius = r_prime * (-KOEBE_KAPPA).exp() * g.deriv(center)?.norm();
    let inner = image_polygon(g, center, r_prime, gc, periodic)?;
    let image_inradius = distance_to_polygon(&inner, Complex64::new(0.0, 0.0));
    let image_contains_ball =
        winding_number(&inner, Complex64::new(0.0, 0.0)) == 1 && image_inradius >= required_radius;
    Ok(KoebeRecord {
        kappa_measured,
        image_contains_ball,
        required_radius,
        image_inradius,
    })
}

/// Image of `∂B(center, radius)`, translated so that `g(center)` sits at
/// the origin and unwrapped continuously for periodic maps.
fn image_polygon<G: Holomorphic + ?Sized>(
    g: &G,
    center: Complex64,
    radius: f64,
    gc: Complex64,
    periodic: bool,
) -> Result<Vec<Complex64>> {
    let pts = par::map_range(BOUNDARY_POINTS, |i| {
        let theta = 2.0 * PI * i as f64 / BOUNDARY_POINTS as f64;
        g.eval(center + Complex64::from_polar(radius, theta))
    });
    let mut out: Vec<Complex64> = Vec::with_capacity(BOUNDARY_POINTS);
    for p in pts {
        let rel = strip_diff(p?, gc, periodic);
        let rel = match out.last() {
            Some(prev) if periodic => {
                let shift = (prev.re - rel.re).round();
                Complex64::new(rel.re + shift, rel.im)
            }
            _ => rel,
        };
        out.push(rel);
    }
    if periodic {
        let closing = (out[0] - out[out.len() - 1]).re;
        if closing.abs() > 0.5 {
            return Err(Error::NotUnivalent("boundary image wraps around the cylinder".into()));
        }
    }
    Ok(out)
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Complex64, b: Complex64, p: Complex64, d: f64| {
        d == 0.0
            && p.re >= a.re.min(b.re)
            && p.re <= a.re.max(b.re)
            && p.im >= a.im.min(b.im)
            && p.im <= a.im.max(b.im)
    };
    on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4)
}

/// No two non-adjacent edges of the closed polygon meet.
fn is_simple(poly: &[Complex64]) -> bool {
    let n = poly.len();
    let bad = par::map_range(n, |i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        (i + 2..n).any(|j| {
            if (j + 1) % n == i {
                return false;
            }
            segments_intersect(a, b, poly[j], poly[(j + 1) % n])
        })
    });
    !bad.into_iter().any(|x| x)
}

fn winding_number(poly: &[Complex64], q: Complex64) -> i64 {
    let n = poly.len();
    let total: f64 = (0..n)
        .map(|i| ((poly[(i + 1) % n] - q) / (poly[i] - q)).arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}

fn distance_to_polygon(poly: &[Complex64], q: Complex64) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let ab = b - a;
            let t = if ab.norm_sqr() > 0.0 {
                (((q - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (a + ab * t - q).norm()
        })
        .fold(f64::INFINITY, f64::min)
}
