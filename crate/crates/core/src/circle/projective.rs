use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{wrap, DET_SINGULAR, NONZERO_TOL};
use crate::error::{Error, Result};

/// A projective map of RP¹: a real 2×2 matrix modulo scalars.
///
/// Points of RP¹ are read in the angular chart `x ↦ [cos πx : sin πx]`,
/// `x ∈ [0,1)`. The stored matrix is the canonical representative:
/// `|det| = 1` and the first entry (row-major) that is not numerically
/// zero is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveMap {
    m: [f64; 4],
}

impl ProjectiveMap {
    pub const IDENTITY: ProjectiveMap = ProjectiveMap {
        m: [1.0, 0.0, 0.0, 1.0],
    };

    /// Canonical representative of `raw = (a, b, c, d)` (row-major).
    pub fn normalize(raw: [f64; 4]) -> Result<Self> {
        let [a, b, c, d] = raw;
        let det = a * d - b * c;
        if !det.is_finite() || det.abs() < DET_SINGULAR {
            return Err(Error::SingularMatrix(det));
        }
        let scale = 1.0 / det.abs().sqrt();
        Ok(Self::with_canonical_sign([a * scale, b * scale, c * scale, d * scale]))
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    /// Determinant of the canonical representative, `±1`. The stored
    /// entries are unimodular by construction, so only the sign is read from
    /// them; recomputing `ad - bc` would cancel catastrophically for large
    /// entries.
    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        (a * d - b * c).signum()
    }

    /// +1 for orientation preserving maps, -1 otherwise.
    pub fn orientation(&self) -> f64 {
        self.det().signum()
    }

    pub fn diag(lambda: f64) -> Result<Self> {
        Self::normalize([lambda, 0.0, 0.0, 1.0 / lambda])
    }

    pub fn unipotent(s: f64) -> Self {
        ProjectiveMap {
            m: [1.0, s, 0.0, 1.0],
        }
    }

    /// The rigid rotation `x ↦ x + shift` of the angular chart.
    pub fn rotation(shift: f64) -> Self {
        let (s, c) = (PI * shift).sin_cos();
        // normalize only fixes the sign
        Self::normalize([c, -s, s, c]).expect("rotation matrices are invertible")
    }

    fn image_vector(&self, x: f64) -> (f64, f64) {
        let [a, b, c, d] = self.m;
        let (s, co) = (PI * x).sin_cos();
        (a * co + b * s, c * co + d * s)
    }

    pub fn apply(&self, x: f64) -> f64 {
        let (u, v) = self.image_vector(x);
        wrap(v.atan2(u) / PI)
    }

    /// `|det M| / ‖M (cos πx, sin πx)‖²`.
    pub fn derivative(&self, x: f64) -> f64 {
        let (u, v) = self.image_vector(x);
        self.det().abs() / (u * u + v * v)
    }

    pub fn log_derivative(&self, x: f64) -> f64 {
        self.derivative(x).ln()
    }

    /// `d/dx log |Dg(x)|`, closed form.
    pub fn log_derivative_slope(&self, x: f64) -> f64 {
        let [a, b, c, d] = self.m;
        let (s, co) = (PI * x).sin_cos();
        let (u, v) = (a * co + b * s, c * co + d * s);
        let (du, dv) = (PI * (-a * s + b * co), PI * (-c * s + d * co));
        -2.0 * (u * du + v * dv) / (u * u + v * v)
    }

    /// `self ∘ other` (matrix product `self · other`).
    pub fn compose(&self, other: &ProjectiveMap) -> ProjectiveMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        // the product is unimodular already; rescaling by a recomputed
        // determinant would only add error
        Self::with_canonical_sign([
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
        ])
    }

    pub fn inverse(&self) -> ProjectiveMap {
        let [a, b, c, d] = self.m;
        let det = self.det();
        Self::with_canonical_sign([d * det, -b * det, -c * det, a * det])
    }

    fn with_canonical_sign(mut m: [f64; 4]) -> ProjectiveMap {
        if let Some(first) = m.iter().copied().find(|e| e.abs() > NONZERO_TOL) {
            if first < 0.0 {
                for e in &mut m {
                    *e = -*e;
                }
            }
        }
        ProjectiveMap { m }
    }

    /// Entrywise sup distance between the maps, up to the sign ambiguity.
    pub fn distance(&self, other: &ProjectiveMap) -> f64 {
        let plus = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        let minus = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(p, q)| (p + q).abs())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn max_entry(&self) -> f64 {
        self.m.iter().fold(0.0_f64, |acc, e| acc.max(e.abs()))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&Self::IDENTITY) <= tol
    }

    /// Coefficients `(A, B)` of the same map acting on the unit circle
    /// `w = e^{2πix}` as `w ↦ (A w + B) / (B̄ w + Ā)`.
    pub fn disk_coefficients(&self) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.m;
        (
            Complex64::new((a + d) / 2.0, (c - b) / 2.0),
            Complex64::new((a - d) / 2.0, (c + b) / 2.0),
        )
    }

    /// Inverse of [`disk_coefficients`](Self::disk_coefficients).
    pub fn from_disk(a: Complex64, b: Complex64) -> Result<Self> {
        Self::normalize([a.re + b.re, b.im - a.im, a.im + b.im, a.re - b.re])
    }

    /// Analytic continuation of [`apply`](Self::apply) to the strip chart
    /// `C/Z`. The real part of the result lies in `[0,1)`.
    pub fn complex_apply(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.disk_coefficients();
        let w = (Complex64::i() * 2.0 * PI * z).exp();
        let w2 = (a * w + b) / (b.conj() * w + a.conj());
        let re = wrap(w2.arg() / (2.0 * PI));
        let im = -w2.norm().ln() / (2.0 * PI);
        Complex64::new(re, im)
    }

    pub fn complex_derivative(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.disk_coefficients();
        let w = (Complex64::i() * 2.0 * PI * z).exp();
        self.det() * w / ((a * w + b) * (b.conj() * w + a.conj()))
    }

    /// The map in the affine chart `t = u/v`: `t ↦ (a t + b) / (c t + d)`.
    pub fn affine_apply(&self, t: f64) -> Result<f64> {
        let [a, b, c, d] = self.m;
        let den = c * t + d;
        if den.abs() < 1e-6 {
            return Err(Error::NearPole(t));
        }
        Ok((a * t + b) / den)
    }

    /// `g(t + s) - g(t)` in the affine chart, evaluated without cancellation.
    pub fn affine_increment(&self, t: f64, s: f64) -> f64 {
        let [_, _, c, d] = self.m;
        self.det() * s / ((c * (t + s) + d) * (c * t + d))
    }

    /// Pole `-d/c` of the affine chart, if any.
    pub fn affine_pole(&self) -> Option<f64> {
        let [_, _, c, d] = self.m;
        (c.abs() > NONZERO_TOL).then(|| -d / c)
    }

    /// Fixed points in the angular chart (empty for elliptic maps and the
    /// identity).
    pub fn fixed_points(&self) -> Vec<f64> {
        let [a, b, c, d] = self.m;
        if self.is_identity(1e-12) {
            return Vec::new();
        }
        let tr = a + d;
        let disc = tr * tr - 4.0 * self.det();
        if disc < -1e-12 {
            return Vec::new();
        }
        let root = disc.max(0.0).sqrt();
        let mut lambdas = vec![(tr + root) / 2.0];
        if root > 1e-9 {
            lambdas.push((tr - root) / 2.0);
        }
        lambdas
            .into_iter()
            .map(|lam| {
                let (p, q) = if b.abs() >= c.abs() && b.abs() > NONZERO_TOL {
                    (b, lam - a)
                } else if c.abs() > NONZERO_TOL {
                    (lam - d, c)
                } else if (lam - a).abs() < (lam - d).abs() {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                };
                wrap(q.atan2(p) / PI)
            })
            .collect()
    }
}

impl std::fmt::Display for ProjectiveMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[{a:.6}, {b:.6}; {c:.6}, {d:.6}]")
    }
}
