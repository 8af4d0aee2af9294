use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cayley::{quasi_geodesic_check, CayleyBall, Dist, GeneratorSet, Walker};
use crate::circle::{chart_radius, distortion, strip_diff, Element, Region};
use crate::error::{Error, Result};
use crate::par;

/// Tolerance of [`verify_line`].
pub const LINE_TOL: f64 = 1e-9;

/// A line of expansion `E_0, E_1, …` with `E_n = s_n E_{n-1}`, relative
/// to the point `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionLine {
    pub x: f64,
    pub start: Element,
    /// Generator indices `s_1, …, s_N`.
    pub steps: Vec<usize>,
    /// `x_m = E_m(x)`, `m = 0..=N`.
    pub points: Vec<f64>,
    /// `D_x(E_0, E_m)`, `m = 0..=N`.
    pub partial: Vec<f64>,
    /// `log |DE_0(x)|`.
    pub start_log_derivative: f64,
}

impl ExpansionLine {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `D_x(E_m, E_n)`.
    pub fn cocycle(&self, m: usize, n: usize) -> f64 {
        self.partial[n] - self.partial[m]
    }

    /// `log |DE_m(x)|`.
    pub fn log_derivative(&self, m: usize) -> f64 {
        self.start_log_derivative + self.partial[m]
    }

    /// `E_m` as a matrix product; long prefixes lose absolute precision.
    pub fn element(&self, gens: &GeneratorSet, m: usize) -> Element {
        let mut g = self.start;
        for &s in &self.steps[..m] {
            g = gens.element(s).compose(&g).expect("same cover degree");
        }
        g
    }

    /// Word `s_n ⋯ s_{m+1}` of `E_n E_m⁻¹` (algebraic order).
    pub fn quotient_word(&self, m: usize, n: usize) -> Vec<usize> {
        self.steps[m..n].iter().rev().copied().collect()
    }
}

/// Greedy line of expansion: at each step the generator with the largest
/// log-derivative at the current point (first one on ties).
pub fn build_expansion_line(
    gens: &GeneratorSet,
    x: f64,
    c: f64,
    length: usize,
    start: Element,
) -> Result<ExpansionLine> {
    let mut points = Vec::with_capacity(length + 1);
    let mut partial = Vec::with_capacity(length + 1);
    let mut steps = Vec::with_capacity(length);
    let mut cur = start.apply(x);
    points.push(cur);
    partial.push(0.0);
    for step in 1..=length {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (s, g) in gens.generators().iter().enumerate() {
            let v = g.element.log_derivative(cur);
            if v > best.0 {
                best = (v, s);
            }
        }
        if best.0 < c {
            return Err(Error::NoExpandingGenerator {
                step,
                point: cur,
                best: best.0,
                c,
            });
        }
        steps.push(best.1);
        cur = gens.element(best.1).apply(cur);
        points.push(cur);
        partial.push(partial[step - 1] + best.0);
    }
    Ok(ExpansionLine {
        x,
        start,
        steps,
        points,
        partial,
        start_log_derivative: start.log_derivative(x),
    })
}

/// `D_x(E_m, E_n) ≥ c (n - m)` for all `m ≤ n`, up to [`LINE_TOL`].
pub fn verify_line(line: &ExpansionLine, c: f64) -> bool {
    let n = line.partial.len();
    (0..n).all(|m| (m + 1..n).all(|k| line.cocycle(m, k) >= c * (k - m) as f64 - LINE_TOL))
}

/// Distances `d(E_m, E_n) = |s_n ⋯ s_{m+1}|` for all pairs, read off the
/// ball by walking the quotient one letter at a time.
pub fn line_distances(ball: &CayleyBall, line: &ExpansionLine) -> Vec<Vec<Dist>> {
    let n = line.points.len();
    par::map_range(n, |m| {
        let mut walk = Walker::identity(ball);
        let mut row = vec![Dist::Exact(0); n];
        for k in m + 1..n {
            walk.left(line.steps[k - 1]);
            row[k] = walk.norm();
        }
        row
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiGeodesicAudit {
    pub passes: bool,
    pub alpha_used: f64,
    /// Tightest `α` consistent with the exactly known distances.
    pub alpha_measured: f64,
    /// Pairs whose distance is only known to exceed the ball radius.
    pub unresolved_pairs: usize,
}

/// Quasi-geodesic check of a line with `α = c̄ / c`, `β = 0`.
pub fn line_quasi_geodesic_audit(
    ball: &CayleyBall,
    line: &ExpansionLine,
    c: f64,
    c_upper: f64,
) -> Result<QuasiGeodesicAudit> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument("line rate must be positive".into()));
    }
    let alpha = (c_upper / c).max(1.0);
    let table = line_distances(ball, line);
    let passes = quasi_geodesic_check(
        line.points.len(),
        |m, n| table[m][n],
        alpha,
        0.0,
        true,
        ball.radius(),
    )?;
    let mut alpha_measured = 1.0f64;
    let mut unresolved_pairs = 0;
    for (m, row) in table.iter().enumerate() {
        for (n, d) in row.iter().enumerate().skip(m + 1) {
            let k = (n - m) as f64;
            match *d {
                Dist::Exact(0) => alpha_measured = f64::INFINITY,
                Dist::Exact(d) => {
                    let d = f64::from(d);
                    alpha_measured = alpha_measured.max(k / d).max(d / k);
                }
                Dist::Greater(_) => unresolved_pairs += 1,
            }
        }
    }
    Ok(QuasiGeodesicAudit {
        passes,
        alpha_used: alpha,
        alpha_measured,
        unresolved_pairs,
    })
}

/// Number of refinement steps after the radius grid.
const BISECTION_STEPS: usize = 12;
/// Points of the circle where generator distortion is sampled.
const VERIFY_GRID: usize = 64;
/// Samples per ball in the distortion check.
const BALL_SAMPLES: usize = 144;
/// Points on each ball boundary in the containment check.
const CONTAINMENT_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnivalentRadius {
    pub r: f64,
    /// Every step satisfies `s_m⁻¹(B(x_m, r)) ⊂ B(x_{m-1}, r)`, hence
    /// `E_n⁻¹ E_0 (B(x_n, r)) ⊂ B(x_0, r)`.
    pub contained: bool,
}

fn radius_ok(gens: &GeneratorSet, c: f64, r: f64) -> bool {
    let bad = par::map_range(VERIFY_GRID * gens.len(), |t| {
        let y = (t / gens.len()) as f64 / VERIFY_GRID as f64;
        let g = gens.element(t % gens.len());
        let region = Region::Ball {
            center: Complex64::new(y, 0.0),
            radius: r,
        };
        match distortion(g, region, BALL_SAMPLES) {
            Ok(k) => k > c,
            Err(_) => true,
        }
    });
    !bad.into_iter().any(|b| b)
}

/// Largest radius `r ≤ r₀` (the chart radius of the cover) on the grid
/// `r₀ · 2^{-j/2}`, refined by bisection, at which every generator has
/// distortion at most `c` on every ball `B(y, r)` centered on the circle;
/// then checks that the inverse steps of `line` map `B(x_m, r)` into
/// `B(x_{m-1}, r)`.
pub fn univalent_radius_along_line(
    gens: &GeneratorSet,
    line: &ExpansionLine,
    c: f64,
) -> Result<UnivalentRadius> {
    let r0 = chart_radius(gens.k());
    let grid: Vec<f64> = (0..=24).map(|j| r0 * 2f64.powf(-(j as f64) / 2.0)).collect();
    let first = grid
        .iter()
        .position(|&r| radius_ok(gens, c, r))
        .ok_or(Error::NoPositiveRadius)?;
    let mut r = grid[first];
    if first > 0 {
        let (mut lo, mut hi) = (grid[first], grid[first - 1]);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if radius_ok(gens, c, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r = lo;
    }
    let contained = steps_contained(gens, line, r)?;
    Ok(UnivalentRadius { r, contained })
}

fn steps_contained(gens: &GeneratorSet, line: &ExpansionLine, r: f64) -> Result<bool> {
    let bound = chart_radius(gens.k());
    let results = par::map_range(line.len(), |m| -> Result<bool> {
        let inv = gens.element(gens.inverse_index(line.steps[m]));
        let from = line.points[m + 1];
        let to = line.points[m];
        for i in 0..CONTAINMENT_POINTS {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / CONTAINMENT_POINTS as f64;
            let z = Complex64::new(from, 0.0) + Complex64::from_polar(r, theta);
            if z.im.abs() > bound + 1e-12 {
                return Err(Error::ExtensionLeavesChart {
                    prefix: 0,
                    imag: z.im.abs(),
                });
            }
            let w = inv.complex_apply(z);
            if strip_diff(w, Complex64::new(to, 0.0), true).norm() > r * (1.0 + 1e-9) {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let mut all = true;
    for v in results {
        all &= v?;
    }
    Ok(all)
}
