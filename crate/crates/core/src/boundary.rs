//! The map from circle points to boundary directions, read through finite
//! prefixes of greedy lines of expansion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyBall, Dist, GeneratorSet, Walker};
use crate::circle::{Element, LiftedMap};
use crate::error::{Error, Result};
use crate::expansion::build_expansion_line;
use crate::par;

/// Smallest depth accepted by [`omega`].
pub const MIN_DEPTH: usize = 1;
/// Smallest grid accepted by the fiber estimates.
pub const MIN_GRID: usize = 256;

/// Ray `g_n = s_n ⋯ s_1 · start`, `n = 0..=len`, based at the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDirection {
    pub x: f64,
    pub start: Element,
    pub steps: Vec<usize>,
}

impl BoundaryDirection {
    pub fn from_steps(x: f64, k: u32, steps: Vec<usize>) -> Self {
        BoundaryDirection {
            x,
            start: LiftedMap::identity(k),
            steps,
        }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// The ray `g_n g⁻¹`, the image of this direction under `g`, seen from
    /// the point `g(x)`.
    pub fn translate(&self, g: &Element) -> Result<Self> {
        Ok(BoundaryDirection {
            x: g.apply(self.x),
            start: self.start.compose(&g.inverse())?,
            steps: self.steps.clone(),
        })
    }

    pub fn truncate(&self, depth: usize) -> Self {
        BoundaryDirection {
            x: self.x,
            start: self.start,
            steps: self.steps[..depth.min(self.depth())].to_vec(),
        }
    }
}

/// Greedy `c`-line of expansion at `x`, truncated at `depth`.
pub fn omega(gens: &GeneratorSet, x: f64, depth: usize, c: f64) -> Result<BoundaryDirection> {
    if depth < MIN_DEPTH {
        return Err(Error::InvalidDepth);
    }
    let line = build_expansion_line(gens, x, c, depth, LiftedMap::identity(gens.k()))?;
    Ok(BoundaryDirection {
        x,
        start: line.start,
        steps: line.steps,
    })
}

/// `d(d1[N], d2[N])` at `N = min(depth1, depth2)`, walking the quotient
/// `d2[n] d1[n]⁻¹` through the ball.
pub fn direction_distance(ball: &CayleyBall, d1: &BoundaryDirection, d2: &BoundaryDirection) -> Result<Dist> {
    let gens = ball.generators();
    let n = d1.depth().min(d2.depth());
    let q0 = d2.start.compose(&d1.start.inverse())?;
    let mut walk = Walker::at_element(ball, q0);
    for j in 0..n {
        walk.left(d2.steps[j]);
        walk.right(gens.inverse_index(d1.steps[j]));
    }
    Ok(walk.norm())
}

/// Gromov product `(d1[N] | d2[N])_e` with the ray index `N` standing in for
/// both word norms, so that the product is `N - d(d1[N], d2[N]) / 2`.
pub fn direction_product(ball: &CayleyBall, d1: &BoundaryDirection, d2: &BoundaryDirection) -> Result<(f64, Dist)> {
    let n = d1.depth().min(d2.depth()) as f64;
    let d = direction_distance(ball, d1, d2)?;
    let product = match d {
        Dist::Exact(d) => n - f64::from(d) / 2.0,
        Dist::Greater(r) => n - f64::from(r + 1) / 2.0,
    };
    Ok((product, d))
}

/// Whether the product of `d1` and `d2` reaches `threshold`; `OutOfBall`
/// when the ball is too small to decide.
pub fn same_direction(
    ball: &CayleyBall,
    d1: &BoundaryDirection,
    d2: &BoundaryDirection,
    threshold: f64,
) -> Result<bool> {
    let (product, d) = direction_product(ball, d1, d2)?;
    match d {
        Dist::Exact(_) => Ok(product >= threshold),
        // product is only an upper bound here
        Dist::Greater(_) if product < threshold => Ok(false),
        Dist::Greater(r) => Err(Error::OutOfBall(r)),
    }
}

/// Calibrated direction threshold `depth / 2`.
pub fn default_threshold(depth: usize) -> f64 {
    depth as f64 / 2.0
}

/// `D_x(e, g_n)` along a ray, by the chain rule along the orbit of `x`.
pub fn cocycle_profile(gens: &GeneratorSet, dir: &BoundaryDirection) -> Vec<f64> {
    let mut out = Vec::with_capacity(dir.depth() + 1);
    let mut acc = dir.start.log_derivative(dir.x);
    let mut y = dir.start.apply(dir.x);
    out.push(acc);
    for &s in &dir.steps {
        let g = gens.element(s);
        acc += g.log_derivative(y);
        y = g.apply(y);
        out.push(acc);
    }
    out
}

/// Two affine pieces fitted to a profile by least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileFit {
    pub rise_slope: f64,
    pub fall_slope: f64,
    pub breakpoint: usize,
    pub residual: f64,
}

fn affine_fit(ys: &[f64], offset: usize) -> (f64, f64) {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return (0.0, 0.0);
    }
    let xm = ys.iter().enumerate().map(|(i, _)| (i + offset) as f64).sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = (i + offset) as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let sse = ys
        .iter()
        .enumerate()
        .map(|(i, y)| (y - ym - slope * ((i + offset) as f64 - xm)).powi(2))
        .sum();
    (slope, sse)
}

/// Best breakpoint `b` for separate affine fits on `[0, b]` and `[b, n]`.
pub fn fit_profile(profile: &[f64]) -> Option<ProfileFit> {
    if profile.len() < 3 {
        return None;
    }
    (1..profile.len() - 1)
        .map(|b| {
            let (s1, e1) = affine_fit(&profile[..=b], 0);
            let (s2, e2) = affine_fit(&profile[b..], b);
            ProfileFit {
                rise_slope: s1,
                fall_slope: s2,
                breakpoint: b,
                residual: e1 + e2,
            }
        })
        .min_by(|a, b| a.residual.total_cmp(&b.residual))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberEstimate {
    pub direction: BoundaryDirection,
    /// Half-open circle intervals `[lo, hi)`; `hi` may exceed 1 when the
    /// interval wraps around 0.
    pub preimages: Vec<(f64, f64)>,
    pub cardinality: usize,
}

/// Greedy directions at the grid points `i / grid`.
pub fn grid_directions(gens: &GeneratorSet, grid: usize, depth: usize, c: f64) -> Result<Vec<BoundaryDirection>> {
    if grid < MIN_GRID {
        return Err(Error::InvalidSampleCount);
    }
    par::map_range(grid, |i| omega(gens, i as f64 / grid as f64, depth, c))
        .into_iter()
        .collect()
}

/// Group circular runs of grid hits into intervals.
fn cluster(hits: &[bool]) -> Result<Vec<(usize, usize)>> {
    let n = hits.len();
    let Some(first_miss) = hits.iter().position(|h| !h) else {
        return Ok(vec![(0, n)]);
    };
    let mut runs = Vec::new();
    let mut gaps = Vec::new();
    let mut i = 0;
    while i < n {
        let p = (first_miss + i) % n;
        if hits[p] {
            let start = first_miss + i;
            while i < n && hits[(first_miss + i) % n] {
                i += 1;
            }
            runs.push((start, first_miss + i));
        } else {
            let start = i;
            while i < n && !hits[(first_miss + i) % n] {
                i += 1;
            }
            gaps.push(i - start);
        }
    }
    if runs.len() > 1 && gaps.iter().any(|&g| g < 2) {
        return Err(Error::InconclusiveClustering);
    }
    Ok(runs.into_iter().map(|(a, b)| (a % n, a % n + (b - a))).collect())
}

fn fiber_from_grid(
    ball: &CayleyBall,
    direction: &BoundaryDirection,
    grid_dirs: &[BoundaryDirection],
    threshold: f64,
) -> Result<FiberEstimate> {
    let hits: Vec<bool> = grid_dirs
        .iter()
        .map(|d| same_direction(ball, direction, d, threshold))
        .collect::<Result<_>>()?;
    let n = grid_dirs.len() as f64;
    let preimages: Vec<(f64, f64)> = cluster(&hits)?
        .into_iter()
        .map(|(a, b)| (a as f64 / n, b as f64 / n))
        .collect();
    Ok(FiberEstimate {
        direction: direction.clone(),
        cardinality: preimages.len(),
        preimages,
    })
}

/// Intervals of grid points whose direction matches `direction`, with
/// directions of the same depth as `direction`.
pub fn fiber_cardinality(
    gens: &GeneratorSet,
    ball: &CayleyBall,
    direction: &BoundaryDirection,
    grid: usize,
    threshold: f64,
    c: f64,
) -> Result<FiberEstimate> {
    let dirs = grid_directions(gens, grid, direction.depth(), c)?;
    fiber_from_grid(ball, direction, &dirs, threshold)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub k_estimate: usize,
    pub n_directions: usize,
    pub grid: usize,
    pub depth: usize,
    pub threshold: f64,
    /// Fiber cardinality → number of directions.
    pub histogram: BTreeMap<usize, usize>,
    pub fibers: Vec<FiberEstimate>,
}

/// Fiber cardinalities of the directions at `n_directions` evenly spaced
/// grid points, with directions of depth `ball.radius()`.
pub fn covering_degree(
    gens: &GeneratorSet,
    ball: &CayleyBall,
    n_directions: usize,
    grid: usize,
    threshold: f64,
    c: f64,
) -> Result<DegreeReport> {
    if n_directions == 0 || n_directions > grid {
        return Err(Error::InvalidSampleCount);
    }
    let depth = ball.radius() as usize;
    let dirs = grid_directions(gens, grid, depth, c)?;
    let fibers = par::map_range(n_directions, |j| {
        let i = (2 * j + 1) * grid / (2 * n_directions);
        fiber_from_grid(ball, &dirs[i], &dirs, threshold)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut histogram = BTreeMap::new();
    for f in &fibers {
        *histogram.entry(f.cardinality).or_insert(0) += 1;
    }
    if histogram.len() != 1 {
        return Err(Error::NonConstantFibers(histogram.into_iter().collect()));
    }
    Ok(DegreeReport {
        k_estimate: fibers[0].cardinality,
        n_directions,
        grid,
        depth,
        threshold,
        histogram,
        fibers,
    })
}
