use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ball::CayleyBall;
use super::generators::ELEMENT_TOL;
use crate::circle::Element;
use crate::error::{Error, Result};
use crate::par;

/// A word-metric distance read off a finite ball: either exact, or only
/// known to exceed the ball radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dist {
    Exact(u32),
    Greater(u32),
}

impl Dist {
    pub fn exact(self) -> Option<u32> {
        match self {
            Dist::Exact(d) => Some(d),
            Dist::Greater(_) => None,
        }
    }

    /// Smallest value consistent with the bound.
    pub fn lower(self) -> u32 {
        match self {
            Dist::Exact(d) => d,
            Dist::Greater(r) => r + 1,
        }
    }
}

/// Default cap on geodesics enumerated per pair.
pub const GEODESIC_CAP: usize = 64;
/// Default cap on triangles scanned by [`CayleyBall::delta_estimate`].
pub const TRIPLE_CAP: usize = 50_000;

impl CayleyBall {
    /// Word norm of an arbitrary element: exact inside the ball, otherwise a
    /// lower bound. Looking up products of large matrices loses absolute
    /// precision, so the tolerance grows with `scale` (the product of the
    /// operand sizes).
    pub fn norm_of(&self, g: &Element, scale: f64) -> Dist {
        let tol = ELEMENT_TOL.max(64.0 * f64::EPSILON * scale);
        match self.lookup_tol(g, tol) {
            Some(i) => Dist::Exact(self.norm(i)),
            None => Dist::Greater(self.radius()),
        }
    }

    /// `d(g_i, g_j) = |g_j g_i⁻¹|`.
    pub fn dist(&self, i: usize, j: usize) -> Dist {
        if i == j {
            return Dist::Exact(0);
        }
        let gi = self.element(i);
        let gj = self.element(j);
        let q = gj
            .compose(self.element(self.inverse_index(i)))
            .expect("ball elements share the cover degree");
        self.norm_of(&q, gi.base().max_entry() * gj.base().max_entry())
    }

    /// Exact distance, or [`Error::OutOfBall`] if the quotient leaves the
    /// ball.
    pub fn distance(&self, i: usize, j: usize) -> Result<u32> {
        self.dist(i, j)
            .exact()
            .ok_or(Error::OutOfBall(self.radius()))
    }

    /// Distance between arbitrary elements (not necessarily in the ball).
    pub fn distance_elements(&self, g1: &Element, g2: &Element) -> Result<u32> {
        let q = g2.compose(&g1.inverse())?;
        self.norm_of(&q, g1.base().max_entry() * g2.base().max_entry())
            .exact()
            .ok_or(Error::OutOfBall(self.radius()))
    }

    /// `(h1 | h2)_g = (d(g,h1) + d(g,h2) - d(h1,h2)) / 2`.
    pub fn gromov_product(&self, g: usize, h1: usize, h2: usize) -> Result<f64> {
        let a = self.distance(g, h1)?;
        let b = self.distance(g, h2)?;
        let c = self.distance(h1, h2)?;
        Ok((f64::from(a) + f64::from(b) - f64::from(c)) / 2.0)
    }

    /// Geodesics from the identity to `q`, each listed from `e` to `q`.
    fn geodesics_from_identity(&self, q: usize, cap: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![q];
        self.descend(q, &mut path, &mut out, cap);
        out
    }

    fn descend(&self, u: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        let nu = self.norm(u);
        if nu == 0 {
            let mut p = path.clone();
            p.reverse();
            out.push(p);
            return;
        }
        let mut seen = Vec::new();
        for v in self.neighbors(u) {
            if self.norm(v) + 1 == nu && !seen.contains(&v) {
                seen.push(v);
                path.push(v);
                self.descend(v, path, out, cap);
                path.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    /// Up to `cap` geodesics from `g_i` to `g_j`, as index sequences.
    pub fn enumerate_geodesics(&self, i: usize, j: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        let q = self
            .element(j)
            .compose(self.element(self.inverse_index(i)))?;
        let scale = self.element(i).base().max_entry() * self.element(j).base().max_entry();
        let qi = self
            .lookup_tol(&q, ELEMENT_TOL.max(64.0 * f64::EPSILON * scale))
            .ok_or(Error::OutOfBall(self.radius()))?;
        let gi = self.element(i);
        self.geodesics_from_identity(qi, cap)
            .into_iter()
            .map(|path| {
                path.into_iter()
                    .map(|u| {
                        if i == 0 {
                            return Ok(u);
                        }
                        let v = self.element(u).compose(gi)?;
                        self.lookup(&v).ok_or(Error::OutOfBall(self.radius()))
                    })
                    .collect()
            })
            .collect()
    }

    /// Thinness of the triangle `(e, g, h)` over all enumerated geodesics:
    /// the largest distance from a point of one side to the union of the
    /// other two, maximized over geodesic choices. `None` if a side or a
    /// distance cannot be resolved inside the ball.
    fn triangle_delta(&self, g: usize, h: usize, cap: usize) -> Option<u32> {
        let eg = self.geodesics_from_identity(g, cap);
        let eh = self.geodesics_from_identity(h, cap);
        let gh = self.enumerate_geodesics(g, h, cap).ok()?;
        let sides = [eg, eh, gh];
        let dmin = |p: usize, path: &[usize]| -> Option<u32> {
            path.iter()
                .map(|&y| match self.dist(p, y) {
                    Dist::Exact(d) => Some(d),
                    Dist::Greater(r) => Some(r + 1),
                })
                .try_fold(u32::MAX, |acc, d| d.map(|d| acc.min(d)))
        };
        let mut delta = 0u32;
        for x in 0..3 {
            let (y, z) = ((x + 1) % 3, (x + 2) % 3);
            let mut points: Vec<usize> = sides[x].iter().flatten().copied().collect();
            points.sort_unstable();
            points.dedup();
            for p in points {
                let far_y = sides[y]
                    .iter()
                    .map(|path| dmin(p, path))
                    .try_fold(0u32, |acc, d| d.map(|d| acc.max(d)))?;
                let far_z = sides[z]
                    .iter()
                    .map(|path| dmin(p, path))
                    .try_fold(0u32, |acc, d| d.map(|d| acc.max(d)))?;
                delta = delta.max(far_y.min(far_z));
            }
        }
        Some(delta)
    }

    /// Thin-triangle constant over triangles with a vertex at the identity
    /// (every triangle is a right translate of one). Exhaustive when the
    /// number of vertex pairs is at most `triple_cap`; otherwise the first
    /// `triple_cap` pairs of a seeded shuffle, so raising the cap only adds
    /// triangles. Triangles whose third side leaves the ball are skipped.
    pub fn delta_estimate_with(&self, triple_cap: usize, geodesic_cap: usize, seed: u64) -> DeltaEstimate {
        let n = self.len();
        if self.radius() == 0 || n < 2 {
            return DeltaEstimate {
                delta: 0.0,
                triangles: 0,
                skipped: 0,
                exhaustive: true,
            };
        }
        let total = (n - 1) * (n - 2) / 2 + (n - 1);
        let exhaustive = total <= triple_cap;
        let pairs: Vec<(usize, usize)> = if exhaustive {
            (1..n).flat_map(|g| (g..n).map(move |h| (g, h))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut all: Vec<(usize, usize)> = (1..n).flat_map(|g| (g..n).map(move |h| (g, h))).collect();
            all.shuffle(&mut rng);
            all.truncate(triple_cap);
            all
        };
        let results = par::map_slice(&pairs, |&(g, h)| self.triangle_delta(g, h, geodesic_cap));
        let mut delta = 0u32;
        let mut skipped = 0usize;
        for r in &results {
            match r {
                Some(d) => delta = delta.max(*d),
                None => skipped += 1,
            }
        }
        DeltaEstimate {
            delta: f64::from(delta),
            triangles: results.len() - skipped,
            skipped,
            exhaustive,
        }
    }

    pub fn delta_estimate(&self) -> f64 {
        self.delta_estimate_with(TRIPLE_CAP, GEODESIC_CAP, 0).delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub triangles: usize,
    pub skipped: usize,
    pub exhaustive: bool,
}

/// Check `|n-m|/α - β ≤ d(g_m, g_n) ≤ α|n-m| + β` for all pairs of a
/// sequence of `len` elements, given a distance oracle. When `adjacent` is
/// set, consecutive elements are one edge apart, so `d ≤ |n-m|` and the
/// upper bound holds automatically.
pub fn quasi_geodesic_check<F>(len: usize, dist: F, alpha: f64, beta: f64, adjacent: bool, radius: u32) -> Result<bool>
where
    F: Fn(usize, usize) -> Dist + Sync + Send,
{
    let verdicts = par::map_range(len, |m| -> Result<bool> {
        for n in m + 1..len {
            let k = (n - m) as f64;
            let lo = k / alpha - beta;
            let hi = alpha * k + beta;
            match dist(m, n) {
                Dist::Exact(d) => {
                    let d = f64::from(d);
                    if d < lo - 1e-12 || (d > hi + 1e-12 && !adjacent) {
                        return Ok(false);
                    }
                }
                Dist::Greater(r) => {
                    let d_lo = f64::from(r + 1);
                    if !adjacent && d_lo > hi + 1e-12 {
                        return Ok(false);
                    }
                    let upper_ok = adjacent;
                    let lower_ok = d_lo >= lo - 1e-12;
                    if !(upper_ok && lower_ok) {
                        return Err(Error::OutOfBall(radius));
                    }
                }
            }
        }
        Ok(true)
    });
    let mut all = true;
    for v in verdicts {
        all &= v?;
    }
    Ok(all)
}

impl CayleyBall {
    /// [`quasi_geodesic_check`] for a sequence of ball indices.
    pub fn quasi_geodesic_check(&self, seq: &[usize], alpha: f64, beta: f64) -> Result<bool> {
        let adjacent = seq
            .windows(2)
            .all(|w| self.dist(w[0], w[1]) == Dist::Exact(1));
        quasi_geodesic_check(seq.len(), |m, n| self.dist(seq[m], seq[n]), alpha, beta, adjacent, self.radius())
    }
}
