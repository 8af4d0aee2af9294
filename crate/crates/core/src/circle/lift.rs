use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{wrap, ProjectiveMap, NONZERO_TOL};
use crate::error::{Error, Result};

/// Window around the wrap point inside which the sign of the increment is
/// decided by the position of the argument instead of its value.
const WRAP_WINDOW: f64 = 1e-9;

/// A lift of a projective map to the `k`-fold cyclic cover of RP¹.
///
/// The cover is `R/Z` with covering map `y ↦ k y mod 1`. Writing `F` for the
/// lift of the base map to `R` pinned by `F(0) ∈ [0,1)`, the lift with
/// branch `j` is `y ↦ (F(k y) + j) / k mod 1`. For `k = 1` this is the base
/// map itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedMap {
    base: ProjectiveMap,
    k: u32,
    branch: u32,
}

/// Group elements are lifted maps; `k = 1` covers plain projective maps.
pub type Element = LiftedMap;

impl LiftedMap {
    pub fn new(base: ProjectiveMap, k: u32, branch: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("cover degree must be positive".into()));
        }
        if branch >= k {
            return Err(Error::InvalidArgument(format!(
                "branch {branch} outside [0, {k})"
            )));
        }
        Ok(LiftedMap { base, k, branch })
    }

    pub fn base_map(base: ProjectiveMap) -> Self {
        LiftedMap {
            base,
            k: 1,
            branch: 0,
        }
    }

    pub fn identity(k: u32) -> Self {
        LiftedMap {
            base: ProjectiveMap::IDENTITY,
            k: k.max(1),
            branch: 0,
        }
    }

    /// The deck rotation `y ↦ y + j/k`.
    pub fn deck(k: u32, j: u32) -> Self {
        LiftedMap {
            base: ProjectiveMap::IDENTITY,
            k: k.max(1),
            branch: j % k.max(1),
        }
    }

    pub fn base(&self) -> &ProjectiveMap {
        &self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn branch(&self) -> u32 {
        self.branch
    }

    pub fn with_branch(&self, branch: u32) -> Self {
        LiftedMap {
            branch: branch % self.k,
            ..*self
        }
    }

    /// `F(0)`: the base image of `0`, snapped to `0` when the base map
    /// numerically fixes `[1:0]` so that the pin does not flicker across the
    /// wrap point.
    fn pin(&self) -> f64 {
        let [_, _, c, _] = self.base.entries();
        if c.abs() <= NONZERO_TOL * self.base.max_entry() {
            0.0
        } else {
            self.base.apply(0.0)
        }
    }

    /// The pinned lift `F` of the base map to `R`.
    pub fn real_lift(&self, t: f64) -> f64 {
        let n = t.floor();
        let f = t - n;
        let sigma = self.base.orientation();
        let pin = self.pin();
        let g = self.base.apply(f);
        let within = if sigma > 0.0 {
            let mut delta = (g - pin).rem_euclid(1.0);
            if delta > 1.0 - WRAP_WINDOW && f < 0.5 {
                delta -= 1.0;
            } else if delta < WRAP_WINDOW && f > 0.5 {
                delta += 1.0;
            }
            pin + delta
        } else {
            let mut delta = (pin - g).rem_euclid(1.0);
            if delta > 1.0 - WRAP_WINDOW && f < 0.5 {
                delta -= 1.0;
            } else if delta < WRAP_WINDOW && f > 0.5 {
                delta += 1.0;
            }
            pin - delta
        };
        within + sigma * n
    }

    pub fn apply(&self, y: f64) -> f64 {
        if self.k == 1 {
            return self.base.apply(y);
        }
        let k = f64::from(self.k);
        wrap((self.real_lift(k * wrap(y)) + f64::from(self.branch)) / k)
    }

    /// Covering projection `y ↦ k y mod 1`.
    pub fn project(&self, y: f64) -> f64 {
        wrap(f64::from(self.k) * y)
    }

    pub fn derivative(&self, y: f64) -> f64 {
        self.base.derivative(self.project(y))
    }

    pub fn log_derivative(&self, y: f64) -> f64 {
        self.base.log_derivative(self.project(y))
    }

    /// `d/dy log |Dg(y)|` in the cover chart.
    pub fn log_derivative_slope(&self, y: f64) -> f64 {
        f64::from(self.k) * self.base.log_derivative_slope(self.project(y))
    }

    /// `self ∘ other`. The branch of the composite is read off from the value
    /// of the composed lifts at `0`.
    pub fn compose(&self, other: &LiftedMap) -> Result<LiftedMap> {
        if self.k != other.k {
            return Err(Error::CoverMismatch(self.k, other.k));
        }
        let base = self.base.compose(&other.base);
        if self.k == 1 {
            return Ok(LiftedMap::base_map(base));
        }
        let unbranched = LiftedMap {
            base,
            k: self.k,
            branch: 0,
        };
        let v = self.apply(other.apply(0.0));
        let r = unbranched.apply(0.0);
        let k = f64::from(self.k);
        let branch = ((k * (v - r)).round() as i64).rem_euclid(i64::from(self.k)) as u32;
        Ok(LiftedMap { branch, ..unbranched })
    }

    pub fn inverse(&self) -> LiftedMap {
        let base = self.base.inverse();
        if self.k == 1 {
            return LiftedMap::base_map(base);
        }
        let unbranched = LiftedMap {
            base,
            k: self.k,
            branch: 0,
        };
        let beta = unbranched
            .compose(self)
            .expect("same cover degree")
            .branch;
        LiftedMap {
            branch: (self.k - beta) % self.k,
            ..unbranched
        }
    }

    /// Same base (up to `tol`, entrywise modulo sign) and same branch.
    pub fn approx_eq(&self, other: &LiftedMap, tol: f64) -> bool {
        self.k == other.k && self.branch == other.branch && self.base.distance(&other.base) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.branch == 0 && self.base.is_identity(tol)
    }

    /// Continuation of [`apply`](Self::apply) to the strip chart. Valid while
    /// the image of the vertical segment through `z` moves by less than half
    /// a turn horizontally.
    pub fn complex_apply(&self, z: Complex64) -> Complex64 {
        if self.k == 1 {
            return self.base.complex_apply(z);
        }
        let k = f64::from(self.k);
        let zb = self.base.complex_apply(z * k);
        let reference = self.real_lift(k * wrap(z.re));
        let shift = (reference - zb.re).round();
        let lifted = Complex64::new(zb.re + shift, zb.im);
        let out = (lifted + f64::from(self.branch)) / k;
        Complex64::new(wrap(out.re), out.im)
    }

    pub fn complex_derivative(&self, z: Complex64) -> Complex64 {
        self.base.complex_derivative(z * f64::from(self.k))
    }
}

impl Default for LiftedMap {
    fn default() -> Self {
        LiftedMap::identity(1)
    }
}
