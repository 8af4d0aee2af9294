use serde::{Deserialize, Serialize};

use super::line::{build_expansion_line, ExpansionLine};
use crate::cayley::{CayleyBall, Dist, GeneratorSet, Walker};
use crate::circle::{Element, KOEBE_KAPPA};
use crate::error::{Error, Result};

/// Depth thresholds `γ₁ = c̄ / c` and `γ₂ = max(0, (κ₀ - c̄) / c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gammas {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Gammas {
    pub fn new(c: f64, c_upper: f64) -> Self {
        Gammas {
            gamma1: c_upper / c,
            gamma2: ((KOEBE_KAPPA - c_upper) / c).max(0.0),
        }
    }

    /// Depth beyond which the cocycle gap is scanned, for starts at
    /// distance `d0`.
    pub fn threshold(&self, d0: u32) -> f64 {
        self.gamma1 * f64::from(d0) + self.gamma2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub m: usize,
    pub n: usize,
    pub cocycle_gap: f64,
    pub distance: Dist,
    pub start_distance: u32,
    pub threshold: f64,
}

/// Walk the quotient `F_n E_m⁻¹` from `(0, 0)` to `(m, n)` through the
/// ball, at each step advancing the line whose cocycle lags behind.
pub fn quotient_distance(
    ball: &CayleyBall,
    e: &ExpansionLine,
    f: &ExpansionLine,
    q0: &Element,
    m: usize,
    n: usize,
) -> Dist {
    let gens = ball.generators();
    let mut walk = Walker::at_element(ball, *q0);
    let (mut i, mut j) = (0usize, 0usize);
    while i < m || j < n {
        let advance_e = if i == m {
            false
        } else if j == n {
            true
        } else {
            e.log_derivative(i + 1) - f.log_derivative(j)
                <= f.log_derivative(j + 1) - e.log_derivative(i)
        };
        if advance_e {
            // F_j E_{i+1}⁻¹ = F_j E_i⁻¹ s_{i+1}⁻¹
            walk.right(gens.inverse_index(e.steps[i]));
            i += 1;
        } else {
            walk.left(f.steps[j]);
            j += 1;
        }
    }
    walk.norm()
}

/// Build greedy `c`-lines from `e_start` and `f_start` at `x` and return
/// the first pair `(m, n)`, in order of increasing `m + n` then `m`, with
/// both depths beyond `γ₁ d(E_0, F_0) + γ₂` and `|D_x(E_m, F_n)| ≤ c`,
/// together with `d(E_m, F_n)`.
#[allow(clippy::too_many_arguments)]
pub fn convergence_experiment(
    gens: &GeneratorSet,
    x: f64,
    c: f64,
    c_upper: f64,
    e_start: Element,
    f_start: Element,
    max_depth: usize,
    ball: &CayleyBall,
) -> Result<ConvergenceRecord> {
    let q0 = f_start.compose(&e_start.inverse())?;
    let start_distance = ball
        .norm_of(&q0, e_start.base().max_entry() * f_start.base().max_entry())
        .exact()
        .ok_or(Error::OutOfBall(ball.radius()))?;
    let gammas = Gammas::new(c, c_upper);
    let threshold = gammas.threshold(start_distance);
    if (max_depth as f64) < threshold {
        return Err(Error::InvalidArgument(format!(
            "max depth {max_depth} below the threshold {threshold:.3}"
        )));
    }
    let e = build_expansion_line(gens, x, c, max_depth, e_start)?;
    let f = build_expansion_line(gens, x, c, max_depth, f_start)?;
    let lo = threshold.ceil().max(0.0) as usize;
    for total in 2 * lo..=2 * max_depth {
        let m_min = lo.max(total.saturating_sub(max_depth));
        let m_max = max_depth.min(total - lo);
        for m in m_min..=m_max {
            let n = total - m;
            let gap = f.log_derivative(n) - e.log_derivative(m);
            if gap.abs() <= c {
                return Ok(ConvergenceRecord {
                    m,
                    n,
                    cocycle_gap: gap,
                    distance: quotient_distance(ball, &e, &f, &q0, m, n),
                    start_distance,
                    threshold,
                });
            }
        }
    }
    Err(Error::NoMatchingDepths(max_depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{LiftedMap, ProjectiveMap};

    #[test]
    fn toy_lines_reconverge() {
        let a = LiftedMap::base_map(ProjectiveMap::diag(2.0).unwrap());
        let s = GeneratorSet::from_elements(&[("a", a)]).unwrap();
        let ball = CayleyBall::build(&s, 10).unwrap();
        let c = 0.5 * 4f64.ln();
        let rec = convergence_experiment(&s, 0.5, c, 4f64.ln(), LiftedMap::identity(1), a, 20, &ball)
            .unwrap();
        // F_n = a^{n+1} meets E_m = a^m exactly at n = m - 1
        assert_eq!(rec.n + 1, rec.m);
        assert_eq!(rec.distance, Dist::Exact(0));
        assert_eq!(rec.start_distance, 1);
    }

    #[test]
    fn identical_starts_give_distance_zero() {
        let a = LiftedMap::base_map(ProjectiveMap::diag(2.0).unwrap());
        let s = GeneratorSet::from_elements(&[("a", a)]).unwrap();
        let ball = CayleyBall::build(&s, 4).unwrap();
        let e = LiftedMap::identity(1);
        let rec = convergence_experiment(&s, 0.5, 1.0, 4f64.ln(), e, e, 20, &ball).unwrap();
        assert_eq!(rec.m, rec.n);
        assert_eq!(rec.distance, Dist::Exact(0));
    }
}
