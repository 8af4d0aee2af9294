//! Search of Cayley balls for nontrivial elements close to the identity on an
//! interval, and the renormalization collapse of non-discrete examples.

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyBall, ELEMENT_TOL};
use crate::circle::{circle_dist, signed_diff, Element};
use crate::error::{Error, Result};
use crate::par;

/// Samples of the probe interval.
pub const PROBE_SAMPLES: usize = 256;
/// Distances below this never count as a plateau.
pub const PLATEAU_FLOOR: f64 = 1e-6;
/// Largest ratio of consecutive distances that counts as a decay step.
pub const DECAY_RATIO: f64 = 0.275;
/// Relative change below which two distances form a plateau.
pub const PLATEAU_RTOL: f64 = 1e-9;
/// Common fixed point tolerance of [`renormalization_demo`].
pub const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !(hi - lo <= 1.0) {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..PROBE_SAMPLES).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / (PROBE_SAMPLES - 1) as f64)
    }
}

/// `sup |g(x) - x|` over the interval samples, in the circle metric.
pub fn c0_distance(g: &Element, interval: Interval) -> f64 {
    interval
        .samples()
        .map(|x| signed_diff(g.apply(x), x).abs())
        .fold(0.0, f64::max)
}

fn in_band(g: &Element, interval: Interval, band: (f64, f64)) -> bool {
    interval.samples().all(|x| {
        let v = g.log_derivative(x);
        v >= band.0 && v <= band.1
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximityRecord {
    pub radius: u32,
    pub best_index: usize,
    pub best_word: String,
    pub best_element: Element,
    pub c0_distance: f64,
    pub interval: Interval,
    /// Nontrivial elements visited.
    pub scanned: usize,
    /// Elements whose log-derivative stays in the band.
    pub candidates: usize,
}

/// Closest nontrivial element of norm at most `radius` whose log-derivative
/// stays in `band` on the interval; ties go to the smaller key.
pub fn near_identity_search_within(
    ball: &CayleyBall,
    radius: u32,
    interval: Interval,
    band: (f64, f64),
) -> Result<ProximityRecord> {
    if !(band.0 < 0.0 && 0.0 < band.1) {
        return Err(Error::InvalidArgument(format!(
            "band [{}, {}] must contain 0 in its interior",
            band.0, band.1
        )));
    }
    let n = ball.sphere_sizes().iter().take(radius as usize + 1).sum::<usize>();
    let scored = par::map_range(n, |i| {
        let g = ball.element(i);
        if g.is_identity(ELEMENT_TOL) || !in_band(g, interval, band) {
            None
        } else {
            Some(c0_distance(g, interval))
        }
    });
    let scanned = (0..n).filter(|&i| !ball.element(i).is_identity(ELEMENT_TOL)).count();
    let best = scored
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|d| (d, ball.key(i), i)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or(Error::EmptyCandidateSet)?;
    Ok(ProximityRecord {
        radius,
        best_index: best.2,
        best_word: ball.word_string(best.2),
        best_element: *ball.element(best.2),
        c0_distance: best.0,
        interval,
        scanned,
        candidates: scored.iter().filter(|d| d.is_some()).count(),
    })
}

pub fn near_identity_search(ball: &CayleyBall, interval: Interval, band: (f64, f64)) -> Result<ProximityRecord> {
    near_identity_search_within(ball, ball.radius(), interval, band)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    LocallyDiscrete,
    NonLocallyDiscrete,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::LocallyDiscrete => "locally discrete (empirical)",
            Verdict::NonLocallyDiscrete => "non locally discrete (empirical)",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretenessProfile {
    pub records: Vec<ProximityRecord>,
    /// `d(r_{i+1}) / d(r_i)` for consecutive radii.
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
    pub floor: f64,
    pub decay_ratio: f64,
}

pub fn classify(distances: &[f64]) -> (Vec<f64>, Verdict) {
    let ratios: Vec<f64> = distances.windows(2).map(|w| w[1] / w[0]).collect();
    let decays = ratios.windows(2).any(|w| w[0] <= DECAY_RATIO && w[1] <= DECAY_RATIO);
    let verdict = if decays {
        Verdict::NonLocallyDiscrete
    } else if let [.., a, b] = distances {
        if *b >= PLATEAU_FLOOR && (a - b).abs() <= PLATEAU_RTOL * a {
            Verdict::LocallyDiscrete
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::Inconclusive
    };
    (ratios, verdict)
}

/// Proximity records at increasing radii, all read from one ball of the
/// largest radius.
pub fn discreteness_profile(
    gens: &crate::cayley::GeneratorSet,
    radii: &[u32],
    interval: Interval,
    band: (f64, f64),
) -> Result<DiscretenessProfile> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be increasing".into()));
    }
    let ball = CayleyBall::build(gens, *radii.last().unwrap())?;
    let records = radii
        .iter()
        .map(|&r| near_identity_search_within(&ball, r, interval, band))
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<f64> = records.iter().map(|r| r.c0_distance).collect();
    let (ratios, verdict) = classify(&distances);
    Ok(DiscretenessProfile {
        records,
        ratios,
        verdict,
        floor: PLATEAU_FLOOR,
        decay_ratio: DECAY_RATIO,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Renormalization {
    pub fixed_point: f64,
    /// `(n, c0_distance(f⁻ⁿ g fⁿ))`.
    pub distances: Vec<(usize, f64)>,
    /// Geometric mean of consecutive ratios over nonzero distances.
    pub fitted_ratio: Option<f64>,
}

/// Distances of `f⁻ⁿ g fⁿ` to the identity, for `f` with an attracting
/// fixed point that `g` also fixes.
pub fn renormalization_demo(f: &Element, g: &Element, n_max: usize, interval: Interval) -> Result<Renormalization> {
    if f.k() != 1 || g.k() != 1 {
        return Err(Error::InvalidArgument("renormalization needs maps of RP¹".into()));
    }
    let attracting: Vec<f64> = f
        .base()
        .fixed_points()
        .into_iter()
        .filter(|&p| f.derivative(p) < 1.0)
        .collect();
    if attracting.is_empty() {
        return Err(Error::InvalidArgument("f has no attracting fixed point".into()));
    }
    let p = attracting
        .into_iter()
        .find(|&p| circle_dist(g.apply(p), p) <= FIXED_POINT_TOL)
        .ok_or(Error::NoCommonFixedPoint)?;
    let fi = f.inverse();
    let mut h = *g;
    let mut distances = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        distances.push((n, c0_distance(&h, interval)));
        h = fi.compose(&h)?.compose(f)?;
    }
    let logs: Vec<f64> = distances
        .windows(2)
        .filter(|w| w[0].1 > 0.0 && w[1].1 > 0.0)
        .map(|w| (w[1].1 / w[0].1).ln())
        .collect();
    let fitted_ratio = (!logs.is_empty()).then(|| (logs.iter().sum::<f64>() / logs.len() as f64).exp());
    Ok(Renormalization {
        fixed_point: p,
        distances,
        fitted_ratio,
    })
}
