use serde::{Deserialize, Serialize};

use crate::cayley::GeneratorSet;
use crate::error::{Error, Result};
use crate::par;

/// Safety factor applied to the sampled Lipschitz bound of `log |Ds|`.
pub const MARGIN_SAFETY: f64 = 2.0;

/// Uniform expansion constants of a generating set, from a grid search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConstants {
    /// `min_x max_s log |Ds(x)|` minus the margin.
    pub c_lower: f64,
    /// `max_x max_s log |Ds(x)|` plus the margin.
    pub c_upper: f64,
    pub grid_size: usize,
    pub margin: f64,
    /// Sampled bound on `|d/dx log |Ds(x)||`.
    pub lipschitz: f64,
    /// Grid point where the best generator expands least.
    pub worst_point: f64,
    /// Index of the best generator at each grid point.
    pub witness: Vec<usize>,
}

impl ExpansionConstants {
    pub fn expanding(&self) -> bool {
        self.c_lower > 0.0
    }

    /// Default experimental rate `c̲ / 2`.
    pub fn default_c(&self) -> f64 {
        self.c_lower / 2.0
    }
}

/// Grid search for the expansion constants on `x_i = i / grid_size`.
///
/// Between grid points `log |Ds|` moves by at most `L h / 2`, `h` the grid
/// step; the reported margin is `2 L h` with `L` the largest sampled slope.
pub fn uniform_constants(gens: &GeneratorSet, grid_size: usize) -> Result<ExpansionConstants> {
    if grid_size < 64 {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_size} below 64"
        )));
    }
    let h = 1.0 / grid_size as f64;
    let per_point = par::map_range(grid_size, |i| {
        let x = i as f64 * h;
        let mut best = (f64::NEG_INFINITY, 0usize);
        let mut slope = 0.0f64;
        for (s, g) in gens.generators().iter().enumerate() {
            let v = g.element.log_derivative(x);
            if v > best.0 {
                best = (v, s);
            }
            slope = slope.max(g.element.log_derivative_slope(x).abs());
        }
        (best, slope)
    });
    let mut min_best = f64::INFINITY;
    let mut worst_point = 0.0;
    let mut max_all = f64::NEG_INFINITY;
    let mut lipschitz = 0.0f64;
    let mut witness = Vec::with_capacity(grid_size);
    for (i, ((v, s), slope)) in per_point.into_iter().enumerate() {
        if v < min_best {
            min_best = v;
            worst_point = i as f64 * h;
        }
        max_all = max_all.max(v);
        lipschitz = lipschitz.max(slope);
        witness.push(s);
    }
    let margin = MARGIN_SAFETY * lipschitz * h;
    Ok(ExpansionConstants {
        c_lower: min_best - margin,
        c_upper: max_all + margin,
        grid_size,
        margin,
        lipschitz,
        worst_point,
        witness,
    })
}

/// Largest generating radius tried by [`expanding_radius`].
pub const MAX_ENRICH: u32 = 3;

/// Smallest `r ≤ max_radius` such that the elements of norm at most `r`
/// expand uniformly, with their constants; `None` when no such radius is
/// found.
pub fn expanding_radius(
    gens: &GeneratorSet,
    max_radius: u32,
    grid_size: usize,
) -> Result<Option<(u32, ExpansionConstants)>> {
    for r in 1..=max_radius {
        let set = if r == 1 { gens.clone() } else { gens.enriched(r)? };
        let k = uniform_constants(&set, grid_size)?;
        if k.expanding() {
            return Ok(Some((r, k)));
        }
    }
    Ok(None)
}
