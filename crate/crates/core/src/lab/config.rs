use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Version string stamped on every report row.
pub const VERSION: &str = concat!("circlelab ", env!("CARGO_PKG_VERSION"));

/// Experiment parameters. `None` selects the per-experiment default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Replace the generating set by all elements of norm at most this.
    pub enrich: Option<u32>,
    pub grid: Option<usize>,
    pub radius: Option<u32>,
    pub radii: Option<Vec<u32>>,
    pub points: Option<usize>,
    pub length: Option<usize>,
    pub depth: Option<usize>,
    pub max_depth: Option<usize>,
    pub trials: Option<usize>,
    pub directions: Option<usize>,
    pub threshold: Option<f64>,
    /// Rate of the lines; defaults to half the lower expansion constant.
    pub c: Option<f64>,
    pub interval: Option<(f64, f64)>,
    pub band: Option<(f64, f64)>,
    pub words: Option<usize>,
    pub word_length: Option<usize>,
}

/// Everything that determines an experiment's output. The thread count and
/// output directory are not part of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    /// `zoo:REF` or a path to a group file.
    pub group: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
}

impl LabConfig {
    pub fn new(group: &str, seed: u64) -> Self {
        LabConfig {
            group: group.to_string(),
            seed,
            params: Params::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let positive = [
            ("grid", p.grid),
            ("points", p.points),
            ("length", p.length),
            ("depth", p.depth),
            ("max_depth", p.max_depth),
            ("trials", p.trials),
            ("directions", p.directions),
            ("words", p.words),
            ("word_length", p.word_length),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if p.radius == Some(0) || p.radii.as_ref().is_some_and(|r| r.is_empty() || r.contains(&0)) {
            return Err(Error::InvalidArgument("radii must be positive".into()));
        }
        if p.c.is_some_and(|c| !(c > 0.0)) {
            return Err(Error::InvalidArgument("c must be positive".into()));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("configs serialize");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
