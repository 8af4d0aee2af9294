//! Group files, experiment configuration and report emission.

mod config;
mod experiments;
mod group_file;

pub use config::{LabConfig, Params, VERSION};
pub use experiments::{columns, exit_code, max_dist, run_experiment, Check, ExperimentReport, EXPERIMENTS, SCHWARZIAN_TOL};
pub use group_file::{export_group, load_group, parse_group, GeneratorEntry, GroupFile};
