//! Batch drivers: one experiment per subcommand, each producing a
//! byte-stable CSV table and a JSON summary.

mod config;
mod report;
mod runs;

pub use config::{ExperimentConfig, ExperimentId, Overrides, Tolerances};
pub use report::{Cell, ExperimentReport, ResultRow};
pub use runs::{run, run_busemann, run_curvature, run_family, run_kristaly, run_sanity, run_sphere_family};
