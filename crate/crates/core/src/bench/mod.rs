//! Experiment harness: graph generation, seed sampling, scoring and
//! repeated runs with summary statistics.

pub mod experiment;
pub mod metrics;
pub mod report;
pub mod sbm;
pub mod seeds;
pub mod sweep;

pub use experiment::{
    classify_reachable, run_experiment, run_sweep, DataSource, ExperimentReport, ExperimentSpec,
    ModeSummary, PointReport,
};
pub use metrics::{macro_f1, macro_f1_labels, F1Scores};
pub use sbm::{generate_sbm, generate_sbm_with, SbmGraph, SbmParams};
pub use seeds::{sample_seeds, SeedRule};
pub use sweep::{SweepKind, SweepSpec};
