//! Estimate against theory: metrics, exclusion bands, pass/fail verdicts and
//! the config-driven experiment runner.

mod compare;
mod config;
mod experiment;

pub use compare::{compare, compare_with, CompareOptions, ComparisonReport, GridSummary, Metrics, Tolerances};
pub use config::{
    EstimatorConfig, ExperimentConfig, ExperimentSection, Stat, VerifyConfig, DEFAULT_STDERR_FLOOR, DEFAULT_TOL_SUP,
    DEFAULT_Z_CAP,
};
pub use experiment::{
    auto_exclusions, estimate, estimate_replicas, model_theory, run_experiment, run_experiment_with, theory_curve,
};
