//! Seeded Monte Carlo experiments over training size, their configuration grammar and CSV reports.

mod config;
mod presets;
mod report;
mod runner;

pub use config::{
    ConvergenceConfig, EstimatorConfig, ExperimentConfig, ExperimentKind, SimulateConfig, SteeringConfig,
    TemporalSteering, TestConfig, CONFIG_KEYS,
};
pub use presets::{preset, preset_text, PRESETS};
pub use report::{fmt_g, ExperimentReport, Series};
pub use runner::{run_experiment, run_experiment_detailed, trial_rng, DetailedRun, TrialTable};
