//! Experiment configuration, Monte Carlo runs and file formats.

pub mod config;
pub mod experiment;
pub mod io;

pub use config::{
    EngineKind, ExperimentConfig, KnRule, LevelSchedule, ParamSpec, Task, DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV,
};
pub use experiment::{
    draw_theta0, mean_and_se, replicate_posterior, run_bound_check, run_coverage_experiment,
    run_detection_experiment, run_experiment, run_posterior_dump, run_recovery_experiment,
    wilson_interval, DumpedTable, ExperimentOutput, ResultRow, SkippedCell, Summary,
};
pub use io::Manifest;
