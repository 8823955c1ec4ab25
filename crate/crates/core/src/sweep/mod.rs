//! Configuration-driven PAR × angle-of-attack sweeps and resolution studies.

pub mod config;
pub mod run;

pub use config::{with_marked_alphas, SweepConfig, WingMode, MARKED_ALPHAS};
pub use run::{
    convergence_study, run_sweep, section_polars, sweep_profile, sweep_wing, ConvergenceAxis, ConvergenceOptions,
    ConvergenceReport, Metric, SweepCell, SweepResult,
};
