//! Scenario files, experiment drivers, metrics and file export.

pub mod config;
pub mod experiments;
pub mod export;
pub mod metrics;

pub use config::{AveragingConfig, FieldSpec, InitialSpec, MetricsConfig, Scenario};
pub use experiments::{
    integrate_averaged, monte_carlo, quantile, report, run_scenario, run_stream, validate_averaging, AveragedRun,
    AveragingRow, AveragingValidation, MonteCarloReport, Quantiles, Report, RunOutcome,
};
pub use metrics::{run_metrics, RunMetrics};
