//! File-format and orchestration layer for the `unsharp` binary: JSON
//! experiment descriptions in, deterministic JSON/CSV reports out.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{parse_experiment, ExperimentConfig, Outputs, Sampling};
pub use error::CliError;
pub use report::{
    parse_results, serialize_results, MonteCarloReport, ReportFormat, ResultsReport,
    SelectionReport,
};
pub use runner::{run_experiment, CROSS_CHECK_TOL};
