//! Batch verification driver behind the `superbethe` binary.

mod config;
mod report;
mod suites;

pub use config::{config_from_args, parse_config, parse_scalar, CliArgs, Format, Suite, SuiteConfig, SEED_ENV};
pub use report::{emit_report, parse_report, CheckRecord, Report, Summary};
pub use suites::{run_suite, NUMERIC_TOL};
