use std::process::ExitCode;

use clap::Parser;
use superbethe::harness::{config_from_args, emit_report, run_suite, CliArgs};

fn main() -> ExitCode {
    // clap exits with 0 for --help/--version and 2 for malformed flags
    let cli = CliArgs::parse();
    let cfg = match config_from_args(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("superbethe: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("superbethe: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_report(&report, cfg.format, cfg.out.as_deref()) {
        eprintln!("superbethe: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
