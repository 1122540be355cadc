//! Running the verification harness from code: a numeric-mode pass over a few
//! suites, then a text report with failures first.
//!
//!     cargo run --example harness

use superbethe::harness::{emit_report, run_suite, Format, Suite, SuiteConfig};
use superbethe::kernel::Mode;

fn main() -> superbethe::Result<()> {
    let cfg = SuiteConfig {
        suites: vec![Suite::Defs, Suite::Chain, Suite::OnshellExact],
        sites: 3,
        max_a: 1,
        max_b: 1,
        max_n: 1,
        draws: 2,
        seed: 2024,
        mode: Mode::Numeric,
        ..SuiteConfig::default()
    };
    cfg.validate()?;
    let report = run_suite(&cfg)?;
    emit_report(&report, Format::Text, None)?;
    std::process::exit(report.exit_code());
}
