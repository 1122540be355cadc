use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::Format;
use crate::error::{Error, Result};

/// One executed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    /// Stable identifier such as `action.T21.n1`.
    pub id: String,
    /// Human-readable digest of the instance (draw, sizes, seed).
    pub params: String,
    pub pass: bool,
    /// Exact residuals as `p/q+r/si` strings, floats in scientific notation.
    pub residual: String,
    pub ms: f64,
    #[serde(skip)]
    pub draw: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub version: String,
}

impl Report {
    /// Sorts the records by `(id, draw)` and fills in the summary.
    pub fn new(config: Value, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|x, y| (x.id.as_str(), x.draw, x.params.as_str()).cmp(&(y.id.as_str(), y.draw, y.params.as_str())));
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Report { config, checks, summary, version: env!("CARGO_PKG_VERSION").to_string() }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Process exit code: 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// The JSON report with every `ms` field removed; equal for equal `(config, seed)`.
    pub fn body(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if let Some(Value::Array(checks)) = v.get_mut("checks") {
            for c in checks {
                if let Value::Object(m) = c {
                    m.remove("ms");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("report serialises")
    }

    /// Table with failing checks first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(s, "superbethe {}  total {}  passed {}  failed {}", self.version, self.summary.total, self.summary.passed, self.summary.failed);
        let _ = writeln!(s, "{:<4}  {:<15}  {:<width$}  {:>9}  {:<24}  params", "", "suite", "id", "ms", "residual");
        for c in self.checks.iter().filter(|c| !c.pass).chain(self.checks.iter().filter(|c| c.pass)) {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{mark:<4}  {:<15}  {:<width$}  {:>9.3}  {:<24}  {}", c.suite, c.id, c.ms, c.residual, c.params);
        }
        s
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Io(format!("malformed report: {e}")))
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    let mut text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed reader (e.g. `| head`) is not an error of the run
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, draw: usize, pass: bool) -> CheckRecord {
        CheckRecord { suite: "defs".into(), id: id.into(), params: format!("draw={draw}"), pass, residual: "0+0i".into(), ms: 1.5, draw }
    }

    #[test]
    fn summary_and_order() {
        let r = Report::new(Value::Null, vec![rec("b", 1, true), rec("a", 2, false), rec("b", 0, true)]);
        assert_eq!(r.summary, Summary { total: 3, passed: 2, failed: 1 });
        assert_eq!(r.checks.iter().map(|c| (c.id.as_str(), c.draw)).collect::<Vec<_>>(), vec![("a", 2), ("b", 0), ("b", 1)]);
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().lines().nth(2).unwrap().starts_with("FAIL"));
    }

    #[test]
    fn body_round_trip() {
        let r = Report::new(serde_json::json!({"L": 5}), vec![rec("x", 0, true)]);
        assert!(!r.body().contains("\"ms\""));
        let back = parse_report(&r.to_json()).unwrap();
        assert_eq!(back.body(), r.body());
        assert_eq!(parse_report(&back.to_json()).unwrap().to_json(), back.to_json());
    }

    #[test]
    fn writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        let r = Report::new(Value::Null, vec![]);
        emit_report(&r, Format::Json, Some(&p)).unwrap();
        assert_eq!(parse_report(&std::fs::read_to_string(&p).unwrap()).unwrap().summary.total, 0);
        assert!(emit_report(&r, Format::Json, Some(&dir.path().join("no/such/dir/r.json"))).is_err());
    }
}
