use std::process::{Command, Output};

use superbethe::harness::{parse_report, SEED_ENV};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superbethe")).args(args).env_remove(SEED_ENV).output().unwrap()
}

const SMALL: [&str; 4] = ["--suites", "defs,izergin", "--draws", "1"];

#[test]
fn json_report_round_trips() {
    let out = run(&SMALL);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(report.all_passed());
    assert_eq!(report.summary.total, report.checks.len());
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = run(&[&SMALL[..], &["--format", "text", "--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("PASS"));
}

#[test]
fn config_file_and_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"suites": ["defs"], "draws": 1, "seed": 3}"#).unwrap();
    let from_file = run(&["--config", path.to_str().unwrap(), "--no-timing"]);
    let from_flags = run(&["--suites", "defs", "--draws", "1", "--seed", "3", "--no-timing"]);
    assert_eq!(from_file.stdout, from_flags.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_superbethe"))
        .args(["--suites", "defs", "--draws", "1", "--seed", "9", "--no-timing"])
        .env(SEED_ENV, "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, from_flags.stdout);
}

#[test]
fn bad_input_exits_2() {
    for args in [&["--bogus"][..], &["--c", "0"], &["--L", "0"], &["--suites", "nope"], &["--config", "/nonexistent.json"]] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn injected_failure_listed_first_in_text() {
    let out = run(&[&SMALL[..], &["--inject-failure", "--format", "text"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().find(|l| l.starts_with("FAIL") || l.starts_with("PASS")).unwrap();
    assert!(first.starts_with("FAIL") && first.contains("harness.injected"), "{first}");
}
