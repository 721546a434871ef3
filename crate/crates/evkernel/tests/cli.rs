//! End-to-end tests of the `evkernel` binary: every subcommand, every exit
//! class, flag overrides, and byte-determinism of the JSON report.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const FORWARD: &str = r#"{
    "frame": ["pq", "p~q", "~pq", "~p~q"],
    "prior": {"type": "mass", "entries": [
        {"set": ["pq", "p~q"], "value": 0.8},
        {"set": ["pq", "p~q", "~pq", "~p~q"], "value": 0.2}
    ]},
    "rules": [{"then": ["pq", "~pq"], "given": ["pq", "p~q"], "lower": 0.9}],
    "engine": "all"
}"#;

const CONFLICTING: &str = r#"{
    "frame": ["a", "b"],
    "prior": {"type": "bounds", "entries": [
        {"set": ["a"], "value": 0.7}, {"set": ["b"], "value": 0.7}
    ]},
    "engine": "oracle"
}"#;

fn evkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evkernel"))
        .args(args)
        .output()
        .expect("binary must launch")
}

fn write_problem(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("stdout must be UTF-8")
}

fn stderr_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stderr).expect("stderr must be UTF-8")
}

#[test]
fn formats_prints_the_reference() {
    let out = evkernel(&["formats"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"frame\""), "schema must show the frame field");
    assert!(text.contains("EXIT CODES"), "exit codes must be documented");
    assert!(text.contains("comparison"), "report shape must be documented");
}

#[test]
fn validate_summarizes_a_mass_problem() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let out = evkernel(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let line = stdout_of(&out);
    assert!(line.starts_with("ok: frame of 4 atoms"));
    assert!(line.contains("mass prior with 2 focal set(s)"));
    assert!(line.contains("1 rule(s)"));
    assert!(line.contains("engine all"));
}

#[test]
fn validate_counts_nontrivial_lower_bounds() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(
        &dir,
        "bounds.json",
        r#"{
            "frame": ["a", "b", "c"],
            "prior": {"type": "bounds", "entries": [
                {"set": ["a", "b"], "value": 0.5}
            ]}
        }"#,
    );
    let out = evkernel(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let line = stdout_of(&out);
    assert!(
        line.contains("nontrivial lower bound"),
        "summary must mention the bounds: {line}"
    );
    assert!(line.contains("0 rule(s)"));
}

#[test]
fn run_emits_byte_identical_reports() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let first = evkernel(&["run", file.to_str().unwrap()]);
    let second = evkernel(&["run", file.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");

    let report: serde_json::Value = serde_json::from_str(stdout_of(&first)).unwrap();
    assert_eq!(report["tool"]["name"], "evkernel");
    let engines = report["engines"].as_array().unwrap();
    assert_eq!(engines.len(), 6, "engine all must run all six engines");
    for engine in engines {
        assert_eq!(engine["status"], "ok", "engine {}", engine["engine"]);
    }
    let comparison = report["comparison"].as_array().unwrap();
    assert!(!comparison.is_empty());
    for row in comparison {
        assert_eq!(row["within_oracle"], true, "engine {}", row["engine"]);
    }
}

#[test]
fn engine_flag_overrides_the_file() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let out = evkernel(&["run", file.to_str().unwrap(), "--engine", "bayes"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    let engines = report["engines"].as_array().unwrap();
    assert_eq!(engines.len(), 1);
    assert_eq!(engines[0]["engine"], "bayes");
    assert!(
        report.get("comparison").is_none(),
        "single-engine runs have no comparison section"
    );
}

#[test]
fn table_flag_appends_the_aligned_table() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let out = evkernel(&["run", file.to_str().unwrap(), "--table"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.trim_start().starts_with('{'), "JSON comes first");
    assert!(text.contains("subset"), "table header must follow the JSON");
    assert!(text.contains("oracle"), "table must include the oracle column");
}

#[test]
fn timing_flag_adds_wall_clock_fields() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let plain = evkernel(&["run", file.to_str().unwrap()]);
    let timed = evkernel(&["run", file.to_str().unwrap(), "--timing"]);
    assert!(!stdout_of(&plain).contains("wall_clock_ms"));
    assert!(stdout_of(&timed).contains("wall_clock_ms"));
}

#[test]
fn conflicting_evidence_exits_one() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "conflict.json", CONFLICTING);
    let out = evkernel(&["run", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    let report: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    let status = report["engines"][0]["status"].as_str().unwrap();
    assert!(status.starts_with("error:"), "status was {status}");
}

#[test]
fn malformed_json_exits_two_with_location() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "broken.json", "{oops");
    let out = evkernel(&["run", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 1"), "diagnostic must carry the location: {err}");
}

#[test]
fn unknown_atom_exits_two() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(
        &dir,
        "badatom.json",
        r#"{
            "frame": ["a", "b"],
            "rules": [{"then": ["a"], "given": ["zz"], "lower": 0.5}]
        }"#,
    );
    let out = evkernel(&["run", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("zz"), "diagnostic must name the atom");
}

#[test]
fn missing_file_exits_two() {
    let out = evkernel(&["run", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cannot read"));
}

#[test]
fn invalid_flag_values_exit_two() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(&dir, "forward.json", FORWARD);
    let path = file.to_str().unwrap();

    let out = evkernel(&["run", path, "--tol=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("nonnegative"));

    let out = evkernel(&["run", path, "--max-sweeps", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = evkernel(&["run", path, "--engine", "frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("frobnicate"));
}

#[test]
fn validate_rejects_unknown_fields() {
    let dir = TempDir::new().unwrap();
    let file = write_problem(
        &dir,
        "extra.json",
        r#"{"frame": ["a", "b"], "rulez": []}"#,
    );
    let out = evkernel(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("rulez"), "diagnostic must name the field");
}
