//! Black-box tests of the `unsharp` binary: exit codes, output formats,
//! and byte-level determinism of reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use unsharp_cli::{parse_results, serialize_results, ReportFormat};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_unsharp")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const TWO_STAGE: &str = r#"{
    "initial_state": { "alpha": [0.7071067811865476, 0.0],
                       "beta": [0.7071067811865476, 0.0] },
    "settings": [
        { "bloch": [0.0, 0.0, 1.0], "eta": 0.25 },
        { "bloch": [0.6, 0.0, 0.8], "chi": 0.3 }
    ],
    "sampling": { "shots": 30000, "seed": 5, "shards": 4 },
    "outputs": { "subsets": [[1], [1, 2]], "emit_distribution": true }
}"#;

#[test]
fn missing_file_exits_1() {
    let output = run(&["exact", "/nonexistent/experiment.json"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "broken.json", "{ not json");
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("schema error"));
}

#[test]
fn out_of_range_subset_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = TWO_STAGE.replace("[1, 2]", "[1, 3]");
    let path = write_config(dir.path(), "subset.json", &text);
    let output = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn validate_reports_levels_and_selection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "two.json", TWO_STAGE);
    let output = run(&["validate", path.to_str().unwrap()]);
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("2 measurement level(s)"));
    assert!(stdout.contains("selection none"));
}

#[test]
fn exact_report_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "two.json", TWO_STAGE);
    let output = run(&["exact", path.to_str().unwrap()]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let report = parse_results(&text).unwrap();
    assert_eq!(serialize_results(&report, ReportFormat::Json), text);
    assert!(report.exact_distribution.unwrap().len() == 4);
    assert_eq!(report.exact_correlations.len(), 2);
    assert!(report.monte_carlo.is_none());
}

#[test]
fn simulate_is_deterministic_and_shard_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "two.json", TWO_STAGE);
    let path = path.to_str().unwrap();

    let first = run(&["simulate", path]);
    let second = run(&["simulate", path]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let resharded = run(&["simulate", path, "--shards", "9"]);
    assert!(resharded.status.success());
    let a = parse_results(&String::from_utf8(first.stdout).unwrap()).unwrap();
    let b = parse_results(&String::from_utf8(resharded.stdout).unwrap()).unwrap();
    let (a, b) = (a.monte_carlo.unwrap(), b.monte_carlo.unwrap());
    assert_eq!(b.shards, 9);
    for (x, y) in a.estimates.iter().zip(&b.estimates) {
        assert_eq!(x.mean.to_bits(), y.mean.to_bits());
        assert_eq!(x.stderr.to_bits(), y.stderr.to_bits());
        assert_eq!(x.count, y.count);
    }
}

#[test]
fn cli_overrides_take_precedence_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "two.json", TWO_STAGE);
    let output = run(&[
        "simulate",
        path.to_str().unwrap(),
        "--shots",
        "1000",
        "--seed",
        "123",
    ]);
    assert!(output.status.success());
    let report = parse_results(&String::from_utf8(output.stdout).unwrap()).unwrap();
    let mc = report.monte_carlo.unwrap();
    assert_eq!(mc.shots, 1000);
    assert_eq!(mc.seed, 123);
    assert_eq!(mc.shards, 4);
}

#[test]
fn csv_output_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "two.json", TWO_STAGE);
    let out = dir.path().join("report.csv");
    let output = run(&[
        "exact",
        config.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("outcomes,probability\n"));
    assert!(text.contains("subset,exact"));
}

#[test]
fn postselection_demo_reports_anomalous_mean() {
    let dir = tempfile::tempdir().unwrap();
    let demo = run(&["demo", "--dir", dir.path().to_str().unwrap()]);
    assert!(demo.status.success());

    let path = dir.path().join("demo_postselection.json");
    let output = run(&["exact", path.to_str().unwrap()]);
    assert!(output.status.success());
    let report = parse_results(&String::from_utf8(output.stdout).unwrap()).unwrap();
    let selection = report.selection.unwrap();
    assert_eq!(selection.mode, "postselect");
    // eta = 0.1 against a near-orthogonal final state: mean well outside
    // the +/-1 spectrum, on its way to cot(0.1) ~ 9.97.
    let mean = selection.conditional_means[0].value;
    assert!(mean > 5.0 && mean < 10.0, "mean {mean}");
}
