use std::fs;
use std::process::Command;

use eigenbound::io::write_symmetric;
use eigenbound::SymmetricMatrix;
use eigenbound_cli::cli::{run_with, Cli, EXIT_ASSERTIONS, EXIT_CONFIG, EXIT_OK};
use eigenbound_cli::commands::{bound_compare, contour_verify, singular_rect, sparsify_power};
use clap::Parser;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eigenbound")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn writes_data_summary_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bc.csv");
    let (code, stdout, _) = run(&["bound-compare", "--trials", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let data = fs::read_to_string(&out).unwrap();
    let mut lines = data.lines();
    assert_eq!(lines.next().unwrap(), bound_compare::COLUMNS.join(","));
    assert_eq!(lines.count(), 3);
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bc.csv.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["failures"], 0);
    assert_eq!(summary["trials"], 3);
    assert_eq!(serde_json::from_str::<Value>(&stdout).unwrap(), summary);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bc.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["trial_wall_seconds"].as_array().unwrap().len(), 3);
}

#[test]
fn column_sets_are_fixed_per_command() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 3] = [
        ("singular-rect", singular_rect::COLUMNS),
        ("sparsify-power", sparsify_power::COLUMNS),
        ("contour-verify", contour_verify::COLUMNS),
    ];
    let cfgs = [
        r#"{"version": 1, "run": {"trials": 2}}"#,
        r#"{"version": 1, "run": {"trials": 2}, "ground": {"kind": "low-rank", "n": 30, "spectrum": [30, 27, 5]}, "iterations": 50}"#,
        r#"{"version": 1, "run": {"trials": 2}, "ground": {"kind": "low-rank", "n": 8, "spectrum": [100, 90, 40, 10]}, "nodes": 32}"#,
    ];
    for ((command, columns), cfg) in cases.iter().zip(cfgs) {
        let path = dir.path().join(format!("{command}.json"));
        fs::write(&path, cfg).unwrap();
        let out = dir.path().join(format!("{command}.json.out"));
        let (code, _, stderr) = run(&[command, "--config", path.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{command}: {stderr}");
        let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let cols: Vec<&str> = doc["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert_eq!(&cols, columns);
        for rec in doc["records"].as_array().unwrap() {
            let keys: Vec<&str> = rec.as_object().unwrap().keys().map(String::as_str).collect();
            assert_eq!(&keys, columns);
        }
    }
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.json");
    fs::write(&path, r#"{"version": 1, "run": {"trails": 4}}"#).unwrap();
    let (code, _, stderr) = run(&["bound-compare", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(stderr.contains("unknown field"), "{stderr}");

    let (code, _, _) = run(&["bound-compare", "--matrix", "/nonexistent/a.mtx"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = run(&["contour-verify", "--nodes", "1"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = run(&["bound-compare", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn numerical_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("tied.mtx");
    let e = dir.path().join("zero.mtx");
    write_symmetric(&a, &SymmetricMatrix::from_diagonal(&[1.0, 1.0, 0.0])).unwrap();
    write_symmetric(&e, &SymmetricMatrix::zeros(3)).unwrap();
    let args = ["contour-verify", "--matrix", a.to_str().unwrap(), "--noise", e.to_str().unwrap()];
    let (code, stdout, stderr) = run(&args);
    assert_eq!(code, EXIT_ASSERTIONS, "{stderr}");
    assert!(stdout.contains("error: eigenvalue gap"), "{stdout}");
    assert!(stderr.contains("assertion failure"));
}

#[test]
fn file_inputs_with_zero_noise_measure_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mtx");
    let e = dir.path().join("e.mtx");
    write_symmetric(&a, &SymmetricMatrix::from_diagonal(&[10.0, 8.0, 1.0, -2.0])).unwrap();
    write_symmetric(&e, &SymmetricMatrix::zeros(4)).unwrap();
    let cli = Cli::parse_from(["eigenbound", "bound-compare", "--matrix", a.to_str().unwrap(), "--noise", e.to_str().unwrap(), "--format", "json"]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run_with(&cli, &mut out, &mut err), EXIT_OK);
    let doc: Value = serde_json::from_slice(&out).unwrap();
    let rec = &doc["records"][0];
    assert_eq!(rec["measured"], 0.0);
    assert_eq!(rec["new_bound"], 0.0);
    let summary: Value = serde_json::from_slice(&err).unwrap();
    assert_eq!(summary["trials"], 1);
}

#[test]
fn seed_flags_shift_the_schedule() {
    let (_, a, _) = run(&["singular-rect", "--trials", "2", "--seed-base", "40"]);
    let (_, b, _) = run(&["singular-rect", "--trials", "2", "--seed-base", "40"]);
    let (_, c, _) = run(&["singular-rect", "--trials", "2", "--seed-base", "41"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.lines().nth(1).unwrap().starts_with("40,"));
}
