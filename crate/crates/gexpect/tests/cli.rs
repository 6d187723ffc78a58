//! End-to-end tests of the `gexpect` binary: flag and config dispatch,
//! output schemas, and exit-code classes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gexpect"))
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn expect_task_from_flags_degenerate_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("expect.json");
    let status = bin()
        .args([
            "--task",
            "expect",
            "--band-low",
            "0",
            "--band-high",
            "1",
            "--t",
            "1",
            "--payoff",
            "min(x1,0)",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let v = read_json(&out);
    assert_eq!(v["task"], "expect");
    assert_eq!(v["schema_version"], 1);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!(value.abs() <= 1e-3, "value {value}");
    // Metadata echoes the full configuration.
    assert_eq!(v["meta"]["config"]["band"]["sigma_high"], 1.0);
    assert_eq!(v["meta"]["config"]["task"]["payoff"], "min(x1, 0)");
}

#[test]
fn expect_task_square_payoff() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sq.json");
    let status = bin()
        .args([
            "--task",
            "expect",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--payoff",
            "pow(x1,2)",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let value = read_json(&out)["result"]["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() <= 5e-3, "value {value}");
}

#[test]
fn malformed_payoff_exits_with_parser_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let output = bin()
        .args([
            "--task",
            "expect",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--payoff",
            "min(x1,",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("syntax error"), "stderr: {stderr}");
}

#[test]
fn missing_seed_for_mc_task_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let output = bin()
        .args([
            "--task",
            "counterexample",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn solve_task_emits_csv_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("field.csv");
    let status = bin()
        .args([
            "--task",
            "solve",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "0.5",
            "--payoff",
            "max(0, 1 - abs(x1))",
            "--format",
            "csv",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# gexpect solve"));
    let header = lines.find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,x,u");
    // initial and terminal snapshots
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert!(rows > 800, "rows {rows}");
}

#[test]
fn simulate_task_emits_ensemble_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("paths.csv");
    let config = serde_json::json!({
        "schema_version": 1,
        "band": {"sigma_low": 0.5, "sigma_high": 1.0},
        "task": {
            "kind": "simulate",
            "policy": {"kind": "constant", "sigma": 0.5},
            "horizon": 1.0,
            "mc": {"n_paths": 50, "n_steps": 1000, "seed": 7}
        },
        "output": {"path": out, "format": "csv"}
    });
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    let status = bin().arg("--config").arg(&cfg_path).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "path,B_T,qv_T");
    // Constant sigma_low = 0.5: qv column is exactly 0.25 on every path.
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let qv = line.split(',').nth(2).unwrap();
        assert_eq!(qv, "0.25");
    }
}

#[test]
fn compare_task_reports_verdict_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verdict.json");
    let config = serde_json::json!({
        "schema_version": 1,
        "band": {"sigma_low": 0.5, "sigma_high": 1.0},
        "task": {
            "kind": "compare",
            "payoff_lo": "min(x1, 0)",
            "payoff_hi": "0",
            "times": [1.0],
            "tolerance": 1e-3
        },
        "output": {"path": out, "format": "json"}
    });
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let status = bin().arg("--config").arg(&cfg_path).status().unwrap();
    assert!(status.success());
    let v = read_json(&out);
    let verdict = &v["result"]["verdict"];
    for field in ["value_lo", "value_hi", "gap", "tolerance", "verdict"] {
        assert!(!verdict[field].is_null(), "missing field {field}");
    }
    assert_eq!(verdict["verdict"], "StrictLess");
    assert!(v["result"]["witness"].is_array());
}

#[test]
fn compare_task_order_violation_exits_with_precondition_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let config = serde_json::json!({
        "schema_version": 1,
        "band": {"sigma_low": 0.5, "sigma_high": 1.0},
        "task": {
            "kind": "compare",
            "payoff_lo": "0",
            "payoff_hi": "min(x1, 0)",
            "times": [1.0]
        },
        "output": {"path": out, "format": "json"}
    });
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let output = bin().arg("--config").arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("order violated"), "stderr: {stderr}");
}

#[test]
fn capacity_task_with_degenerate_mollifier_exits_with_precondition_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let config = serde_json::json!({
        "schema_version": 1,
        "band": {"sigma_low": 0.5, "sigma_high": 1.0},
        "task": {
            "kind": "capacity",
            "a": -0.05, "b": 0.05, "t": 1.0, "epsilon": 0.1,
            "mc": {"n_paths": 100, "n_steps": 100, "seed": 3}
        },
        "output": {"path": out, "format": "json"}
    });
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let output = bin().arg("--config").arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn counterexample_task_reports_all_legs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ce.json");
    let status = bin()
        .args([
            "--task",
            "counterexample",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--seed",
            "11",
            "--n-paths",
            "2000",
            "--n-steps",
            "500",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let v = read_json(&out);
    let r = &v["result"];
    assert_eq!(r["capacity_event_lower"], 1.0);
    assert_eq!(r["refutation_prob_high"], 0.0);
    assert_eq!(r["strict_hypothesis_refuted"], true);
}

#[test]
fn csv_format_for_scalar_task_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let output = bin()
        .args([
            "--task",
            "expect",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--payoff",
            "x1",
            "--format",
            "csv",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unwritable_output_path_exits_with_io_class() {
    let output = bin()
        .args([
            "--task",
            "expect",
            "--band-low",
            "0.5",
            "--band-high",
            "1",
            "--t",
            "1",
            "--payoff",
            "x1",
            "--out",
            "/nonexistent-dir/x.json",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn cfl_violation_exits_with_numerical_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let config = serde_json::json!({
        "schema_version": 1,
        "band": {"sigma_low": 0.5, "sigma_high": 1.0},
        "task": {
            "kind": "solve",
            "payoff": "min(x1, 0)",
            "t": 1.0,
            "grid": {"x_min": -4.0, "x_max": 4.0, "n_space": 101, "cfl_safety": 1.5}
        },
        "output": {"path": out, "format": "json"}
    });
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let output = bin().arg("--config").arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("CFL"), "stderr: {stderr}");
}
