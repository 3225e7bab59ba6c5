//! End-to-end runs of the `modnuc` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modnuc(args: &[&str]) -> Output {
    modnuc_env(args, &[])
}

fn modnuc_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_modnuc"));
    cmd.args(args).env_remove("NUCLEARITY_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn car_report_lists_residuals() {
    let out = modnuc(&["verify", "car", "--modes", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["tool"], "modnuc");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["status"], "ok");
    assert_eq!(r["config"]["parameters"]["modes"], 3);
    assert_eq!(r["config"]["parameters"]["trials"], 100);
    let residual = r["results"]["metrics"]["car_mixed_residual"].as_f64().unwrap();
    assert!(residual <= 1e-12);
}

#[test]
fn fermi_bose_gap_is_positive() {
    let out = modnuc(&["fermi-bose", "--trials", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    let gap = r["results"]["metrics"]["min_bose_minus_fermi"].as_f64().unwrap();
    assert!(gap > 0.0);
}

#[test]
fn right_wedge_is_a_named_violation() {
    let out = modnuc(&["ising", "--x0", "0", "--x1", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["violations"], serde_json::json!(["wedge_condition"]));
    assert!(stderr(&out).contains("wedge_condition"));
}

#[test]
fn coarse_grid_is_not_converged() {
    let out = modnuc(&["ising", "--n-points", "10"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert_eq!(report(&out)["status"], "not_converged");
}

#[test]
fn malformed_input_exits_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "masss = 1.0\n").unwrap();
    for args in [
        vec!["--config", cfg.to_str().unwrap(), "ising"],
        vec!["ising", "--basis", "65"],
        vec!["verify", "car", "--modes", "many"],
        vec!["teleport"],
        vec!["--config", "/nonexistent/run.toml", "intersect"],
        vec!["verify", "car", "--modes", "2", "--csv", dir.path().to_str().unwrap()],
    ] {
        let out = modnuc(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&out).trim_end().lines().count(), 1, "{args:?}: {}", stderr(&out));
    }
    let out = modnuc_env(&["intersect"], &[("NUCLEARITY_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_values_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "modes = 2\ntrials = 7\nseed = 11\n").unwrap();
    let out = modnuc(&["--config", cfg.to_str().unwrap(), "verify", "car", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let p = &report(&out)["config"]["parameters"];
    assert_eq!((p["modes"].as_u64(), p["trials"].as_u64(), p["seed"].as_u64()), (Some(2), Some(3), Some(11)));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["bound", "--instances", "12", "--modes", "4", "--samples", "8", "--seed", "5"];
    let a = modnuc_env(&args, &[("NUCLEARITY_THREADS", "1")]);
    let b = modnuc_env(&args, &[("NUCLEARITY_THREADS", "3")]);
    let c = modnuc(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn output_file_and_csv_tables() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let tables = dir.path().join("tables");
    let out = modnuc(&[
        "energy",
        "--beta",
        "2",
        "--output",
        json.to_str().unwrap(),
        "--csv",
        tables.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let sigma = r["results"]["report"]["sigma_phi"].as_array().unwrap().clone();
    let csv = std::fs::read_to_string(tables.join("sigma_phi.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,value"));
    for (i, line) in lines.enumerate() {
        let (idx, value) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        assert_eq!(value.parse::<f64>().unwrap(), sigma[i].as_f64().unwrap());
    }
    for name in ["sigma_pi.csv", "t_values.csv"] {
        assert!(Path::new(&tables.join(name)).exists());
    }
}

#[test]
fn golden_fixture_reproduces() {
    let out = modnuc(&["golden", "check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["passed"], true);
}

#[test]
fn golden_write_then_check_a_copy() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("golden.json");
    let f = fixture.to_str().unwrap();
    assert_eq!(modnuc(&["golden", "write", "--fixture", f]).status.code(), Some(0));
    let written = std::fs::read_to_string(&fixture).unwrap();
    let shipped = std::fs::read_to_string(modnuc_cli::config::default_fixture()).unwrap();
    assert_eq!(written, shipped);

    let mut doctored: Value = serde_json::from_str(&written).unwrap();
    doctored["modular"]["values"]["trace_phi"] = serde_json::json!(0.2);
    std::fs::write(&fixture, serde_json::to_string(&doctored).unwrap()).unwrap();
    let out = modnuc(&["golden", "check", "--fixture", f]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["violations"], serde_json::json!(["modular.trace_phi"]));
}

#[test]
fn help_and_version_exit_zero() {
    let out = modnuc(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("NUCLEARITY_THREADS"));
    assert_eq!(modnuc(&["--version"]).status.code(), Some(0));
}
