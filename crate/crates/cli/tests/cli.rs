//! End-to-end tests of the `vqls-heat` binary: artifact schemas, exit codes
//! and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vqls-heat"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .arg("--output-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

/// File bytes with the volatile timestamp line blanked.
fn stable_bytes(path: &Path) -> Vec<u8> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|line| !line.contains("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
        .into_bytes()
}

#[test]
fn solve_writes_result_json_with_contract_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--seed", "3", "solve", "test:c0=1,n=2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report = read_json(&dir.path().join("solve_test_c0_1_n_2.json"));
    for key in [
        "converged",
        "iterations",
        "cost_evaluations",
        "final_cost",
        "epsilon",
        "seed",
        "params",
        "trace",
        "optimizer",
    ] {
        assert!(report.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(report["converged"], Value::Bool(true));
    assert_eq!(report["seed"], Value::from(3));
    assert!(report["fidelity"].as_f64().unwrap() > 0.99);
    let trace = report["trace"].as_array().unwrap();
    assert_eq!(trace.len(), report["iterations"].as_u64().unwrap() as usize + 1);
    // The benchmark family gets no solution table.
    assert!(!dir.path().join("solution_test_c0_1_n_2.csv").exists());
}

#[test]
fn heat_solve_also_writes_solution_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["--seed", "7", "solve", "heat1d:n=3", "--epsilon", "0.05"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report = read_json(&dir.path().join("solve_heat1d_n_3.json"));
    assert!(report["fidelity"].as_f64().unwrap() >= 0.99);
    assert!(report["kappa"].as_f64().unwrap() > 30.0);

    let table = std::fs::read_to_string(dir.path().join("solution_heat1d_n_3.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("index,vqls,classical"));
    assert_eq!(lines.count(), 8, "one row per grid point");
}

#[test]
fn repeated_runs_are_byte_identical_modulo_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run_in(
            dir.path(),
            &["--seed", "7", "solve", "heat1d:n=3", "--epsilon", "0.05"],
        );
        assert!(out.status.success());
    }
    assert_eq!(
        stable_bytes(&a.path().join("solve_heat1d_n_3.json")),
        stable_bytes(&b.path().join("solve_heat1d_n_3.json"))
    );
    assert_eq!(
        std::fs::read(a.path().join("solution_heat1d_n_3.csv")).unwrap(),
        std::fs::read(b.path().join("solution_heat1d_n_3.csv")).unwrap()
    );
}

#[test]
fn decompose_prints_terms_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["decompose", "heat1d:n=3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("8 terms"), "{text}");
    // Known leading term of the tridiagonal system.
    assert!(text.contains("+2.000000000000  III"), "{text}");
}

#[test]
fn usage_problems_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["solve", "poisson:n=3"][..],
        &["solve", "heat1d"][..],
        &["solve", "heat1d:n=3", "--epsilon", "1.5"][..],
        &["sweep-epsilon", "test:c0=1,n=2", "--points", "0.3,0.3"][..],
        &["repro", "fig99"][..],
        &["--cost-mode", "shots:0", "solve", "test:c0=1,n=2"][..],
    ] {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn unconverged_solve_exits_3_but_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--seed",
            "1",
            "--max-iter",
            "3",
            "solve",
            "heat1d:n=3",
            "--restarts",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let report = read_json(&dir.path().join("solve_heat1d_n_3.json"));
    assert_eq!(report["converged"], Value::Bool(false));
    assert_eq!(report["restarts_used"], Value::from(2));
}

#[test]
fn epsilon_sweep_emits_schema_csv_and_provenance_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--seed",
            "11",
            "sweep-epsilon",
            "test:c0=1,n=2",
            "--points",
            "0.3,0.1,0.03",
            "--repetitions",
            "3",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("sweep_epsilon_test_c0_1_n_2.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "inv_epsilon_log10,mean_evals,std,n");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[3], "3", "all repetitions converge on the easy instance");
    }

    let json = read_json(&dir.path().join("sweep_epsilon_test_c0_1_n_2.json"));
    assert_eq!(json["kind"], "epsilon");
    assert_eq!(json["master_seed"], Value::from(11));
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    for record in records {
        assert_eq!(record["runs"].as_array().unwrap().len(), 3);
    }
    assert!(json["fit"]["r_squared"].as_f64().is_some());
}

#[test]
fn sweep_csv_matches_json_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--seed",
            "2",
            "sweep-shots",
            "test:c0=1,n=2",
            "--points",
            "100,200",
            "--repetitions",
            "2",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let json = read_json(&dir.path().join("sweep_shots_test_c0_1_n_2.json"));
    let csv = std::fs::read_to_string(dir.path().join("sweep_shots_test_c0_1_n_2.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "shots_log10,tv_log10,std,n");
    for (line, record) in lines[1..].iter().zip(json["records"].as_array().unwrap()) {
        let cells: Vec<&str> = line.split(',').collect();
        let mean = record["mean_metric"].as_f64().unwrap();
        let logged: f64 = cells[1].parse().unwrap();
        assert!((logged - mean.log10()).abs() < 1e-12);
    }
}

#[test]
fn format_flag_controls_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--seed",
            "2",
            "--format",
            "csv",
            "sweep-epsilon",
            "test:c0=1,n=2",
            "--points",
            "0.3,0.1",
            "--repetitions",
            "1",
        ],
    );
    assert!(out.status.success());
    assert!(dir.path().join("sweep_epsilon_test_c0_1_n_2.csv").exists());
    assert!(!dir.path().join("sweep_epsilon_test_c0_1_n_2.json").exists());
}

#[test]
fn config_file_supplies_defaults_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "seed = 5\nmax-iter = 40000\n").unwrap();
    let config_arg = config.to_str().unwrap();

    let out = run_in(
        dir.path(),
        &["--config", config_arg, "solve", "test:c0=1,n=2"],
    );
    assert!(out.status.success());
    let report = read_json(&dir.path().join("solve_test_c0_1_n_2.json"));
    assert_eq!(report["seed"], Value::from(5));
    assert_eq!(report["optimizer"]["max_iterations"], Value::from(40000));

    let out = run_in(
        dir.path(),
        &["--config", config_arg, "--seed", "3", "solve", "test:c0=1,n=2"],
    );
    assert!(out.status.success());
    let report = read_json(&dir.path().join("solve_test_c0_1_n_2.json"));
    assert_eq!(report["seed"], Value::from(3));

    std::fs::write(&config, "not-a-flag = 1\n").unwrap();
    let out = run_in(dir.path(), &["--config", config_arg, "solve", "test:c0=1,n=2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shot_mode_solve_converges_on_the_small_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--seed",
            "4",
            "--cost-mode",
            "shots:4000",
            "--max-iter",
            "600",
            "solve",
            "test:c0=1,n=2",
            "--epsilon",
            "0.3",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = read_json(&dir.path().join("solve_test_c0_1_n_2.json"));
    assert_eq!(report["optimizer"]["cost_mode"], "shots:4000");
}
