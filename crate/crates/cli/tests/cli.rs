use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_safescreen"))
}

fn write_config(dir: &Path, name: &str, cfg: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary_field(line: &str, key: &str) -> String {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in {line}"))
        .to_string()
}

fn simplex_config(trace: &Path) -> Value {
    json!({
        "problem": {"kind": "simplex_ls"},
        "data": {"synthetic": {"d": 300, "n": 60, "support": 7, "noise_sigma": 0.0, "seed": 0}},
        "solver": {"gap_tol": 1e-7},
        "output": {"trace": trace.to_str().unwrap()}
    })
}

fn lasso_config(extra_solver: Value) -> Value {
    let mut solver = json!({"gap_tol": 1e-7, "screening_period": 1});
    solver.as_object_mut().unwrap().extend(extra_solver.as_object().unwrap().clone());
    json!({
        "problem": {"kind": "lasso", "lambda": 40.0},
        "data": {"synthetic": {"d": 120, "n": 60, "support": 6, "noise_sigma": 0.1, "seed": 4}},
        "solver": solver
    })
}

#[test]
fn solve_simplex_reaches_gap() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let cfg = write_config(dir.path(), "cfg.json", &simplex_config(&trace));
    let out = run(&["solve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("iter,elapsed_ms,primal,gap,wolfe_gap,n_active,n_fixed_zero,n_fixed_upper\n"));
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert!(last[3].parse::<f64>().unwrap() <= 1e-7);
    let line = stdout(&out);
    assert_eq!(summary_field(&line, "converged"), "true");
    assert!(line.contains("active="));
}

#[test]
fn unknown_kind_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        &json!({"problem": {"kind": "ridge"}, "data": {"synthetic": {"d": 5, "n": 3}}}),
    );
    let out = run(&["solve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown problem.kind"));
}

#[test]
fn missing_parameter_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        &json!({"problem": {"kind": "lasso"}, "data": {"synthetic": {"d": 5, "n": 3}}}),
    );
    let out = run(&["solve", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("problem.lambda"));
}

#[test]
fn missing_file_and_bad_json_exit_2() {
    assert_eq!(run(&["solve", "/nonexistent/cfg.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"problem\": ").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn screening_toggle_keeps_primal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.json", &lasso_config(json!({"gap_tol": 1e-10})));
    let on = run(&["solve", cfg.to_str().unwrap()]);
    let off = run(&["solve", cfg.to_str().unwrap(), "--no-screening"]);
    assert_eq!(on.status.code(), Some(0));
    assert_eq!(off.status.code(), Some(0));
    let p = |o: &Output| summary_field(&stdout(o), "primal").parse::<f64>().unwrap();
    assert!((p(&on) - p(&off)).abs() <= 1e-8);
    let n = summary_field(&stdout(&off), "active");
    assert_eq!(n, "60/60");
}

#[test]
fn seed_override_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut traces = Vec::new();
    for (i, seed) in ["3", "3", "4"].iter().enumerate() {
        let trace = dir.path().join(format!("t{i}.csv"));
        let cfg = write_config(dir.path(), &format!("c{i}.json"), &simplex_config(&trace));
        let out = run(&["solve", cfg.to_str().unwrap(), "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&trace).unwrap();
        let stripped: Vec<String> = text
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(1);
                f.join(",")
            })
            .collect();
        traces.push(stripped);
    }
    assert_eq!(traces[0], traces[1]);
    assert_ne!(traces[0], traces[2]);
}

#[test]
fn verify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_config(dir.path(), "ok.json", &lasso_config(json!({})));
    let out = run(&["verify", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_ne!(summary_field(&stdout(&out), "fixed"), "0");
    assert_eq!(summary_field(&stdout(&out), "violations"), "0");

    let loose = write_config(dir.path(), "loose.json", &lasso_config(json!({"debug_loosen": true})));
    let out = run(&["verify", loose.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation iter="));

    let vacuous = write_config(
        dir.path(),
        "vacuous.json",
        &lasso_config(json!({"gap_tol": 1e12, "screening_enabled": false})),
    );
    let out = run(&["verify", vacuous.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(summary_field(&stdout(&out), "fixed"), "0");
}

#[test]
fn verify_rejects_file_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        &json!({"problem": {"kind": "lasso", "lambda": 1.0}, "data": {"path": "x.svm"}}),
    );
    assert_eq!(run(&["verify", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn compare_writes_trace_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trajectory.csv");
    let timing = dir.path().join("timing.csv");
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        &json!({
            "problem": {"kind": "l1_ls", "radius": 3.5},
            "data": {"synthetic": {"d": 300, "n": 60, "support": 7, "seed": 1}},
            "solver": {"gap_tol": 1e-7, "screening_period": 1},
            "output": {"trace": trace.to_str().unwrap(), "timing": timing.to_str().unwrap()}
        }),
    );
    let out = run(&["compare", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("first_fire_simplex="));
    assert!(text.lines().any(|l| l.starts_with("variant")));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("iter,gap,active_frac_l1,active_frac_simplex\n"));
    let t = std::fs::read_to_string(&timing).unwrap();
    assert_eq!(t.lines().count(), 5);

    let lasso = write_config(dir.path(), "lasso.json", &lasso_config(json!({})));
    assert_eq!(run(&["compare", lasso.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn compare_without_screening_keeps_fractions_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trajectory.csv");
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        &json!({
            "problem": {"kind": "l1_ls", "radius": 3.5},
            "data": {"synthetic": {"d": 100, "n": 30, "support": 3, "seed": 2}},
            "output": {"trace": trace.to_str().unwrap()}
        }),
    );
    let out = run(&["compare", cfg.to_str().unwrap(), "--no-screening"]);
    assert_eq!(out.status.code(), Some(0));
    for line in std::fs::read_to_string(&trace).unwrap().lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!((f[2], f[3]), (1.0, 1.0));
    }
}

#[test]
fn config_reference_lists_every_kind() {
    let out = run(&["config-reference"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for kind in ["simplex_ls", "l1_ls", "elastic_ball_ls", "box_svm_hinge", "sq_hinge_svm", "meb", "lasso", "elastic_net", "group_lasso", "logistic_l1"] {
        assert!(text.contains(kind), "{kind}");
    }
}
