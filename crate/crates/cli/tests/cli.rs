use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mubw(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubw"))
        .args(args)
        .current_dir(dir)
        .env_remove("MUBW_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_small_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["verify", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("probabilities [0.000000000000, 0.500000000000, 0.500000000000]"));
    assert!(!stdout(&o).contains("FAIL"));

    let o = mubw(dir.path(), &["verify", "--d", "11", "--out", "r11.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = json(&dir.path().join("r11.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["d"], 11);
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["name"] == "state.moyal_idempotence"));
}

#[test]
fn verify_formats() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["verify", "--d", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["zero_count"], 1);
    let o = mubw(dir.path(), &["verify", "--d", "7", "--format", "csv"]);
    assert!(stdout(&o).starts_with("check,residual,tolerance,passed\n"));
}

#[test]
fn impossible_tolerance_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["verify", "--d", "7", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("failed checks"));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn moyal_cap_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["verify", "--d", "7", "--max-moyal-d", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let skipped: Vec<&str> = v["skipped"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert!(skipped.contains(&"state.moyal_idempotence"));
}

#[test]
fn out_of_scope_dimensions_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for d in ["5", "9", "13", "25"] {
        let o = mubw(dir.path(), &["build", "--d", d]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("d ≡ 1 (mod 4) not supported by this construction"), "{}", stderr(&o));
    }
    for d in ["6", "10"] {
        let o = mubw(dir.path(), &["verify", "--d", d]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("not a prime power"));
    }
    let o = mubw(dir.path(), &["verify", "--d", "8"]);
    assert_eq!(o.status.code(), Some(2));
    // conflicting and missing flags
    assert_eq!(mubw(dir.path(), &["verify", "--d", "7", "--r", "7", "--n", "1"]).status.code(), Some(2));
    assert_eq!(mubw(dir.path(), &["verify", "--r", "7"]).status.code(), Some(2));
    assert_eq!(mubw(dir.path(), &["verify"]).status.code(), Some(2));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn build_writes_state_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["build", "--d", "7", "--out", "s7.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let state = json(&dir.path().join("s7.json"));
    assert_eq!(state["d"], 7);
    assert_eq!(state["psi"].as_array().unwrap().len(), 7);
    assert_eq!(state["psi"][0], 0.0);
    let csv = fs::read_to_string(dir.path().join("s7.wigner.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "q,0,1,2,3,4,5,6");
    assert!(!csv.contains('\r'));

    let o = mubw(dir.path(), &["build", "--d", "7", "--out", "s7j.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let grid = json(&dir.path().join("s7j.wigner.json"));
    assert_eq!(grid["d"], 7);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let out = format!("{name}.json");
        assert!(mubw(dir.path(), &["build", "--d", "19", "--out", &out]).status.success());
        let hist = format!("{name}.csv");
        assert!(mubw(dir.path(), &["histogram", "--d", "19", "--bins", "20", "--out", &hist]).status.success());
        let mubs = format!("{name}.mubs.json");
        assert!(mubw(dir.path(), &["mubs", "--d", "7", "--out", &mubs]).status.success());
    }
    let threaded = ["--threads", "1", "build", "--d", "19", "--out", "c.json"];
    assert!(mubw(dir.path(), &threaded).status.success());
    for (x, y) in [
        ("a.json", "b.json"),
        ("a.json", "c.json"),
        ("a.wigner.csv", "b.wigner.csv"),
        ("a.wigner.csv", "c.wigner.csv"),
        ("a.csv", "b.csv"),
        ("a.fit.json", "b.fit.json"),
        ("a.mubs.json", "b.mubs.json"),
    ] {
        let (x, y) = (fs::read(dir.path().join(x)).unwrap(), fs::read(dir.path().join(y)).unwrap());
        assert_eq!(x, y);
    }
}

#[test]
fn gf27_reports_its_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["build", "--d", "27", "--out", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("modulus [1, 0, 2, 1]"));
    assert_eq!(json(&dir.path().join("s.json"))["modulus"], serde_json::json!([1, 0, 2, 1]));

    let o = mubw(dir.path(), &["build", "--r", "3", "--n", "3", "--modulus", "1,2,0,1", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("t.json"))["modulus"], serde_json::json!([1, 2, 0, 1]));

    // x³ + x + 1 has the root 1 over Z₃
    let o = mubw(dir.path(), &["build", "--r", "3", "--n", "3", "--modulus", "1,1,0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn histogram_d3_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["histogram", "--d", "3", "--bins", "10", "--out", "h.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("power of 3: semicircle fit skipped"));
    assert!(stdout(&o).contains("wall time"));
    let csv = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    let counts: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // 0 and ±√1.5 on a 0.42-wide grid over [−2.1, 2.1]
    assert_eq!(counts, [0, 0, 1, 0, 0, 1, 0, 1, 0, 0]);
    let fit = json(&dir.path().join("h.fit.json"));
    assert_eq!(fit["fit"], Value::Null);
    assert!(!fs::read_to_string(dir.path().join("h.fit.json")).unwrap().contains("wall"));
}

#[test]
fn histogram_fit_for_prime() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["histogram", "--d", "1019", "--bins", "40", "--out", "h.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let fit = json(&dir.path().join("h.fit.json"));
    let beta = fit["fit"]["beta"].as_f64().unwrap();
    assert!((beta - 2.0 / 1019f64.sqrt()).abs() < 1e-15);
    assert!(fit["max_abs_component"].as_f64().unwrap() <= 2.0);
    let h = json(&dir.path().join("h.json"));
    let total: u64 = h["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 1019);
}

#[test]
fn mubs_allow_any_odd_prime_power() {
    let dir = tempfile::tempdir().unwrap();
    let o = mubw(dir.path(), &["mubs", "--d", "9", "--out", "m.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&dir.path().join("m.json"));
    assert_eq!(v["bases"].as_array().unwrap().len(), 10);
    assert_eq!(v["bases"][0]["slope"], "inf");
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mubw"))
        .args(["verify", "--d", "7"])
        .current_dir(dir.path())
        .env("MUBW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_mubw"))
        .args(["verify", "--d", "7"])
        .env("MUBW_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
