use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpmaps"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cpmaps-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, file: &str, text: &str) -> String {
    let p = dir.join(file);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn pinned_has_four_kraus_operators() {
    let v = json(&run(&["construct", "pinned", "--diag", "0.25", "0.75"]));
    assert_eq!(v["dim"], 2);
    assert_eq!(v["kraus"].as_array().unwrap().len(), 4);
}

#[test]
fn random_construction_is_deterministic() {
    let a = run(&["construct", "random", "--dim", "3", "--kraus", "2", "--seed", "9"]);
    let b = run(&["construct", "random", "--dim", "3", "--kraus", "2", "--seed", "9"]);
    let c = run(&["construct", "random", "--dim", "3", "--kraus", "2", "--seed", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn random_construction_needs_a_seed() {
    assert_eq!(code(&run(&["construct", "random", "--dim", "3", "--kraus", "2"])), 2);
}

#[test]
fn report_round_trip_is_byte_stable() {
    let dir = scratch("roundtrip");
    let ch = run(&["construct", "random", "--dim", "3", "--kraus", "3", "--seed", "4"]);
    assert!(ch.status.success());
    let ch_path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let report = run(&["analyze", &ch_path, "--seed", "1", "--trials", "50"]);
    let report_path = write(&dir, "report.json", std::str::from_utf8(&report.stdout).unwrap());
    let back = run(&["construct", "from-report", &report_path]);
    assert!(back.status.success());
    assert_eq!(back.stdout, ch.stdout);
}

#[test]
fn pinching_is_not_ergodic() {
    let dir = scratch("pinching");
    let ch = run(&["construct", "projective", "--dim", "3"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let v = json(&run(&["analyze", &path, "--seed", "2", "--trials", "100"]));
    assert_eq!(v["classification"]["ergodic"]["verdict"], "refuted");
    assert_eq!(v["classification"]["positive"]["verdict"], "pass");
}

#[test]
fn pauli_semigroup_stays_under_its_bound() {
    let dir = scratch("semigroup");
    let ch = run(&["construct", "group", "--pauli"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let b = write(&dir, "b.json", r#"{"diag": [0.9, 0.1]}"#);
    let v = json(&run(&["evolve", "semigroup", &path, "--initial", &b, "--points", "20"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows {
        let (d, bound) = (r["distance"].as_f64().unwrap(), r["bound"].as_f64().unwrap());
        assert!(d <= bound + 1e-12, "{d} > {bound}");
    }
    assert_eq!(v["rate"]["bound_satisfied"], true);
}

#[test]
fn discrete_iteration_converges_for_pinned() {
    let dir = scratch("discrete");
    let ch = run(&["construct", "pinned", "--diag", "0.4", "0.6"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let b = write(&dir, "b.json", r#"{"diag": [1, 0]}"#);
    let v = json(&run(&["evolve", "discrete", &path, "--initial", &b, "--steps", "3", "--norm", "inf"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[1]["distance"].as_f64().unwrap() < 1e-12);
}

#[test]
fn malformed_input_exits_2() {
    let dir = scratch("malformed");
    let bad = write(&dir, "bad.json", "{ not json");
    let missing = write(&dir, "missing.json", r#"{"dim": 2}"#);
    assert_eq!(code(&run(&["spectrum", &bad])), 2);
    let out = run(&["spectrum", &missing]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("kraus"));
}

#[test]
fn oversized_dimension_exits_3() {
    assert_eq!(code(&run(&["construct", "projective", "--dim", "17"])), 3);
    assert_eq!(code(&run(&["construct", "random", "--dim", "20", "--kraus", "1", "--seed", "1"])), 3);
}

#[test]
fn invalid_parameters_exit_4() {
    assert_eq!(code(&run(&["construct", "pinned", "--diag", "0.5", "0.6"])), 4);
    assert_eq!(code(&run(&["construct", "pinned", "--diag", "1", "0"])), 4);
    assert_eq!(code(&run(&["construct", "weighted", "--profile", "1", "1"])), 4);
}

#[test]
fn semigroup_on_non_self_adjoint_map_exits_5() {
    let dir = scratch("nonsa");
    let ch = run(&["construct", "pinned", "--diag", "0.25", "0.75"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let b = write(&dir, "b.json", r#"{"diag": [1, 0]}"#);
    assert_eq!(code(&run(&["evolve", "semigroup", &path, "--initial", &b])), 5);
}

#[test]
fn verify_passing_property_exits_0() {
    let v = json(&run(&["verify", "--property", "holder", "--trials", "50", "--seed", "1", "--dims", "2", "3"]));
    assert_eq!(v["total_violations"], 0);
    assert!(v["witness_file"].is_null());
}

#[test]
fn verify_unknown_property_exits_2() {
    assert_eq!(code(&run(&["verify", "--property", "no_such_thing", "--seed", "1"])), 2);
}

#[test]
fn verify_violations_write_witnesses_and_exit_1() {
    let dir = scratch("witness");
    let wf = dir.join("w.json");
    let out = run(&[
        "verify",
        "--property",
        "abs_domination",
        "--trials",
        "300",
        "--seed",
        "1",
        "--witness-file",
        wf.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let n = report["total_violations"].as_u64().unwrap();
    assert!(n > 0);
    let witnesses: Value = serde_json::from_str(&std::fs::read_to_string(&wf).unwrap()).unwrap();
    assert_eq!(witnesses.as_array().unwrap().len() as u64, n);
}

#[test]
fn singular_pinned_state_exits_4() {
    let out = run(&["construct", "pinned", "--diag", "0.5", "0.5", "0"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn explicit_time_grid_is_used_verbatim() {
    let dir = scratch("times");
    let ch = run(&["construct", "group", "--pauli"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let b = write(&dir, "b.json", r#"{"diag": [1, 0]}"#);
    let v = json(&run(&["evolve", "semigroup", &path, "--initial", &b, "--times", "0", "2.5", "5", "10"]));
    let ts: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["t"].as_f64().unwrap()).collect();
    assert_eq!(ts, vec![0.0, 2.5, 5.0, 10.0]);
}

#[test]
fn pinned_spectrum_is_one_then_zeros() {
    let dir = scratch("spectrum");
    let ch = run(&["construct", "pinned", "--diag", "0.25", "0.75"]);
    let path = write(&dir, "ch.json", std::str::from_utf8(&ch.stdout).unwrap());
    let v = json(&run(&["spectrum", &path]));
    let eig = v["eigenvalues"].as_array().unwrap();
    assert!((eig[0][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(eig[1..].iter().all(|z| z[0].as_f64().unwrap().abs() < 1e-10));
    assert!((v["fixed_point"]["re"][3].as_f64().unwrap() - 0.75).abs() < 1e-10);
}

#[test]
fn out_flag_writes_file() {
    let dir = scratch("out");
    let target = dir.join("ch.json");
    let out = run(&["construct", "group", "--weyl", "3", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["kraus"].as_array().unwrap().len(), 9);
}
