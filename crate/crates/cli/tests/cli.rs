use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn symqent() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symqent"));
    cmd.env_remove("SYMQENT_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    symqent().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(out)).expect("valid JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn catalog_file(dir: &Path, args: &[&str]) -> PathBuf {
    let mut all = vec!["catalog"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success());
    write(dir, &format!("{}.json", args.join("_").replace(['-', ','], "m")), &stdout(&out))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_emits_explicit_state() {
    let v = json(&run(&["catalog", "ghz", "--n", "3"]));
    assert_eq!(v["n"], 3);
    let d = v["dicke"].as_array().unwrap();
    assert_eq!(d.len(), 4);
    let half = 0.5f64.sqrt();
    assert!((d[0][0].as_f64().unwrap() - half).abs() < 1e-15);
    assert!((d[3][0].as_f64().unwrap() - half).abs() < 1e-15);
}

#[test]
fn analyze_tetrahedron() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(dir.path(), &["tetrahedron", "--n", "4"]);
    let v = json(&run(&["analyze", path_str(&f)]));
    assert_eq!(v["mes"]["is_mes"], true);
    assert_eq!(v["anticoherence_order"], 2);
    assert!(v["dipole_norm"].as_f64().unwrap() < 1e-11);
    assert_eq!(v["configuration"], "D_{1,1,1,1}");
}

#[test]
fn named_state_file_is_accepted() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s.json", r#"{"named": "dicke", "n": 4, "params": [[2, 0]]}"#);
    let v = json(&run(&["reduce", path_str(&f), "--t", "2"]));
    assert_eq!(v["t"], 2);
    let m = v["matrix"].as_array().unwrap();
    assert!((m[1][1][0].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn canonicalize_ghz4_and_reject_dicke() {
    let dir = TempDir::new().unwrap();
    let ghz = catalog_file(dir.path(), &["ghz", "--n", "4"]);
    let v = json(&run(&["canonicalize4", path_str(&ghz)]));
    let mu = v["mu"].as_array().unwrap();
    assert!(mu[0].as_f64().unwrap().abs() < 1e-9 && mu[1].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["in_S"], true);

    let dicke = catalog_file(dir.path(), &["dicke", "--n", "4", "--param", "1"]);
    let out = run(&["canonicalize4", path_str(&dicke)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotGenericState"));
}

#[test]
fn canonicalize_psi_mu_and_negative_parameters() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(dir.path(), &["psi_mu", "--n", "4", "--param", "0.3,0.4"]);
    let v = json(&run(&["canonicalize4", path_str(&f)]));
    let mu = v["mu"].as_array().unwrap();
    assert!((mu[0].as_f64().unwrap() - 0.3).abs() < 1e-9);
    assert!((mu[1].as_f64().unwrap() - 0.4).abs() < 1e-9);
    let out = run(&["catalog", "p_n_alpha", "--n", "5", "--param", "-1.2"]);
    assert!(out.status.success());
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(run(&["analyze", path_str(&bad)]).status.code(), Some(2));
    let zero = write(dir.path(), "zero.json", r#"{"n": 2, "dicke": [[0,0],[0,0],[0,0]]}"#);
    assert_eq!(run(&["analyze", path_str(&zero)]).status.code(), Some(2));
    let short = write(dir.path(), "short.json", r#"{"n": 3, "dicke": [[1,0]]}"#);
    assert_eq!(run(&["measures", path_str(&short)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["analyze", path_str(&missing)]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "nope", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_detects_faults() {
    let out = run(&["verify", "--nmax", "5", "--samples", "3"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);

    let out = run(&["verify", "--nmax", "4", "--samples", "2", "--inject-fault"]);
    assert_ne!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);

    let out = run(&["verify", "--nmax", "20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_text_report() {
    let out = run(&["--format", "text", "verify", "--nmax", "4", "--samples", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn husimi_csv() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(dir.path(), &["ghz", "--n", "3"]);
    let out = run(&["husimi", path_str(&f), "--ntheta", "5", "--nphi", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,phi,H"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let h: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&h));
    }

    let csv = dir.path().join("h.csv");
    let v = json(&run(&["husimi", path_str(&f), "--ntheta", "3", "--nphi", "3", "--out", path_str(&csv)]));
    assert_eq!(v["rows"], 9);
    assert!(fs::read_to_string(csv).unwrap().starts_with("theta,phi,H\n"));
}

#[test]
fn measures_report() {
    let dir = TempDir::new().unwrap();
    let t4 = catalog_file(dir.path(), &["tetrahedron", "--n", "4"]);
    let v = json(&run(&["measures", path_str(&t4)]));
    for key in ["E_G", "argmax", "E_B", "tau_N", "mes", "anticoherence_order"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["E_G"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-8);
    assert!((v["E_B"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["tau_N"].as_f64().unwrap().abs() < 1e-12);

    let odd = catalog_file(dir.path(), &["ghz", "--n", "3"]);
    let v = json(&run(&["measures", path_str(&odd)]));
    assert!(v["tau_N"].is_null());
}

#[test]
fn majorana_roots() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(dir.path(), &["dicke", "--n", "3", "--param", "0"]);
    let v = json(&run(&["majorana", path_str(&f)]));
    assert_eq!(v["configuration"], "D_{3}");
    assert_eq!(v["diversity"], 1);
    assert_eq!(v["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    // slightly perturbed GHZ: MES only under a loose tolerance
    let f = write(dir.path(), "s.json", r#"{"n": 2, "dicke": [[1,0],[0,0],[1.001,0]]}"#);
    let strict = json(&run(&["measures", path_str(&f)]));
    assert_eq!(strict["mes"], false);
    let out = symqent().env("SYMQENT_TOL", "1e-2").args(["measures", path_str(&f)]).output().unwrap();
    assert_eq!(json(&out)["mes"], true);
    let out = symqent().env("SYMQENT_TOL", "abc").args(["measures", path_str(&f)]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(dir.path(), &["p_n", "--n", "6"]);
    for cmd in ["analyze", "measures", "majorana"] {
        let a = stdout(&run(&[cmd, path_str(&f)]));
        let b = stdout(&run(&[cmd, path_str(&f)]));
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn state_json_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let first = catalog_file(dir.path(), &["psi_mu", "--n", "4", "--param", "0.1,0.7"]);
    let text = fs::read_to_string(&first).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = write(dir.path(), "again.json", &serde_json::to_string(&v).unwrap());
    let a = stdout(&run(&["reduce", path_str(&first), "--t", "2"]));
    let b = stdout(&run(&["reduce", path_str(&again), "--t", "2"]));
    assert_eq!(a, b);
}
