//! End-to-end runs of the `ptqm` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use ptqm::evolution::BrachRecord;
use ptqm::io;
use ptqm::linalg::{ComplexMatrix, C64};

fn ptqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptqm"))
        .args(args)
        .env_remove("PTQM_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_matrix(dir: &Path, name: &str, rows: &[&[(f64, f64)]]) -> PathBuf {
    let n = rows.len();
    let m = ComplexMatrix::from_fn(n, |i, j| C64::new(rows[i][j].0, rows[i][j].1));
    let path = dir.join(name);
    io::save_matrix(&path, &m).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn accept_identity_has_identity_metric() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "id.json",
        &[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (1.0, 0.0)]],
    );
    let out = ptqm(&["accept", "--h", arg(&h)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "accepted");
    let metric: ComplexMatrix = serde_json::from_value(report["metric"].clone()).unwrap();
    assert!(metric.distance(&ComplexMatrix::identity(2)) < 1e-12);
}

#[test]
fn jordan_block_is_rejected() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(1.0, 0.0), (0.0, 5.0)], &[(0.0, 0.0), (1.0, 0.0)]],
    );
    let p = write_matrix(
        dir.path(),
        "p.json",
        &[&[(1.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]],
    );

    let out = ptqm(&["accept", "--h", arg(&h)]);
    assert_eq!(code(&out), 2);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "rejected");
    assert_eq!(report["diagonalizable"], false);

    let out = ptqm(&["hermitize", "--h", arg(&h)]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout_json(&out)["verdict"], "rejected");

    let out = ptqm(&["check-pt", "--h", arg(&h), "--p", arg(&p)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["satisfies"], true);
}

#[test]
fn check_pt_detects_broken_symmetry() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(1.0, 0.0), (2.0, 0.0)], &[(0.0, 0.0), (3.0, 0.0)]],
    );
    let p = write_matrix(
        dir.path(),
        "p.json",
        &[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]],
    );
    let out = ptqm(&["check-pt", "--h", arg(&h), "--p", arg(&p)]);
    assert_eq!(code(&out), 2);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["satisfies"], false);
    assert!(verdict["residual"].as_f64().unwrap() > 1.0);
}

#[test]
fn hermitize_accepted_pt_matrix() {
    let dir = TempDir::new().unwrap();
    // Eigenvalues 2 ± √(1 − 0.25).
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(2.0, 0.5), (1.0, 0.0)], &[(1.0, 0.0), (2.0, -0.5)]],
    );
    let out = ptqm(&["hermitize", "--h", arg(&h)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bundle = stdout_json(&out);
    let h_herm: ComplexMatrix = serde_json::from_value(bundle["h_herm"].clone()).unwrap();
    let root = 0.75f64.sqrt();
    assert!((h_herm[(0, 0)].re - (2.0 - root)).abs() < 1e-10);
    assert!((h_herm[(1, 1)].re - (2.0 + root)).abs() < 1e-10);
    assert!(bundle["residuals"]["reconstruction"].as_f64().unwrap() < 1e-10);
}

#[test]
fn transform_and_evolve() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]],
    );
    let b = write_matrix(
        dir.path(),
        "b.json",
        &[&[(1.0, 0.0), (0.5, 0.0)], &[(0.0, 0.0), (1.0, 0.0)]],
    );
    let out = ptqm(&["transform", "--h", arg(&h), "--b", arg(&b)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bundle = stdout_json(&out);
    let hp: ComplexMatrix = serde_json::from_value(bundle["h_prime"].clone()).unwrap();
    let c: ComplexMatrix = serde_json::from_value(bundle["metric"].clone()).unwrap();
    assert!((hp.trace() - C64::new(0.0, 0.0)).norm() < 1e-12);
    let expected_c =
        ComplexMatrix::from_fn(2, |i, j| C64::new([[1.0, 0.5], [0.5, 1.25]][i][j], 0.0));
    assert!(c.distance(&expected_c) < 1e-12);

    let hp_path = dir.path().join("hp.json");
    let c_path = dir.path().join("c.json");
    io::save_matrix(&hp_path, &hp).unwrap();
    io::save_matrix(&c_path, &c).unwrap();
    let psi0 = dir.path().join("psi0.json");
    io::save_vector(&psi0, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();

    let out_dir = dir.path().join("out");
    let out = ptqm(&[
        "evolve",
        "--h",
        arg(&hp_path),
        "--c",
        arg(&c_path),
        "--psi0",
        arg(&psi0),
        "--t",
        "2.5",
        "--out-dir",
        arg(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let state = io::load_vector(out_dir.join("state.json")).unwrap();
    assert_eq!(state.len(), 2);
    let norms: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("norms.json")).unwrap()).unwrap();
    let (n0, n1) = (
        norms["initial"].as_f64().unwrap(),
        norms["final"].as_f64().unwrap(),
    );
    assert!((n0 - n1).abs() < 1e-12 * n0);
}

#[test]
fn brach_csv_reloads() {
    let out = ptqm(&[
        "brach",
        "--epsilon",
        "1",
        "--alphas",
        "0.05:0.7:6",
        "--jobs",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("alpha,tau_numeric,tau_formula,hermitian_bound,gap,basis_cond\n"));
    let records: Vec<BrachRecord> = io::csv_parse(&text).unwrap();
    assert_eq!(records.len(), 6);
    for r in &records {
        assert!((r.tau_numeric - r.tau_formula).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn out_dir_manifest_records_inputs_and_seed() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (2.0, 0.0)]],
    );
    let out_dir = dir.path().join("run");
    let out = Command::new(env!("CARGO_BIN_EXE_ptqm"))
        .args(["accept", "--h", arg(&h), "--out-dir", arg(&out_dir)])
        .env("PTQM_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 17);
    assert_eq!(manifest["config"]["seed"], 17);
    let inputs = manifest["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 1);
    let sha = inputs[0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert!(sha.chars().all(|c| c.is_ascii_hexdigit()));
    for o in manifest["outputs"].as_array().unwrap() {
        assert!(Path::new(o.as_str().unwrap()).exists());
    }
    assert!(out_dir.join("report.json").exists());
    assert!(!manifest["timings"].as_array().unwrap().is_empty());
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let h = write_matrix(
        dir.path(),
        "h.json",
        &[&[(2.0, 0.5), (1.0, 0.0)], &[(1.0, 0.0), (2.0, -0.5)]],
    );
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let out = ptqm(&["accept", "--h", arg(&h), "--seed", "5"]);
            assert_eq!(code(&out), 0);
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);

    let a = ptqm(&["brach", "--epsilon", "2", "--alphas", "0.1:0.6:4"]).stdout;
    let b = ptqm(&[
        "brach",
        "--epsilon",
        "2",
        "--alphas",
        "0.1:0.6:4",
        "--jobs",
        "3",
    ])
    .stdout;
    assert_eq!(a, b);
}

#[test]
fn repro_commands_pass() {
    let out = ptqm(&["repro", "counterexample"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["artifacts"]["acceptability"]["verdict"], "rejected");

    let out = ptqm(&["repro", "spin-half", "--alpha", "0.3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = ptqm(&["repro", "all"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("[FAIL]"));
    assert!(stdout_json(&out).as_array().unwrap().len() >= 5);
}

#[test]
fn shifted_oscillator_demo() {
    let out = ptqm(&["demo", "shifted-osc", "--nmax", "40", "--count", "3"]);
    assert_eq!(code(&out), 0);
    let spec = stdout_json(&out);
    let levels: Vec<C64> = serde_json::from_value(spec["eigenvalues"].clone()).unwrap();
    assert_eq!(levels.len(), 3);
    for (k, e) in levels.iter().enumerate() {
        assert!((e - C64::new(k as f64 + 1.0, 0.0)).norm() < 1e-10, "{e}");
    }
}

#[test]
fn errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"dim": 2, "entries": [[1, 0]]}"#).unwrap();
    let out = ptqm(&["accept", "--h", arg(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("entries"));

    let out = ptqm(&["accept", "--h", arg(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 1);

    let out = ptqm(&["no-such-command"]);
    assert_eq!(code(&out), 1);

    let out = ptqm(&["brach", "--epsilon", "1", "--alphas", "0:1"]);
    assert_eq!(code(&out), 1);

    let out = ptqm(&["--help"]);
    assert_eq!(code(&out), 0);
}
