use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_permutwirl");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("PERMUTWIRL_SEED").output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Bloch vector (0.6, 0.3, 0.2).
const QUBIT: &str = r#"{"dims":[2],"matrix":[[0.6,0],[0.3,-0.15],[0.3,0.15],[0.4,0]]}"#;

fn matrix_entries(v: &Value) -> Vec<(f64, f64)> {
    v["matrix"].as_array().unwrap().iter().map(|e| (e[0].as_f64().unwrap(), e[1].as_f64().unwrap())).collect()
}

#[test]
fn twirl_qubit_closed_and_brute() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", QUBIT);
    let closed = dir.path().join("closed.json");
    let brute = dir.path().join("brute.json");

    let out = run(&["twirl", "--input", &input, "--out", closed.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    assert!((summary["summary"]["p"].as_f64().unwrap() - 0.6).abs() < 1e-15);

    let out = run(&["twirl", "--input", &input, "--method", "brute", "--out", brute.to_str().unwrap()]);
    assert!(out.status.success());

    let a: Value = serde_json::from_str(&std::fs::read_to_string(&closed).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&brute).unwrap()).unwrap();
    let expected = [(0.5, 0.0), (0.3, 0.0), (0.3, 0.0), (0.5, 0.0)];
    for ((x, y), (e, f)) in matrix_entries(&a).into_iter().zip(matrix_entries(&b)).zip(expected) {
        assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
        assert!((x.0 - e).abs() < 1e-15 && (x.1 - f).abs() < 1e-15);
    }

    // the output file is itself a valid input
    let again = run(&["twirl", "--input", closed.to_str().unwrap()]);
    assert!(again.status.success());
}

#[test]
fn twirl_reads_stdin_and_writes_stdout() {
    let out = run_with_stdin(&["twirl", "--input", "-", "--out", "-"], QUBIT);
    assert!(out.status.success());
    let state = json(&out);
    assert_eq!(state["dims"], serde_json::json!([2]));
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["mode"], "single");
}

#[test]
fn twirl_bell_diagonal_both_sides() {
    // ¼(1 + 0.3 σ1σ1 - 0.2 σ2σ2 + 0.4 σ3σ3)
    let (t1, t2, t3) = (0.3, -0.2, 0.4);
    let d = |v: f64| format!("[{v},0]");
    let z = "[0,0]";
    let rows = [
        [d((1.0 + t3) / 4.0), z.into(), z.into(), d((t1 - t2) / 4.0)],
        [z.into(), d((1.0 - t3) / 4.0), d((t1 + t2) / 4.0), z.into()],
        [z.into(), d((t1 + t2) / 4.0), d((1.0 - t3) / 4.0), z.into()],
        [d((t1 - t2) / 4.0), z.into(), z.into(), d((1.0 + t3) / 4.0)],
    ];
    let flat: Vec<String> = rows.iter().flat_map(|r| r.iter().cloned()).collect();
    let body = format!(r#"{{"dims":[2,2],"matrix":[{}],"label":"bell"}}"#, flat.join(","));
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bell.json", &body);

    let out = run(&["twirl", "--input", &input, "--side", "both"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c0 = &json(&out)["coefficients"]["c0"];
    assert!((c0[0].as_f64().unwrap() - 0.25).abs() < 1e-15);

    let out = run(&["twirl", "--input", &input, "--side", "A", "--out", "-"]);
    assert!(out.status.success());
    let m = matrix_entries(&json(&out));
    assert!((m[3].0 - t1 / 4.0).abs() < 1e-15 && (m[5].0 - 0.25).abs() < 1e-15);
    assert!((m[6].0 - t1 / 4.0).abs() < 1e-15);
}

#[test]
fn coherence_reports() {
    let dir = tempfile::tempdir().unwrap();
    let phi = (0..16).map(|_| "[0.25,0]").collect::<Vec<_>>().join(",");
    let input = write(dir.path(), "phi.json", &format!(r#"{{"dims":[4],"matrix":[{phi}]}}"#));
    let out = run(&["coherence", "--input", &input, "--measure", "l1"]);
    assert!(out.status.success());
    let rep = &json(&out)["reports"][0];
    assert!((rep["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((rep["lower_bound"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!(rep["gap"].as_f64().unwrap().abs() < 1e-12);

    let out = run(&["coherence", "--input", &input, "--measure", "relent", "--bits"]);
    let rep = &json(&out)["reports"][0];
    assert!((rep["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let b = 0.5 * (1.0 - 0.1f64);
    let body = format!(r#"{{"dims":[2],"matrix":[[0.55,0],[0.3,-0.05],[0.3,0.05],[{b},0]]}}"#);
    let input = write(dir.path(), "q.json", &body);
    let out = run(&["coherence", "--input", &input, "--assist", "50", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = json(&out);
    let l1 = &body["reports"][0];
    assert!((l1["value"].as_f64().unwrap() - 0.37f64.sqrt()).abs() < 1e-12);
    assert!((l1["lower_bound"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert_eq!(body["assistance"][0]["seed"], 9);
    assert_eq!(body["assistance"][0]["samples"], 50);
}

#[test]
fn assist_seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", QUBIT);
    let out = Command::new(BIN)
        .args(["coherence", "--input", &input, "--assist", "5"])
        .env("PERMUTWIRL_SEED", "1234")
        .output()
        .unwrap();
    assert_eq!(json(&out)["assistance"][0]["seed"], 1234);
}

#[test]
fn sweeps_write_csv() {
    let out = run(&["sweep-qubit", "--steps", "200"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r1,c_l1_rho,c_l1_star,c_r_rho,c_r_star");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0][..3], [0.0, 0.1, 0.0]);
    for r in &rows {
        assert!(r[1] >= r[2] - 1e-10 && r[3] >= r[4] - 1e-10);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.csv");
    let out = run(&["sweep-bell", "--grid", "21", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t1,t2,t3,in_octahedron,ppt_before,ppt_after_one_sided,t1_image\n"));
    assert!(text.contains("\n-1,-1,-1,false,false,true,-1\n"));
    assert!(text.contains("\n0,0,0,true,true,true,0\n"));

    // deterministic output
    let again = run(&["sweep-bell", "--grid", "21"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn verify_passes_and_catches_injected_faults() {
    let out = run(&["verify", "--dmax", "4", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() > 20);

    let out = run(&["verify", "--dmax", "1", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "--dmax", "4", "--samples", "5", "--inject-fault", "wrong-denominator"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("verification failed: oracle/closed-form-vs-bruteforce"), "{stderr}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // dimension guard
    let entries: Vec<&str> = (0..100).map(|k| if k % 11 == 0 { "[0.1,0]" } else { "[0,0]" }).collect();
    let input = write(dir.path(), "big.json", &format!(r#"{{"dims":[10],"matrix":[{}]}}"#, entries.join(",")));
    assert_eq!(run(&["twirl", "--input", &input]).status.code(), Some(0));
    assert_eq!(run(&["twirl", "--input", &input, "--method", "brute"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--dmax", "10"]).status.code(), Some(2));

    // malformed JSON names the line
    let bad = write(dir.path(), "bad.json", "{\"dims\": [2],\n \"matrix\": [[1, 0], [0]]}");
    let out = run(&["twirl", "--input", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // not a state, accepted with --raw
    let op = write(dir.path(), "op.json", r#"{"dims":[2],"matrix":[[1,0],[2,0],[0,0],[3,0]]}"#);
    assert_eq!(run(&["twirl", "--input", &op]).status.code(), Some(1));
    let out = run(&["twirl", "--input", &op, "--raw"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["off_diagonal"][0], 1.0);

    // flag range and usage errors
    assert_eq!(run(&["sweep-qubit", "--r2", "0.9", "--r3", "0.9"]).status.code(), Some(1));
    assert_eq!(run(&["sweep-bell", "--grid", "1"]).status.code(), Some(1));
    assert_eq!(run(&["twirl", "--input", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["twirl", "--input", &op, "--raw", "--side", "a"]).status.code(), Some(1));
}
