use std::process::{Command, Output};

use ellgen::{Manifold, USeries};
use serde_json::Value;
use tempfile::TempDir;

fn ellgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellgen")).args(args).env_remove("GENUS_DEFAULT_UORDER").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).expect("temp file");
    p.to_string_lossy().into_owned()
}

fn fixtures() -> (TempDir, String, String, String) {
    let dir = tempfile::tempdir().expect("temp dir");
    let k3 = write(&dir, "k3.json", r#"{"name":"k3","dim":4,"pontryagin_numbers":{"[1]":"-48"}}"#);
    let zero = write(&dir, "zero.json", r#"{"name":"s8","dim":8,"pontryagin_numbers":{"[1,1]":"0","[2]":"0"}}"#);
    let quadric = write(&dir, "quadric.json", r#"{"name":"X(5;2)","dim":8,"pontryagin_numbers":{"[1,1]":"8","[2]":"14"}}"#);
    (dir, k3, zero, quadric)
}

#[test]
fn genus_examples() {
    let (_dir, k3, zero, quadric) = fixtures();
    let o = ellgen(&["genus", "--manifold", &k3, "--genus", "ell2", "--uorder", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2 + 48 q^(1/2) + "), "{}", stdout(&o));

    let o = ellgen(&["genus", "--manifold", &zero, "--genus", "ell1"]);
    assert_eq!(stdout(&o), "0 + O(q^12)");
    let o = ellgen(&["genus", "--manifold", &quadric, "--genus", "ahat"]);
    assert_eq!(stdout(&o), "0 + O(q^12)");
    let o = ellgen(&["genus", "--manifold", &quadric, "--genus", "ell2", "--uorder", "2"]);
    assert_eq!(stdout(&o), "2 q^(1/2) + O(q)");
}

#[test]
fn genus_json_round_trips() {
    let (_dir, k3, _, _) = fixtures();
    let o = ellgen(&["--format", "json", "genus", "--manifold", &k3, "--genus", "ell1", "--uorder", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    let s = USeries::from_json(&v).expect("series");
    assert_eq!(s, USeries::from_ints(4, &[-16, 0, -384]));
    assert_eq!(s.to_json(), v);
}

#[test]
fn uorder_from_environment() {
    let (_dir, k3, _, _) = fixtures();
    let o = Command::new(env!("CARGO_BIN_EXE_ellgen"))
        .args(["genus", "--manifold", &k3, "--genus", "ell2"])
        .env("GENUS_DEFAULT_UORDER", "2")
        .output()
        .expect("binary runs");
    assert_eq!(stdout(&o), "2 + 48 q^(1/2) + O(q)");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().expect("temp dir");
    let bad = write(&dir, "bad.json", "{\"dim\": 8,\n \"pontryagin_numbers\": {\"[2]\": ,}}");
    let o = ellgen(&["genus", "--manifold", &bad, "--genus", "ahat"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let bad_field = write(&dir, "field.json", r#"{"dim":8,"pontryagin_numbers":{"[2]":"x/y"}}"#);
    let o = ellgen(&["genus", "--manifold", &bad_field, "--genus", "ahat"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[2]"), "{}", stderr(&o));

    let missing = dir.path().join("missing.json");
    let o = ellgen(&["genus", "--manifold", &missing.to_string_lossy(), "--genus", "ahat"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(ellgen(&["genus", "--manifold", &bad, "--genus", "nope"]).status.code(), Some(2));
    assert_eq!(ellgen(&["genus", "--manifold", &bad, "--genus", "ahat", "--uorder", "0"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_3() {
    let dir = tempfile::tempdir().expect("temp dir");
    let odd = write(&dir, "odd.json", r#"{"dim":6}"#);
    assert_eq!(ellgen(&["genus", "--manifold", &odd, "--genus", "ahat"]).status.code(), Some(3));
    let wrong = write(&dir, "wrong.json", r#"{"dim":8,"pontryagin_numbers":{"[1]":"3"}}"#);
    assert_eq!(ellgen(&["genus", "--manifold", &wrong, "--genus", "ahat"]).status.code(), Some(3));
    assert_eq!(ellgen(&["hypersurface", "--ambient", "4", "--degree", "2"]).status.code(), Some(3));
    assert_eq!(ellgen(&["sobolev", "--m", "1", "--b", "1"]).status.code(), Some(3));
}

#[test]
fn missing_numbers_warn() {
    let dir = tempfile::tempdir().expect("temp dir");
    let partial = write(&dir, "partial.json", r#"{"dim":8,"pontryagin_numbers":{"[2]":"14"}}"#);
    let o = ellgen(&["genus", "--manifold", &partial, "--genus", "ahat"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning") && stderr(&o).contains("[1,1]"));
}

#[test]
fn hypersurface_examples() {
    let o = ellgen(&["--format", "json", "hypersurface", "--ambient", "5", "--degree", "2", "--uorder", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    assert_eq!(v["signature"], "2");
    assert_eq!(v["ahat"], "0");
    assert_eq!(v["manifold"]["pontryagin_numbers"]["[1,1]"], "8");
    assert_eq!(v["manifold"]["pontryagin_numbers"]["[2]"], "14");
    let m = Manifold::from_json(&v["manifold"]).expect("manifold");
    assert_eq!(m.to_json(), v["manifold"]);
    let ell2 = USeries::from_json(&v["ell2"]).expect("series");
    assert_eq!(ell2.truncate(2), USeries::from_ints(2, &[0, 2]));

    let o = ellgen(&["hypersurface", "--ambient", "3", "--degree", "1", "--uorder", "2"]);
    let text = stdout(&o);
    assert!(text.contains("p[1] = 3") && text.contains("signature = 1"), "{text}");
}

#[test]
fn bundles_examples() {
    let o = ellgen(&["bundles", "--n", "2", "--uorder", "2"]);
    assert_eq!(stdout(&o), "B0 = 1·1\nB1 = -Λ^1(T) + 8·1");
    let o = ellgen(&["bundles", "--n", "2", "--twist", "theta1", "--uorder", "3"]);
    assert_eq!(stdout(&o), "A0 = 1·1\nA1 = 2·Λ^1(T) - 16·1");

    let (_dir, k3, _, quadric) = fixtures();
    let o = ellgen(&["--format", "json", "bundles", "--manifold", &k3, "--uorder", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    let idx: Vec<&str> = v["coefficients"].as_array().expect("array").iter().map(|c| c["index"].as_str().expect("index")).collect();
    assert_eq!(idx, ["2", "48", "48"]);
    assert!(v["coefficients"].as_array().expect("array").iter().skip(1).all(|c| c["rank"] == "0"));
    assert_eq!(ellgen(&["bundles", "--n", "1", "--manifold", &quadric]).status.code(), Some(3));
}

#[test]
fn verify_checks_pass() {
    let o = ellgen(&["verify", "--check", "cancellation", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = ellgen(&["--format", "json", "verify", "--check", "modular-relation", "--n", "2", "--uorder", "12", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    assert_eq!((v["check"].as_str(), v["n"].as_u64(), v["uorder"].as_u64()), (Some("modular-relation"), Some(2), Some(12)));
    assert_eq!((v["residual"].as_str(), v["pass"].as_bool()), (Some("0"), Some(true)));

    let o = ellgen(&["verify", "--check", "route-equivalence", "--n", "3", "--uorder", "6", "--samples", "3", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = ellgen(&["--format", "json", "verify", "--check", "transformation-laws", "--tau", "i"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    let r: f64 = v["residual"].as_str().expect("residual").parse().expect("float");
    assert!(r < 1e-9);
    assert_eq!(ellgen(&["verify", "--check", "transformation-laws", "--tau", "2i"]).status.code(), Some(0));
}

#[test]
fn verify_failures_and_seeds() {
    // too close to the real axis for 24 coefficients
    assert_eq!(ellgen(&["verify", "--check", "transformation-laws", "--tau", "0.01i"]).status.code(), Some(1));
    assert_eq!(ellgen(&["verify", "--check", "transformation-laws", "--tau=-1i"]).status.code(), Some(3));
    assert_eq!(ellgen(&["verify", "--check", "transformation-laws", "--tau", "nonsense"]).status.code(), Some(2));
    assert_eq!(ellgen(&["verify", "--check", "unknown"]).status.code(), Some(2));

    let run = |seed: &str| stdout(&ellgen(&["--format", "json", "verify", "--check", "cancellation", "--samples", "5", "--seed", seed]));
    assert_eq!(run("4"), run("4"));
}

#[test]
fn sobolev_output() {
    let o = ellgen(&["--format", "json", "sobolev", "--m", "16", "--b", "1.0", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json");
    let c = v["C_b"].as_f64().expect("C_b");
    assert!(v["residual"].as_f64().expect("residual").abs() < 1e-10);
    assert!((v["R"].as_f64().expect("R") - 1.0 / c).abs() < 1e-9 / c);

    let o2 = ellgen(&["--format", "json", "sobolev", "--m", "16", "--b", "1.0", "--tol", "1e-10", "--diam", "2"]);
    let v2: Value = serde_json::from_str(&stdout(&o2)).expect("json");
    assert!((v2["R"].as_f64().expect("R") - 2.0 * v["R"].as_f64().expect("R")).abs() < 1e-9 * v2["R"].as_f64().expect("R"));
}
