use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::Value;

fn crownvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crownvol")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crownvol"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = crownvol(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    crownvol(args).status.code().unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// `"v ± e"` as a pair of floats.
fn estimate(s: &str) -> (f64, f64) {
    let (v, e) = s.split_once('±').expect("value with error");
    (v.trim().parse().unwrap(), e.trim().parse().unwrap())
}

#[test]
fn crown_forms() {
    assert_eq!(stdout(&["crown", "--n", "3"]), "(d^2 + pi^2) / (4 cosh(d/2))");
    assert_eq!(stdout(&["crown", "--n", "3", "--d", "0"]), "1/4 * pi^2 ≈ 2.4674011003");
    assert_eq!(stdout(&["crown", "--n", "2", "--total"]), "1/2 * pi^2");
    let v: f64 = stdout(&["crown", "--n", "1", "--d", "2", "--digits", "17"]).parse().unwrap();
    assert!((v - 1.0 / (2.0 * 1f64.cosh())).abs() < 1e-15);
}

#[test]
fn annulus_forms() {
    assert_eq!(stdout(&["annulus", "--a1", "1", "--a2", "2"]), "7/4 * zeta(3)");
    assert_eq!(stdout(&["annulus", "--a1", "2", "--a2", "2"]), "6 * zeta(3)");
    let v: f64 = stdout(&["annulus", "--a1", "1", "--a2", "1", "--d", "1", "--digits", "17"]).parse().unwrap();
    assert!((v - 1.0 / (4.0 * 0.5f64.cosh().powi(2))).abs() < 1e-15);
}

#[test]
fn ngon_quadrature_octagon() {
    let (v, e) = estimate(&stdout(&["ngon", "--n", "8", "--method", "quadrature"]));
    assert!((v - 8.0 * PI.powi(4) / 45.0).abs() <= 1e-6);
    assert!(e <= 1e-6);
}

#[test]
fn ngon_mc_covers_pentagon() {
    let doc = json(&["ngon", "--n", "5", "--method", "mc", "--samples", "1000000", "--seed", "7"]);
    let v: f64 = doc["value"].as_str().unwrap().parse().unwrap();
    let se: f64 = doc["stderr"].as_str().unwrap().parse().unwrap();
    assert!((v - PI * PI / 6.0).abs() <= 3.0 * se, "{v} ± {se}");
}

#[test]
fn conjecture_is_tagged_in_every_format() {
    let args = ["ngon", "--n", "9", "--method", "conjecture"];
    assert_eq!(stdout(&args), "5/112 * pi^6 [CONJECTURE]");
    for format in ["latex", "csv"] {
        let mut a = args.to_vec();
        a.extend(["--format", format]);
        assert!(stdout(&a).contains("CONJECTURE"), "{format}");
    }
    assert_eq!(json(&args)["status"], "CONJECTURE");
}

#[test]
fn surface_examples() {
    let v03 = data("v03.json");
    assert_eq!(stdout(&["surface", "--genus", "0", "--cuffs", "2", "--crowns", "1", "--wp", &v03]), "4 * beta(2)");
    assert_eq!(stdout(&["surface", "--genus", "0", "--cuffs", "2", "--crowns", "2", "--wp", &v03]), "14 * zeta(3)");
    assert_eq!(code(&["surface", "--genus", "0", "--cuffs", "2", "--crowns", "1"]), 2);
}

#[test]
fn surface_schema_error_names_pointer() {
    let dir = std::env::temp_dir().join(format!("crownvol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("odd.json");
    std::fs::write(&path, r#"{"genus":0,"vars":["b1","b2","b3"],"terms":[{"pi2":0,"pows":[0,1,0],"coeff":"1"}]}"#)
        .unwrap();
    let out = crownvol(&["surface", "--genus", "0", "--cuffs", "2", "--crowns", "1", "--wp", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/terms/0/pows/1"));
}

#[test]
fn verify_tables_report() {
    let out = crownvol(&["verify", "--suite", "paper-tables", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert!(rows.len() > 20);
    for r in rows {
        for key in ["check", "status", "expected", "got", "tolerance"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["status"], "PASS", "{}", r["check"]);
    }
}

#[test]
fn recognize_examples() {
    let zeta = "2.1035995805292899994495417826450374838387260115959";
    assert_eq!(stdout(&["recognize", "--value", zeta, "--degree", "3"]), "7/4 * zeta(3)");
    let sqrt2 = "1.4142135623730950488016887242096980785696718753769";
    assert_eq!(stdout(&["recognize", "--value", sqrt2, "--degree", "1"]), "NOT FOUND");
    assert_eq!(code(&["recognize", "--value", "2.10359958", "--degree", "3", "--max-height", "100000"]), 4);
}

#[test]
fn recognize_piped_heptagon() {
    let quad = crownvol(&["ngon", "--n", "7"]);
    assert!(quad.status.success());
    let out = with_stdin(&["recognize", "--value", "@-", "--degree", "4", "--pi-only"], &quad.stdout);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3/40 * pi^4");
}

#[test]
fn json_output_is_deterministic_across_workers() {
    let run = |w: &str| stdout(&["ngon", "--n", "6", "--method", "mc", "--samples", "50000", "--workers", w, "--format", "json"]);
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("4"));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_crownvol"))
        .args(["crown", "--n", "3", "--d", "1", "--format", "json"])
        .env("CROWNVOL_PRECISION", "300")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["numeric"]["value"].as_str().unwrap().len() > 80);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["crown", "--n", "0"]), 2);
    assert_eq!(code(&["crown", "--n", "3", "--d", "-1"]), 2);
    assert_eq!(code(&["ngon", "--n", "7", "--tolerance", "1e-40", "--max-levels", "2"]), 3);
    assert_eq!(code(&["ngon", "--n", "2", "--method", "conjecture"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn malformed_numbers_exit_2(s in "[a-z#%&]{1,8}") {
        prop_assert_eq!(code(&["crown", "--n", "3", "--d", &s]), 2);
        prop_assert_eq!(code(&["recognize", "--value", &s, "--degree", "2"]), 2);
    }

    #[test]
    fn malformed_counts_exit_2(s in "-[0-9]{1,4}|[0-9]{1,3}\\.[0-9]") {
        prop_assert_eq!(code(&["annulus", "--a1", &s, "--a2", "1"]), 2);
    }
}
