//! End-to-end runs of the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use toricfib::dataset::ELLIPTIC_FOURFOLD;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricfib")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn structured(args: &[&str]) -> toml::Table {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    stdout(&all).parse().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("toricfib-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn fibers_over_r1() {
    let t = structured(&["morphism", "fibers", "--sigma", "r1"]);
    assert_eq!(t["version"].as_str(), Some("1"));
    // rendered as text so that an infinite index fits the same column
    assert_eq!(t["fiber"]["index"].as_str(), Some("1"));
    let labels: Vec<&str> = t["components"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["X(5)", "WCP2(1,1,3)", "F2"]);
}

#[test]
fn polytope_and_moduli_counts() {
    let t = structured(&["polytope", "points"]);
    assert_eq!(t["summary"]["lattice_points"].as_integer(), Some(3365));
    assert_eq!(t["points"].as_array().unwrap().len(), 3365);
    let t = structured(&["analysis", "moduli"]);
    assert_eq!(t["summary"]["moduli_dimension"].as_integer(), Some(2897));
    assert_eq!(t["summary"]["facet_interior_points"].as_integer(), Some(462));
}

#[test]
fn table_output_has_headed_sections() {
    let out = stdout(&["morphism", "fibers", "--sigma", "r1"]);
    assert!(out.starts_with("== fiber ==\n"));
    assert!(out.contains("\n== components ==\n"));
    assert!(out.lines().any(|l| l.starts_with("e2'") && l.contains("WCP2(1,1,3)")));
}

#[test]
fn pipeline_report_is_deterministic() {
    let a = run(&["--format", "structured", "pipeline", "report"]);
    let b = run(&["--format", "structured", "pipeline", "report"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t: toml::Table = String::from_utf8(a.stdout).unwrap().parse().unwrap();
    assert_eq!(t["fiber_polytopes"].as_array().unwrap().len(), 60);
}

#[test]
fn explicit_input_matches_the_bundled_default() {
    let path = scratch("job.toml", ELLIPTIC_FOURFOLD);
    let explicit = stdout(&["--input", path.to_str().unwrap(), "morphism", "stratify"]);
    assert_eq!(explicit, stdout(&["morphism", "stratify"]));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn subdivision_emits_a_fan_document() {
    let t = structured(&["fan", "subdivide", "--ray", "0,0,0,1,1", "--name", "x'"]);
    let doc = toml::to_string(&t).unwrap();
    let parsed = toricfib::io::parse(&doc).unwrap();
    assert!(parsed.fan.is_some());
}

#[test]
fn failures_exit_nonzero() {
    let out = run(&["--input", "/nonexistent/job.toml", "fan", "check"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    let broken = ELLIPTIC_FOURFOLD.replacen("[\"v1'\", \"b'\", \"e1'\", \"v2'\", \"v4'\"]", "[\"v1'\", \"zz'\", \"e1'\", \"v2'\", \"v4'\"]", 1);
    assert_ne!(broken, ELLIPTIC_FOURFOLD);
    let path = scratch("broken.toml", &broken);
    let out = run(&["--input", path.to_str().unwrap(), "fan", "check"]);
    std::fs::remove_file(path).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("job.source"));

    let out = run(&["analysis", "discriminant", "--shape", "F2", "--coefficients", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn discriminant_values() {
    let t = structured(&["analysis", "discriminant", "--shape", "F2", "--coefficients", "0,-1,0,1"]);
    assert_eq!(t["summary"]["value"].as_integer(), Some(-4));
    assert_eq!(t["summary"]["terms"].as_integer(), Some(5));
}
