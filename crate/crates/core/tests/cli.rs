use std::process::Command;

use schober_core::cli::run;
use schober_core::lbcx::{LBComplex, LBMap};
use serde_json::Value;

fn schober(args: &[&str]) -> schober_core::cli::Outcome {
    run(std::iter::once("schober").chain(args.iter().copied()))
}

#[test]
fn spherical_check_passes() {
    let o = schober(&["hyper", "spherical-check", "--n", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = o.report.unwrap();
    assert_eq!(r.tag, "SF1-SF4");
    assert!(r.pass && r.checks.iter().any(|c| c.name == "SF4"));
    assert_eq!(r.witnesses.len(), 8);
}

#[test]
fn reports_are_deterministic() {
    let args = ["skeleton", "verify-section", "--n", "2", "--tau", "1/4", "--samples", "50", "--seed", "7"];
    let a = schober(&args).report.unwrap();
    let b = schober(&args).report.unwrap();
    assert_eq!(a.deterministic_json(), b.deterministic_json());
    let c = schober(&["skeleton", "verify-section", "--n", "2", "--tau", "1/4", "--samples", "50", "--seed", "8"]);
    assert_ne!(a.inputs_digest, c.report.unwrap().inputs_digest);
    // --json does not enter the digest.
    let mut with_json = args.to_vec();
    with_json.push("--json");
    assert_eq!(schober(&with_json).report.unwrap().inputs_digest, a.inputs_digest);
}

#[test]
fn cellccc_commands() {
    let o = schober(&["cellccc", "compare"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.report.unwrap().tag, "CCC-n2");
    let o = schober(&["cellccc", "loc", "--lambda", "3", "--other", "3,-1/2"]);
    assert_eq!(o.code, 0);
    let o = schober(&["cellccc", "convolve", "--left", "unit", "--right", "twist"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(schober(&["skeleton", "classify", "--point", "not json"]).code, 2);
    assert_eq!(schober(&["lbcx", "is-zero", "--file", "/nonexistent/x.json"]).code, 2);
    assert_eq!(schober(&["cohp", "table", "--m"]).code, 2);
    assert_eq!(schober(&["nonsense"]).code, 2);
    assert_eq!(schober(&["--suite", "quick"]).code, 2);
    assert_eq!(schober(&["schober", "ledger", "--taus", "1/0"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"m": 1, "range": [0, 0]}"#).unwrap();
    assert_eq!(schober(&["lbcx", "rgamma", "--file", p.to_str().unwrap()]).code, 2);
}

#[test]
fn is_zero_on_cone_of_identity() {
    let dir = tempfile::tempdir().unwrap();
    let a = LBComplex::line_bundle(2, -1);
    let cone = LBMap::identity(&a).cone();
    let zero = dir.path().join("cone.json");
    std::fs::write(&zero, serde_json::to_string(&cone.to_json()).unwrap()).unwrap();
    let o = schober(&["lbcx", "is-zero", "--file", zero.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    // A nonzero object fails the check.
    let nz = dir.path().join("o.json");
    std::fs::write(&nz, serde_json::to_string(&a.to_json()).unwrap()).unwrap();
    assert_eq!(schober(&["lbcx", "is-zero", "--file", nz.to_str().unwrap()]).code, 1);
}

#[test]
fn out_directory_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = schober(&["hyper", "spherical-check", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let report: Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    assert!(out.join("report.md").exists());
    assert!(out.join("witnesses/SF1.json").exists());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_schober");
    let ok = Command::new(bin).args(["cohp", "table", "--m", "1", "--dmin", "-2", "--dmax", "2", "--json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["tag"], "Serre-cohomology");
    let bad = Command::new(bin).args(["fan"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
