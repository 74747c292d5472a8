use std::process::{Command, Output};

use covermonoid_core::abelian_group::TwoGenPresentation;
use covermonoid_core::graded_algebra::Field;
use covermonoid_core::two_degree::{invariants_for, universal_multiplication};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covermonoid")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn rays_of_z4() {
    let v = json(&["rays", "4"]);
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[0]["denominator"], "4");
}

#[test]
fn presentation_of_z4_has_one_relation() {
    let v = json(&["presentation", "4"]);
    assert_eq!(v["relations"].as_array().unwrap().len(), 1);
    assert_eq!(json(&["presentation", "2,2"])["relations"].as_array().unwrap().len(), 0);
}

#[test]
fn sigma_of_klein_four_is_empty() {
    assert_eq!(json(&["sigma", "2,2"]), Value::Array(vec![]));
    assert!(!json(&["sigma", "4"]).as_array().unwrap().is_empty());
}

#[test]
fn integers_are_strings() {
    let v = json(&["invariants", "1", "5", "8", "2"]);
    assert_eq!(v["z"], "2");
    assert_eq!(v["x"], "5");
}

#[test]
fn parse_errors_exit_with_two() {
    assert_eq!(run(&["rays", "0"]).status.code(), Some(2));
    assert_eq!(run(&["rays", "x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "1", "1", "4", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--prime", "100"]).status.code(), Some(2));
}

#[test]
fn computation_failures_exit_with_one() {
    // Omega_{3,8} = {1, 2, 5, 8}
    assert_eq!(run(&["invariants", "1", "5", "8", "3"]).status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [["theta2", "6"], ["nc-table", "2,4"], ["fan", "4"]] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("covermonoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("omega.txt");
    let out = run(&["omega", "3", "8", "--format", "text", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "q=1 d=3\nq=2 d=6\nq=5 d=7\nq=8 d=8\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn classify_reads_a_table() {
    let field = Field::prime(101).unwrap();
    let inv = invariants_for(TwoGenPresentation::new(1, 5, 8).unwrap(), 2).unwrap();
    let psi = universal_multiplication(&inv, field, &field.one(), &field.zero()).unwrap();
    let dir = std::env::temp_dir().join(format!("covermonoid-classify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    std::fs::write(&path, psi.to_json().to_string()).unwrap();
    let g = inv.group();
    let m = g.element(inv.realized.m).to_string();
    let n = g.element(inv.realized.n).to_string();
    let v = json(&["classify", path.to_str().unwrap(), &m, &n]);
    assert_eq!((v["q_bar"].as_str(), v["N"].as_str()), (Some("2"), Some("8")));
    let h = json(&["h", "--table", path.to_str().unwrap()]);
    assert_eq!(h["h"], "2");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn smooth_stack_and_reducible_verdicts() {
    assert_eq!(json(&["smooth-stack", "3"])["smooth"], true);
    let v = json(&["smooth-stack", "4"]);
    assert_eq!(v["relation"], "x_{1,2}*x_{3,3} = x_{2,3}*x_{1,1}");
    assert_eq!(json(&["reducible", "9"])["verdict"], "reducible");
    assert_eq!(json(&["reducible", "5"])["verdict"], "unknown");
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_covermonoid"))
        .env("COVERMONOID_THREADS", "zero")
        .args(["rays", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_covermonoid")).env("COVERMONOID_THREADS", "1").args(["rays", "2"]).output().unwrap();
    assert!(ok.status.success());
}

#[test]
fn verify_passes_at_small_bounds() {
    let out = run(&["verify", "--max-order", "6", "--format", "text"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("pass ")));
    assert!(text.contains("cli::identical_invocations_agree"));
}
