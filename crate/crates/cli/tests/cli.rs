use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn sbalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = sbalg(&all);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn validate_example_one() {
    let o = sbalg(&["validate", &data("ex1.sba")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("special biserial: PASS"));
    assert!(out.contains("gentle: FAIL"));
    let v = json(&["validate", &data("ex1.sba")]);
    assert_eq!(v["schema"], "sbalg.validate/1");
    assert_eq!(v["gentle"]["pass"], false);
}

#[test]
fn stable_end_example_one() {
    let o = sbalg(&["stable-end", &data("ex1.sba"), "--string", "x- y x- y"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["End 7", "proj-trivial 6", "stable End 1"] {
        assert!(out.lines().any(|l| l == line), "{out}");
    }
    let v = json(&["stable-end", &data("ex1.sba"), "--string", "x- y x- y"]);
    assert_eq!((v["end"].as_u64(), v["proj_trivial"].as_u64(), v["stable_end"].as_u64()), (Some(7), Some(6), Some(1)));
    assert_eq!(v["presentation"], "vertex 1\n");
}

#[test]
fn ext_of_simple_over_dual_numbers() {
    let v = json(&["ext1", &data("ex3.sba"), "--from", "1(1,+1)", "--to", "1(1,+1)"]);
    assert_eq!(v["dimension"], 1);
    let p = json(&["ext1", &data("ex3.sba"), "--from", "1(1,+1)", "--to", "1(1,+1)", "--field", "fp:7"]);
    assert_eq!(p["dimension"], 1);
    assert_eq!(p["field"], "fp:7");
}

#[test]
fn band_modules_are_accepted() {
    let v = json(&["stable-end", &data("ex2b.sba"), "--string", "band:1:1:x- x- y x- y y"]);
    assert_eq!(v["end"], 8);
    assert_eq!(v["stable_end"], 8);
    let bad = sbalg(&["module", &data("ex2.sba"), "--string", "band:1:1:x x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gentle_check_verdicts() {
    assert_eq!(sbalg(&["gentle-check", &data("ex3.sba")]).status.code(), Some(0));
    assert_eq!(sbalg(&["gentle-check", &data("ex1.sba")]).status.code(), Some(1));
    let v = json(&["gentle-check", &data("ex1.sba"), "--string", "x- y x- y"]);
    assert_eq!(v["verdict"]["verdict"], "GENTLE_CONFIRMED");
}

#[test]
fn hom_lists_graph_maps() {
    let v = json(&["hom", &data("ex1.sba"), "--from", "x- y", "--to", "x- y", "--dump-module"]);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["graph_maps"].as_array().unwrap().len(), 3);
    assert_eq!(v["modules"]["from"]["dimension"], 3);
}

#[test]
fn overlap_sequence_over_a3() {
    let o = sbalg(&["overlap-ext", &data("a3.sba"), "--e", "1(2,-1)", "--f1", "b", "--d2", "a"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("exact: PASS"));
    let wrong = sbalg(&["overlap-ext", &data("a3.sba"), "--e", "1(2,+1)", "--f1", "b", "--d2", "a"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sbalg(&["nonsense"]).status.code(), Some(2));
    assert_eq!(sbalg(&["validate", "missing.sba"]).status.code(), Some(2));
    assert_eq!(sbalg(&["validate", &data("ex1.sba"), "--field", "fp:4"]).status.code(), Some(2));
    assert_eq!(sbalg(&["ext1", &data("ex1.sba"), "--from", "z", "--to", "x"]).status.code(), Some(2));
}

#[test]
fn scan_and_generate_are_deterministic() {
    let args = ["theorem-scan", "--trials", "12", "--max-len", "4", "--seed", "5", "--format", "json"];
    let (a, b) = (sbalg(&args), sbalg(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "sbalg.theorem-scan/1");
    assert_eq!(v["trials"].as_array().unwrap().len(), 12);

    let g = ["generate", "--count", "3", "--seed", "11"];
    assert_eq!(sbalg(&g).stdout, sbalg(&g).stdout);
}
