mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use serde_json::Value;
use tempfile::TempDir;

fn qhopf(args: &[&str]) -> Output {
    qhopf_env(args, &[])
}

fn qhopf_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qhopf"));
    c.args(args).env_remove("QHOPF_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn example(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["example"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = qhopf(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail")
}

#[test]
fn verify_reports_json_and_exit_code() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz2.json", &["--kind", "dpr", "--group", "Z2"]);
    let o = qhopf(&["verify", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["level"], "ribbon");
    // the twisted double carries no v
    let f = example(&dir, "dwz2.json", &["--kind", "dpr", "--group", "Z2", "--q", "1"]);
    assert_eq!(json(&qhopf(&["verify", s(&f)]))["level"], "qt");
    assert!(all_pass(&v));
    assert!(v["datum"].as_str().unwrap().len() >= 16);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn verify_fails_on_a_mutated_file() {
    let dir = TempDir::new().unwrap();
    let (_, d) = mutate(&f_z(3), 5);
    let f = dir.path().join("bad.json");
    std::fs::write(&f, d.save()).unwrap();
    let o = qhopf(&["verify", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|c| c["witness"].is_object()), "{v}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(qhopf(&["verify"]).status.code(), Some(2));
    assert_eq!(qhopf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qhopf(&["verify", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(qhopf(&["example", "--kind", "dpr", "--field", "p:8"]).status.code(), Some(2));
}

#[test]
fn text_format() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "k.json", &["--kind", "group", "--group", "Z2"]);
    let o = qhopf(&["verify", s(&f), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("level ribbon"));
}

#[test]
fn ribbon_find_lists_the_closed_form() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz2.json", &["--kind", "dpr", "--group", "Z2", "--field", "p:5"]);
    let o = qhopf(&["ribbon", "find", s(&f), "--strategy", "enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let cands = v["candidates"].as_array().unwrap();
    assert!(!cands.is_empty());
    assert!(cands.iter().any(|c| c["provenance"] == "closed-form"), "{v}");
    assert!(all_pass(&v));
    assert!(v["region"].as_str().unwrap().contains("625"));
}

#[test]
fn ribbon_find_over_q_exceeds_the_budget() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "h4.json", &["--kind", "sweedler"]);
    let o = qhopf(&["ribbon", "find", s(&f), "--strategy", "enumerate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn corpus_and_ribbon_theorem_pass() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz2.json", &["--kind", "dpr", "--group", "Z2", "--q", "1"]);
    let o = qhopf(&["check", "corpus", s(&f), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(json(&o)["checks"].as_array().unwrap().len() > 100);
    // no v to check
    assert_eq!(qhopf(&["check", "ribbon-theorem", s(&f)]).status.code(), Some(2));
    let f = example(&dir, "dz3.json", &["--kind", "dpr", "--group", "Z3"]);
    let o = qhopf(&["check", "ribbon-theorem", s(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let o = qhopf(&["ribbon", "check", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn custom_corpus_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "k.json", &["--kind", "group", "--group", "Z3"]);
    let c = dir.path().join("c.txt");
    std::fs::write(&c, "alpha == beta\nalpha == 2 * alpha\n").unwrap();
    let o = qhopf(&["check", "corpus", s(&f), "--corpus", s(&c)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["checks"][0]["status"], "pass");
    assert_eq!(v["checks"][1]["status"], "fail");
}

#[test]
fn derive_prints_tensors() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz2.json", &["--kind", "dpr", "--group", "Z2", "--q", "1"]);
    for el in ["gamma", "delta", "F", "Finv", "u", "uhat", "ucheck", "utilde"] {
        let o = qhopf(&["derive", s(&f), "--element", el]);
        assert_eq!(o.status.code(), Some(0), "{el}");
        json(&o);
    }
}

#[test]
fn twist_emits_a_valid_datum() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "h4.json", &["--kind", "sweedler"]);
    let out = dir.path().join("t.json");
    let o = qhopf(&["twist", s(&f), "--seed", "4", "--emit", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(json(&o)["checks"].as_array().unwrap().iter().any(|c| c["name"] == "twist.u"));
    let o = qhopf(&["verify", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["level"], "qt");
}

#[test]
fn twist_props_over_a_seed_range() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz2.json", &["--kind", "dpr", "--group", "Z2", "--q", "1"]);
    let o = qhopf(&["check", "twist-props", s(&f), "--seeds", "0..5", "--jobs", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<_> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    assert!(names.iter().any(|n| n.starts_with("seed4.")));
    assert!(!names.iter().any(|n| n.starts_with("seed5.")));
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "h4.json", &["--kind", "sweedler"]);
    let expr = ["check", "expr", s(&f), "--expr", "T"];
    let by_env = qhopf_env(&expr, &[("QHOPF_SEED", "9")]);
    let mut flag = expr.to_vec();
    flag.extend_from_slice(&["--seed", "9"]);
    let by_flag = qhopf(&flag);
    assert_eq!(by_env.stdout, by_flag.stdout);
    assert_ne!(by_env.stdout, qhopf(&expr).stdout);
    assert_eq!(qhopf_env(&expr, &[("QHOPF_SEED", "nine")]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let f = example(&dir, "dz3.json", &["--kind", "dpr", "--group", "Z3", "--q", "1"]);
    let strip = |o: Output| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(qhopf(&["verify", s(&f), "--jobs", "1"]));
    let b = strip(qhopf(&["verify", s(&f), "--jobs", "4"]));
    assert_eq!(a, b);
}
