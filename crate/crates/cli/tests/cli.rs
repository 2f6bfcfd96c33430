use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn jordanlab(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jordanlab"));
    cmd.env_remove("JORDANLAB_CACHE").args(args);
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str], cache: Option<&Path>) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = jordanlab(&all, cache);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn sdim_of_a_two_variable_degree() {
    let (code, v) = json(&["sdim", "2,1,0"], None);
    assert_eq!(code, 0);
    assert_eq!(v["verb"], "sdim");
    assert_eq!(v["results"]["s_dim"], 0);
    assert_eq!(v["inputs"]["degree"], "2,1,0");
    assert_eq!(v["format_version"], 1);
    assert!(v["tool_version"].is_string());
}

#[test]
fn zeroj_on_a_catalog_entry() {
    let (code, v) = json(&["zeroj", "catalog:f1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["zero_in_J"], true);
    let (_, v) = json(&["zeroj", "x*(x*y) - (x*x)*y"], None);
    assert_eq!(v["results"]["zero_in_J"], false);
}

#[test]
fn parse_errors_exit_with_two() {
    let (code, v) = json(&["gamma", "x*(y*"], None);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["line"], 1);
    assert_eq!(v["error"]["column"], 6);
    assert!(v["error"]["expected"].as_array().unwrap().len() > 1);
    assert_eq!(jordanlab(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn caps_exit_with_three() {
    let (code, v) = json(&["jdim", "2,2,2", "--max-cols", "10"], None);
    assert_eq!(code, 3);
    assert!(v["error"]["message"].as_str().unwrap().contains("cap"));
    let (code, _) = json(&["tdim", "3,3,3"], None);
    assert_eq!(code, 3);
}

#[test]
fn gamma_and_scheck() {
    let (_, v) = json(&["gamma", "x*y"], None);
    assert_eq!(v["results"]["gamma"], "1/2 xy + 1/2 yx");
    let (_, v) = json(&["scheck", "catalog:g_xy"], None);
    assert_eq!(v["results"]["gamma_zero"], true);
    let (_, v) = json(&["scheck", "x*y"], None);
    assert_eq!(v["results"]["gamma_zero"], false);
}

#[test]
fn lift_of_a_word() {
    let (code, v) = json(&["lift", "xyzx"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["gamma_matches"], true);
    assert_eq!(v["results"]["gamma"], "xyzx + xzyx");
    let (code, _) = json(&["lift", "xy + 2 yx"], None);
    assert_eq!(code, 1);
}

#[test]
fn catalog_listing_and_round_trip() {
    let (_, v) = json(&["catalog"], None);
    let entries = v["results"]["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["name"] == "sh" && e["degree"] == "3,3,2"));
    let (code, v) = json(&["catalog", "get", "g_xxy"], None);
    assert_eq!(code, 0);
    let text = v["results"]["polynomial"].as_str().unwrap();
    let mut table = jordanlab::lift::LiftTable::new();
    let expected = jordanlab::identities::catalog_entry(&mut table, "g_xxy").unwrap().unwrap().value;
    assert_eq!(jordanlab::parse::parse_jordan(text).unwrap(), expected);
    let (code, _) = json(&["catalog", "get", "nope"], None);
    assert_eq!(code, 1);
}

#[test]
fn oracles_from_the_command_line() {
    let (code, v) = json(&["albert-eval", "catalog:sh"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["nonzero_somewhere"], true);
    let (_, v) = json(&["sym-eval", "catalog:sh", "--k", "4", "--points", "3"], None);
    assert_eq!(v["results"]["nonzero_somewhere"], false);
    assert_eq!(v["results"]["values"].as_array().unwrap().len(), 3);
    let (_, v) = json(&["sym-eval", "x*(x*y) - (x*x)*y", "--k", "2", "--seed", "9", "--points", "4"], None);
    assert_eq!(v["results"]["nonzero_somewhere"], true);
    assert_eq!(v["inputs"]["seed"], 9);
}

#[test]
fn reports_are_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let (_, cold) = json(&["jdim", "2,2,1"], Some(dir.path()));
    assert_eq!(cold["cache"]["hits"], 0);
    assert!(cold["cache"]["computed"].as_u64().unwrap() > 0);
    let (_, warm) = json(&["jdim", "2,2,1"], Some(dir.path()));
    assert_eq!(warm["cache"]["computed"], 0);
    assert!(warm["cache"]["hits"].as_u64().unwrap() > 0);
    let (_, again) = json(&["jdim", "2,2,1"], Some(dir.path()));
    assert_eq!(without_timings(warm.clone()), without_timings(again));
    assert_eq!(cold["results"], warm["results"]);
    let (_, fresh) = json(&["jdim", "2,2,1", "--no-cache"], Some(dir.path()));
    assert_eq!(fresh["cache"]["hits"], 0);
    assert_eq!(fresh["results"], cold["results"]);
}

#[test]
fn stale_cache_files_warn_and_corrupt_ones_fail() {
    let dir = tempfile::tempdir().unwrap();
    json(&["jdim", "2,1,1"], Some(dir.path()));
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&file).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["format_version"] = 0.into();
    std::fs::write(&file, v.to_string()).unwrap();
    let out = jordanlab(&["jdim", "2,1,1"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    v["format_version"] = 1.into();
    v["sha256"] = "00".into();
    std::fs::write(&file, v.to_string()).unwrap();
    let out = jordanlab(&["jdim", "2,1,1"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt"));
}

#[test]
fn tmember_with_small_generators() {
    let (code, v) = json(&["tmember", "(x*x)*(y*x) - ((x*x)*y)*x", "--gens", "catalog:jordan"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["member"], true);
}

#[test]
fn verify_all_subset() {
    let (code, v) = json(&["verify-all", "--only", "1,6"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["all_passed"], true);
    assert_eq!(v["results"]["criteria"].as_array().unwrap().len(), 2);
}

#[test]
fn text_output_reads_the_same_data() {
    let out = jordanlab(&["sdim", "2,1"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("sdim\n"));
    assert!(text.contains("s_dim: 0"));
}

#[test]
fn primes_are_validated() {
    let (code, _) = json(&["jdim", "2,1", "--primes", "15,17"], None);
    assert_eq!(code, 1);
    let (code, v) = json(&["jdim", "2,1,1", "--primes", "1000003,998244353"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["component"]["s_dim"], 0);
}
