use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn catnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catnet")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--out", "-"]);
    let out = catnet(&full);
    let doc = serde_json::from_slice(&out.stdout).expect("report is JSON");
    (out.status.code().unwrap_or(-1), doc)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("catnet-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

fn item<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["items"].as_array().unwrap().iter().find(|i| i["name"] == name).unwrap_or_else(|| panic!("no item {name}"))
}

#[test]
fn validate_fibonacci_passes() {
    let (code, doc) = report(&["validate", "--category", "fibonacci"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "PASS");
    assert_eq!(doc["environment"]["seed"], 0xC0FFEE);
}

#[test]
fn pauli_lto_passes() {
    let out = catnet(&["lto", "--model", "toric_pauli", "--lattice", "4x4", "--axioms", "1,2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
}

#[test]
fn tube_lists_four_irreps() {
    let (code, doc) = report(&["tube", "--category", "vec_z2"]);
    assert_eq!(code, 0);
    let irreps = doc["items"].as_array().unwrap().iter().filter(|i| i["name"].as_str().unwrap().starts_with("irrep")).count();
    assert_eq!(irreps, 4);
    assert_eq!(item(&doc, "dim")["actual"], 4);
}

#[test]
fn reports_are_byte_identical() {
    let a = catnet(&["dhr", "--out", "-"]);
    let b = catnet(&["dhr", "--out", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn keys_are_sorted_and_floats_short() {
    let out = catnet(&["validate", "--category", "vec_z2", "--out", "-"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(r#"{"environment":{"dense_cap":5000,"seed":12648430,"sparse_cap":300000,"tolerance":1e-9,"#));
}

#[test]
fn failures_exit_one() {
    let (code, doc) = report(&["validate", "--category", "fibonacci", "--tolerance", "1e-40"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "FAIL");
}

#[test]
fn data_and_usage_errors_exit_two() {
    assert_eq!(catnet(&["tube", "--category", "no_such_category"]).status.code(), Some(2));
    assert_eq!(catnet(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(catnet(&["lto", "--lattice", "4by4"]).status.code(), Some(2));
    assert_eq!(catnet(&["lto", "--axioms", "5"]).status.code(), Some(2));
    assert_eq!(catnet(&["validate", "--category", "vec_z2", "--tolerance", "0"]).status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let cfg = scratch("precedence.json", r#"{"category": "vec_z2", "tolerance": 1e-6, "seed": "0x10"}"#);
    let path = cfg.to_str().unwrap();
    let (_, doc) = report(&["validate", "--config", path]);
    assert_eq!(doc["environment"]["tolerance"], 1e-6);
    assert_eq!(doc["environment"]["seed"], 16);
    let (_, doc) = report(&["validate", "--config", path, "--tolerance", "1e-8", "--seed", "7"]);
    assert_eq!(doc["environment"]["tolerance"], 1e-8);
    assert_eq!(doc["environment"]["seed"], 7);
}

#[test]
fn config_regions_as_rectangles_and_site_lists() {
    let rect = scratch(
        "rect.json",
        r#"{"model": "levin_wen", "category": "vec_z2", "lattice": {"w": 4, "h": 4},
            "lambda": {"x0": 1, "y0": 1, "x1": 1, "y1": 1}, "delta": {"x0": 0, "y0": 0, "x1": 2, "y1": 2}, "axioms": [1]}"#,
    );
    let (code, a) = report(&["lto", "--config", rect.to_str().unwrap()]);
    assert_eq!(code, 0);
    let sites = scratch(
        "sites.json",
        r#"{"model": "levin_wen", "category": "vec_z2", "lattice": {"w": 4, "h": 4},
            "lambda": [[1, 1]], "delta": [[0,0],[1,0],[2,0],[0,1],[1,1],[2,1],[0,2],[1,2],[2,2]], "axioms": [1]}"#,
    );
    let (_, b) = report(&["lto", "--config", sites.to_str().unwrap()]);
    assert_eq!(a["items"], b["items"]);
    let holes = scratch("holes.json", r#"{"model": "levin_wen", "category": "vec_z2", "lambda": [[0, 0], [2, 2]], "delta": [[0, 0]]}"#);
    assert_eq!(catnet(&["lto", "--config", holes.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unknown_config_fields_are_rejected() {
    let cfg = scratch("unknown.json", r#"{"category": "vec_z2", "tolerence": 1e-6}"#);
    assert_eq!(catnet(&["validate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn resource_caps_are_overridable() {
    let base = ["lto", "--model", "levin_wen", "--category", "vec_z2", "--lattice", "5x5", "--axioms", "1"];
    assert_eq!(catnet(&base).status.code(), Some(0));
    let mut capped = base.to_vec();
    capped.extend(["--sparse-cap", "10", "--dense-cap", "10"]);
    let out = catnet(&capped);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn boundary_and_net_suites_pass() {
    let (code, doc) = report(&["boundary", "--category", "vec_z2"]);
    assert_eq!(code, 0);
    assert_eq!(item(&doc, "2x1/dim")["actual"], 8);
    assert_eq!(catnet(&["boundary", "--module", "module:vec_over_z2"]).status.code(), Some(0));
    assert_eq!(catnet(&["net", "--category", "toric_center", "--region", "2x2"]).status.code(), Some(0));
    assert_eq!(catnet(&["chain", "--category", "fibonacci", "--n", "4"]).status.code(), Some(0));
}

#[test]
fn all_passes() {
    let (code, doc) = report(&["all"]);
    assert_eq!(code, 0);
    assert!(doc["items"].as_array().unwrap().len() > 100);
}
