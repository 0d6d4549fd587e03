//! End-to-end behavior of the binary: exit codes, determinism, round trips.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const GOLDEN: &str = r#"{"alphabet":["0","1"],"forbidden":["11"]}"#;
const FULL2: &str = r#"{"alphabet":["0","1"],"forbidden":[]}"#;
const FIXED: &str = r#"{"vertices":["p"],"edges":[["p","0","p"]]}"#;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symchaos")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_golden_exits_zero_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let o = bin(&["classify", s(&g)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["header"]["tool"], "symchaos");
    assert_eq!(v["header"]["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["report"]["flags"]["densely_uniformly_chaotic"], "yes");
    assert_eq!(v["result"]["audit"]["ok"], true);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    for args in [
        vec!["analyze", s(&g)],
        vec!["construct", "-N", "3", "--proximal", s(&g)],
        vec!["criterion", s(&g), "--prox-n", "2", "--samples", "4", "--seed", "9"],
        vec!["witness", s(&g), "--pairs", "2"],
    ] {
        let a = bin(&args);
        let b = bin(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn tampered_certificate_names_failing_condition() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "full2.json", FULL2);
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&bin(&["construct", "-N", "2", "--proximal", s(&f), "-o", s(&cert)])), 0);
    assert_eq!(code(&bin(&["verify", s(&cert), s(&f)])), 0);

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    v["result"]["stages"][1]["k_n"] = Value::from(1);
    let bad = write(dir.path(), "bad.json", &v.to_string());
    let o = bin(&["verify", s(&bad), s(&f)]);
    assert_eq!(code(&o), 4);
    let failures = json(&o)["result"]["failures"].to_string();
    assert!(failures.contains("condition 6"), "{failures}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("condition 6"));
}

#[test]
fn verify_rejects_forged_classification() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let out = dir.path().join("k.json");
    assert_eq!(code(&bin(&["classify", s(&g), "-o", s(&out)])), 0);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    v["result"]["report"]["flags"]["liyorke"] = Value::from("no");
    let bad = write(dir.path(), "bad.json", &v.to_string());
    assert_eq!(code(&bin(&["verify", s(&bad), s(&g)])), 4);
}

#[test]
fn emitted_witnesses_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let wit = dir.path().join("wit");
    let o = bin(&["classify", s(&g), "--emit-witnesses", s(&wit)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["emitted"].as_array().unwrap().len(), 2);
    for f in ["pairs.json", "construction.json"] {
        assert_eq!(code(&bin(&["verify", s(&wit.join(f)), s(&g)])), 0, "{f}");
    }
}

#[test]
fn ellis_sweep_four() {
    let o = bin(&["ellis", "--sweep", "4"]);
    assert_eq!(code(&o), 0);
    let summary = json(&o)["result"]["summary"].as_str().unwrap().to_string();
    assert!(summary.starts_with("256 systems, 0 law violations"), "{summary}");
}

#[test]
fn ellis_single_map() {
    let o = bin(&["ellis", "--map", "1:2,2:3,3:1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["ideals"]["minimal_ideals"][0]["groups"][0]["elements"].as_array().unwrap().len(), 3);
    assert_eq!(code(&bin(&["ellis", "--map", "1:9"])), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let broken = write(dir.path(), "broken.json", "{not json");
    let empty = write(dir.path(), "empty.json", "");
    let cyc = write(dir.path(), "cycle.json", r#"{"vertices":["p","q"],"edges":[["p","a","q"],["q","b","p"]]}"#);
    assert_eq!(code(&bin(&["analyze"])), 2);
    assert_eq!(code(&bin(&["frobnicate"])), 2);
    assert_eq!(code(&bin(&["analyze", s(&broken)])), 3);
    assert_eq!(code(&bin(&["dot", s(&empty)])), 2);
    assert_eq!(code(&bin(&["hit", s(&g), "-U", "2", "-V", "0"])), 3);
    assert_eq!(code(&bin(&["hit", s(&g), "-U", "11", "-V", "0"])), 4);
    let o = bin(&["witness", s(&cyc)]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["error"]["reason"], "HypothesisUnmet");
    assert_eq!(code(&bin(&["construct", s(&cyc)])), 4);
}

#[test]
fn hit_reports_members_and_filter_law() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let o = bin(&["hit", s(&g), "-U", "1", "-V", "1", "-H", "6", "--filter-n", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["hitting_set"]["members"], serde_json::json!([2, 3, 4, 5, 6]));
    assert_eq!(v["result"]["filter_law"]["holds"], true);
}

#[test]
fn criterion_emits_product() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "full2.json", FULL2);
    let prod = dir.path().join("prod.json");
    let o = bin(&["criterion", s(&f), "--budget", "6", "--emit-product", s(&prod)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["report"]["satisfied"], true);
    let p = symchaos_core::shift::parse_sft(&fs::read_to_string(&prod).unwrap()).unwrap();
    assert_eq!(p.num_vertices(), 1);
}

#[test]
fn gen_corpus_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let run = |d: &Path| bin(&["gen-corpus", "--seed", "1", "--count", "10", "--out", s(d)]);
    assert_eq!(code(&run(&a)), 0);
    assert_eq!(code(&run(&b)), 0);
    assert_eq!(fs::read(a.join("manifest.json")).unwrap(), fs::read(b.join("manifest.json")).unwrap());
    let m: Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    let entries = m["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 10);
    assert!(m["result"]["transitive"].as_u64().unwrap() >= 5);
    for e in entries {
        let file = a.join(e["file"].as_str().unwrap());
        let text = fs::read_to_string(&file).unwrap();
        let x = symchaos_core::shift::parse_sft(&text).unwrap();
        assert_eq!(symchaos_core::shift::to_json(&x) + "\n", text);
    }
}

#[test]
fn gen_corpus_unary_alphabet() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["gen-corpus", "--seed", "3", "--count", "6", "--alphabet-max", "1", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0);
    for e in json(&o)["result"]["entries"].as_array().unwrap() {
        assert_eq!(e["stats"]["infinite"], false);
        assert_eq!(e["stats"]["fixed_points"], 1);
    }
}

#[test]
fn dot_exports() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "golden.json", GOLDEN);
    let f = write(dir.path(), "full2.json", FULL2);
    let p = write(dir.path(), "fixed.json", FIXED);
    let o = bin(&["dot", s(&g)]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(text.starts_with("// symchaos"));
    assert!(text.contains("digraph"));
    assert_eq!(text.matches("->").count(), 3);
    assert_eq!(o.stdout, bin(&["dot", s(&g)]).stdout);

    let o = bin(&["dot", s(&f), "--product", s(&p)]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("->").count(), 2);
    assert_eq!(text.lines().filter(|l| l.ends_with(';') && l.starts_with("  \"") && !l.contains("->")).count(), 1);

    let per2 = write(dir.path(), "per2.json", r#"{"vertices":["p","q"],"edges":[["p","a","q"],["q","b","p"],["p","c","q"]]}"#);
    let o = bin(&["dot", s(&per2), "--decomposition"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("label=\"a.b\""));
}
