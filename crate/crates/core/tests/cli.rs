use std::fs;
use std::path::PathBuf;

use capped_fisher::cli::{run, EXIT_MALFORMED, EXIT_OK, EXIT_REJECTED};
use capped_fisher::io::parse_trace;

const EXAMPLE1: &str = r#"{"buyers":[
    {"budget":"3","cap":"1","utilities":["5","1"]},
    {"budget":"1","cap":"inf","utilities":["2","1"]}]}"#;

const EXAMPLE2: &str = r#"{"buyers":[
    {"budget":"1","cap":"1","utilities":["1","1"]},
    {"budget":"1","cap":"inf","utilities":["0","1"]}]}"#;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("capped-fisher-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("capped-fisher").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn solve_example1_with_trace() {
    let inst = scratch("ex1.json", EXAMPLE1);
    let trace = inst.with_file_name("ex1.ndjson");
    let (code, out, _) = call(&["solve", inst.to_str().unwrap(), "--trace", trace.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["prices"], serde_json::json!(["10/13", "5/13"]));
    let lines = parse_trace(&fs::read_to_string(trace).unwrap()).unwrap();
    assert!(!lines.is_empty());
}

#[test]
fn solve_min_revenue() {
    let inst = scratch("ex2.json", EXAMPLE2);
    let (code, out, _) = call(&["solve", inst.to_str().unwrap(), "--objective", "min-revenue"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["prices"], serde_json::json!(["0", "1"]));
}

#[test]
fn malformed_inputs_exit_2() {
    let empty = scratch("empty.json", r#"{"buyers":[]}"#);
    assert_eq!(call(&["solve", empty.to_str().unwrap()]).0, EXIT_MALFORMED);
    let missing = std::env::temp_dir().join("capped-fisher-no-such-file.json");
    assert_eq!(call(&["solve", missing.to_str().unwrap()]).0, EXIT_MALFORMED);
    assert_eq!(call(&["solve"]).0, EXIT_MALFORMED);
    assert_eq!(call(&["frobnicate"]).0, EXIT_MALFORMED);
}

#[test]
fn verify_exit_codes() {
    let inst = scratch("ex2v.json", EXAMPLE2);
    let good = scratch("good.json", r#"{"prices":["1","1"],"allocation":[["1","0"],["0","1"]]}"#);
    let bad = scratch("bad.json", r#"{"prices":["2","1"],"allocation":[["1","0"],["0","1"]]}"#);
    let short = scratch("short.json", r#"{"prices":["1"],"allocation":[["1","0"],["0","1"]]}"#);
    let inst = inst.to_str().unwrap();

    let (code, out, _) = call(&["verify", inst, "--equilibrium", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["is_equilibrium"], true);

    let (code, out, err) = call(&["verify", inst, "--equilibrium", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_REJECTED);
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());
    assert!(!err.is_empty());

    assert_eq!(call(&["verify", inst, "--equilibrium", short.to_str().unwrap()]).0, EXIT_MALFORMED);
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--buyers", "4", "--goods", "3", "--max-value", "9", "--seed", "7"];
    let (code, first, _) = call(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(call(&args).1, first);
    let buyers = json(&first)["buyers"].as_array().unwrap().len();
    assert_eq!(buyers, 4);

    let (_, linear, _) = call(&[&args[..], &["--linear"]].concat());
    for b in json(&linear)["buyers"].as_array().unwrap() {
        assert_eq!(b["cap"], "inf");
    }
    assert_eq!(call(&["generate", "--buyers", "0", "--goods", "3", "--max-value", "9"]).0, EXIT_MALFORMED);
}
