use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn source(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("cufl-cli-{}-{name}.cufl", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn cufl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cufl"))
        .args(args)
        .env_remove("CUFL_FUEL")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--report", "json"];
    all.extend_from_slice(args);
    let out = cufl(&all);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (v, out.status.code().unwrap())
}

#[test]
fn check_unit_definition() {
    let f = source("unit", "def u : Unit = unit;\n#check u\n");
    let (v, code) = json(&["check", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["name"], "u");
    assert_eq!(r["type"], "Unit");
    assert_eq!(
        (r["alpha"].as_str(), r["beta"].as_str()),
        (Some("1"), Some("1"))
    );
    assert_eq!(r["status"], "Valid");
}

#[test]
fn run_with_trace_and_verification() {
    let f = source(
        "dup",
        "def d : Unit * Unit = (\\x^v. (x, x)) unit;\n#run d\n",
    );
    let (v, code) = json(&["run", "--trace", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["cost"], 2);
    assert_eq!(r["depth"], 2);
    assert_eq!(r["status"], "Valid");
    assert_eq!(r["trace"], serde_json::json!(["#1 rule=beta cost=2 at=."]));
}

#[test]
fn consistency_probe_finds_nothing() {
    let out = cufl(&["consistency", "--max-size", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no inhabitant of Bot found"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--report", "json", "check", &data("basics.cufl")];
    let a = cufl(&args);
    let b = cufl(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn json_schema_keys() {
    let (v, _) = json(&["check", &data("basics.cufl")]);
    assert!(v["command"].is_string());
    for r in v["results"].as_array().unwrap() {
        for key in ["name", "type", "alpha", "beta", "status", "cost", "depth"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    assert!(v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn violated_bound_fails() {
    let f = source(
        "bad",
        "def f : Unit ->[v; 1; 1] Unit * Unit = \\x^v. (x, x);\n#check f\n",
    );
    let (v, code) = json(&["check", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["results"][0]["status"], "Invalid");
    let d = &v["diagnostics"][0];
    assert_eq!(
        (d["severity"].as_str(), d["line"].as_u64()),
        (Some("error"), Some(1))
    );
}

#[test]
fn undecided_inequality_is_a_warning_unless_strict() {
    let f = source(
        "unknown",
        "def c : Unit ->[w; 3; max(w, 2) + 1] Unit * Unit = (\\x^v. prr (unit, \\y^w. (x, y))) unit;\n",
    );
    let (v, code) = json(&["check", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["status"], "ValidWithUnknownLeq");
    assert_eq!(v["diagnostics"][0]["severity"], "warning");
    let (_, strict) = json(&["--strict", "check", f.to_str().unwrap()]);
    assert_eq!(strict, 1);
}

#[test]
fn parse_errors_carry_positions() {
    let f = source("syntax", "def u : Unit = unit;\ndef v : Unit = (unit;\n");
    let (v, code) = json(&["check", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["diagnostics"][0]["line"], 2);
}

#[test]
fn missing_file_is_reported() {
    let (v, code) = json(&["check", "/nonexistent/input.cufl"]);
    assert_eq!(code, 1);
    assert_eq!(v["diagnostics"][0]["severity"], "error");
}

#[test]
fn fuel_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cufl"))
        .args(["run", &data("basics.cufl")])
        .env("CUFL_FUEL", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("fuel exhausted"));
}

#[test]
fn emulate_parity_machine() {
    let (v, code) = json(&["emulate", "tm", &data("parity.tm"), "1011"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["status"], "Valid");
    assert_eq!(v["results"][0]["output"], "state odd, tape 1011");
}

#[test]
fn emulate_multiplication() {
    let (v, code) = json(&["emulate", "loop", &data("mul.loop"), "3", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["output"], "mul(3, 4) = 12");
}

#[test]
fn enumerate_type() {
    let (v, code) = json(&["enumerate", "Unit * (Unit + Unit)", "--depth", "3"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["(unit, inl unit)", "(unit, inr unit)"]);
}

#[test]
fn quote_prints_data_term() {
    let f = source("quote", "def u : Unit = unit;\n#quote u\n");
    let (v, code) = json(&["quote", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["output"], "inl inl inr inl unit");
}
