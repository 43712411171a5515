use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paritymbqc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn layout(dir: &Path, n: usize) -> PathBuf {
    let out = run(&["lhz", "build", "--n", &n.to_string()]);
    assert!(out.status.success());
    write(dir, "layout.json", std::str::from_utf8(&out.stdout).unwrap())
}

fn program(dir: &Path) -> PathBuf {
    let l = std::fs::read_to_string(layout(dir, 3)).unwrap();
    let text = format!(
        r#"{{"layout": {l}, "layers": [
            {{"theta": {{"(12)": 0.4, "(23)": -1.1}}, "alpha": {{"1": 0.3}}, "phi": {{"2": 0.9}}}},
            {{"theta": {{"(13)": 2.0}}, "alpha": {{"3": -0.5}}}}],
          "input": {{"seed": 7}}}}"#
    );
    write(dir, "program.json", &text)
}

const P3: &str = r#"{"vertices":["1","2","3"],"edges":[["1","2"],["2","3"]],"inputs":["1","3"],"outputs":["1","3"]}"#;

#[test]
fn build_layout() {
    let out = run(&["lhz", "build", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 3);
    assert_eq!(v["parity"].as_array().unwrap().len(), 3);
    assert_eq!(v["constraints"].as_array().unwrap().len(), 6);
}

#[test]
fn zero_data_qubits_is_an_input_error() {
    let out = run(&["lhz", "build", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn graph_export() {
    let dir = tempfile::tempdir().unwrap();
    let l = layout(dir.path(), 3);
    let g = json(&run(&["lhz", "graph", "--layout", l.to_str().unwrap()]));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(g["edges"].as_array().unwrap().len(), 6);
    assert_eq!(g["inputs"], serde_json::json!(["1", "2", "3"]));

    let dot = run(&["lhz", "graph", "--layout", l.to_str().unwrap(), "--format", "dot"]);
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("\"1\" [shape=box]") && dot.contains("\"(12)\" [shape=circle]"));
}

#[test]
fn prop1_holds_for_built_layouts() {
    let dir = tempfile::tempdir().unwrap();
    for n in 2..=5 {
        let l = layout(dir.path(), n);
        let out = run(&["stab", "check-prop1", "--layout", l.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["equal"], true);
    }
}

#[test]
fn compare_agrees_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = program(dir.path());
    let args = ["compare", "--program", p.to_str().unwrap(), "--tol", "1e-10", "--branches", "all"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let v = json(&a);
    assert_eq!(v["agree"], true);
    assert!(v["distance"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["parity"]["branches"], 64);

    let b = bin().args(args).env("PARITYMBQC_WORKERS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn impossible_tolerance_is_a_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let p = program(dir.path());
    let out = run(&["compare", "--program", p.to_str().unwrap(), "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["agree"], false);
}

#[test]
fn sampled_runs_depend_only_on_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p = program(dir.path());
    let args = |seed: &'static str| {
        run(&[
            "sim",
            "parity",
            "--program",
            p.to_str().unwrap(),
            "--branches",
            "sample",
            "--seed",
            seed,
            "--samples",
            "5",
        ])
    };
    let (a, b, c) = (args("11"), args("11"), args("12"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let v = json(&a);
    assert_eq!(v["deterministic"], true);
    assert_eq!(v["summary"]["branches"], 5);
}

#[test]
fn mbqc_engine_accepts_parity_programs() {
    let dir = tempfile::tempdir().unwrap();
    let p = program(dir.path());
    let out = run(&["sim", "mbqc", "--program", p.to_str().unwrap(), "--branches", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["measurements"], 6);
    assert_eq!(v["summary"]["reference"]["labels"], serde_json::json!(["1", "2", "3"]));
}

#[test]
fn gflow_search_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", P3);
    let found = json(&run(&["gflow", "search", "--graph", g.to_str().unwrap()]));
    assert_eq!(found["found"], true);
    assert_eq!(found["flow"]["g"]["2"], serde_json::json!(["2"]));
    let f = write(dir.path(), "f.json", &found["flow"].to_string());
    let out = run(&["gflow", "verify", "--graph", g.to_str().unwrap(), "--flow", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);
}

#[test]
fn invalid_flow_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", P3);
    let f = write(dir.path(), "f.json", r#"{"g":{"2":[]},"layers":[["2"],["1","3"]]}"#);
    let out = run(&["gflow", "verify", "--graph", g.to_str().unwrap(), "--flow", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["violation"]["vertex"], "2");
    assert_eq!(v["violation"]["condition"], "PlaneYZ");
}

#[test]
fn search_on_triangle_with_two_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "k3.json",
        r#"{"vertices":["1","2","3"],"edges":[["1","2"],["1","3"],["2","3"]],"inputs":["1","2"],"outputs":["1","2"]}"#,
    );
    let v = json(&run(&["gflow", "search", "--graph", g.to_str().unwrap()]));
    assert_eq!(v["found"], true);
    assert_eq!(v["bipartite"], false);
    assert_eq!(v["resource_bipartite"], true);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let l = write(dir.path(), "l.json", r#"{"n": 2, "parity": [], "constraint": []}"#);
    let out = run(&["lhz", "graph", "--layout", l.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constraint"));

    let p = write(dir.path(), "p.json", r#"{"layout": {"n": 2}, "layers": [{"theta": {"(12)": "x"}}]}"#);
    let out = run(&["sim", "parity", "--program", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(run(&["sim", "mbqc", "--program", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["lhz", "build"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--max-n", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_exit_depends_on_bipartition_test() {
    let literal = run(&["sweep", "--max-n", "6"]);
    assert_eq!(literal.status.code(), Some(1));
    let v = json(&literal);
    assert_eq!(v["passed"], false);
    assert_eq!(v["discrepancies_explained_by_input_edges"], true);
    assert_eq!(v["report"]["total"]["graphs"], 143);

    let resource = run(&["sweep", "--max-n", "6", "--resource-graph"]);
    assert_eq!(resource.status.code(), Some(0));
    assert_eq!(json(&resource)["report"]["total"]["resource_discrepancies"], 0);
}
