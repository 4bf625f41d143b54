use std::path::PathBuf;
use std::process::{Command, Output};

use ricci_moment::catalog::builtin_catalog;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ricci-moment"));
    c.env_remove("RICCI_BACKEND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "1");
    v
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ricci-moment-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn heisenberg_ricci() {
    let o = run(&["ricci", "--structure", "(0,0,12)", "--metric", "diag(1,1,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ric = diag(-1/2, -1/2, 1/2)\ns = -1/2\n");
    let v = json(&["ricci", "--structure", "(0,0,12)", "--metric", "diag(1,1,1)"]);
    assert_eq!(v["command"], "ricci");
    assert_eq!(v["ricci"]["general"]["ric_op"][2][2], "1/2");
    assert_eq!(v["ricci"]["general"]["scalar"], "-1/2");
}

#[test]
fn einstein_example_from_files() {
    let entry = builtin_catalog().into_iter().find(|e| e.name == "einstein-8").unwrap();
    let structure = temp_file("einstein8.txt", &entry.structure);
    assert_eq!(entry.metrics.len(), 4);
    for (i, m) in entry.metrics.iter().enumerate() {
        let metric = temp_file(&format!("metric{i}.txt"), &m.metric);
        let o = run(&["einstein", "--structure", structure.to_str().unwrap(), "--metric", metric.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "Einstein, λ = 7/15, s = 56/15\n", "{}", m.metric);
    }
}

#[test]
fn derivation_witness() {
    let o = run(&["derivations", "--structure", "(0,0,12,13,23)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness with trace 5"), "{}", stdout(&o));
    let v = json(&["derivations", "--structure", "(0,0,12,13,23)"]);
    assert_eq!(v["witness_trace"], "5");
    assert_eq!(v["der_in_sl"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--structure", "(0,0,"]).status.code(), Some(2));
    assert_eq!(run(&["ricci", "--structure", "(0,12,-13)", "--metric", "diag(1,1,1)", "--route", "killing-zero"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "verify", "--file", "/nonexistent/catalog.jsonl"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let good = temp_file("good.jsonl", r#"{"name":"heis","structure":"(0,0,12)","dim":3,"claims":{"nilpotent":true,"step":2}}"#);
    assert_eq!(run(&["catalog", "verify", "--file", good.to_str().unwrap()]).status.code(), Some(0));
    let bad = temp_file("bad.jsonl", r#"{"name":"heis","structure":"(0,0,12)","dim":3,"claims":{"nilpotent":true,"step":3}}"#);
    let o = run(&["catalog", "verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL heis"));
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = bin()
        .args(["classify", "--structure", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"(0,0,12,13)").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("step: 3"), "{}", stdout(&o));
}

#[test]
fn backend_selection() {
    let args = ["scalar", "--structure", "(0,0,12)", "--metric", "diag(1,1,1)"];
    assert_eq!(stdout(&run(&args)), "s = -1/2\n");
    let float = bin().env("RICCI_BACKEND", "float").args(args).output().unwrap();
    assert_eq!(stdout(&float), "s = -0.5\n");
    let flag = bin().env("RICCI_BACKEND", "float").arg("--backend").arg("exact").args(args).output().unwrap();
    assert_eq!(stdout(&flag), "s = -1/2\n");
    let approx = run(&["scalar", "--structure", "(0,0,1.4142135623730951*12)", "--metric", "diag(1,1,1)"]);
    assert_eq!(approx.status.code(), Some(0));
    assert!(!approx.stderr.is_empty());
    let s: f64 = stdout(&approx).trim().strip_prefix("s = ").unwrap().parse().unwrap();
    assert!((s + 1.0).abs() <= 1e-9, "{s}");
}

#[test]
fn every_command_emits_schema_tagged_json() {
    let heis = ["--structure", "(0,0,12)"];
    let pair = ["--structure", "(0,0,12)", "--metric", "diag(1,1,1)"];
    let cases: Vec<Vec<&str>> = vec![
        [&["classify"][..], &heis].concat(),
        [&["ricci"][..], &pair, &["--route", "all"]].concat(),
        [&["bforms"][..], &pair].concat(),
        [&["einstein"][..], &pair].concat(),
        [&["mn"][..], &pair].concat(),
        [&["holonomy"][..], &pair].concat(),
        [&["moment"][..], &pair].concat(),
        [&["scalar"][..], &pair].concat(),
        [&["gauge-derivative"][..], &pair, &["--x", "id"]].concat(),
        [&["critical"][..], &pair].concat(),
        [&["derivations"][..], &heis].concat(),
        [&["nice"][..], &heis, &["--diag", "1,2,3"]].concat(),
        [&["einstein-search"][..], &heis, &["--restarts", "4"]].concat(),
        vec!["catalog", "verify", "--filter", "147E"],
    ];
    for args in cases {
        let v = json(&args);
        let name = if args[0] == "catalog" { "catalog" } else { args[0] };
        assert!(v["command"].as_str().unwrap().starts_with(name), "{args:?}: {}", v["command"]);
        // round trip through text
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
}

#[test]
fn json_is_deterministic() {
    let entry = builtin_catalog().into_iter().find(|e| e.name == "einstein-8").unwrap();
    let args = ["--json", "--seed", "7", "einstein-search", "--structure", &entry.structure, "--patterns", "++++--++", "--restarts", "20"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let metrics = v["metrics"].as_array().unwrap();
    assert!(!metrics.is_empty());
    assert_eq!(metrics[0]["lambda"], "7/15");
}
