use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-cone"))
        .args(args)
        .env_remove("SPECTRAL_CONE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn weights(v: &Value, key: &str) -> Vec<f64> {
    v[key].as_array().unwrap().iter().map(|w| w.as_f64().unwrap()).collect()
}

#[test]
fn decompose_square_point() {
    let out = run(&["decompose", "--space", "square", "--element", "[0.5, 0.25]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(weights(&v, "spectrum"), vec![0.5, 0.25, 0.25]);
    assert_eq!(v["caratheodory"]["holds"], true);
}

#[test]
fn decompose_vertex_and_qubit() {
    let v = json(&run(&["decompose", "--space", "simplex3", "--element", "[1, 0, 0]"]));
    assert_eq!(weights(&v, "weights"), vec![1.0]);
    let v = json(&run(&["decompose", "--space", "complex2", "--element", "[[0.75, 0], [0, 0.25]]"]));
    let w = weights(&v, "weights");
    assert!((w[0] - 0.75).abs() < 1e-12 && (w[1] - 0.25).abs() < 1e-12);
}

#[test]
fn element_with_trace_and_embedded_space() {
    let v = json(&run(&["decompose", "--space", "simplex2", "--element", r#"{"trace": 2, "coords": [0.5, 0.5]}"#]));
    assert_eq!(weights(&v, "spectrum"), vec![1.0, 1.0]);
    let v = json(&run(&["entropy", "--element", r#"{"space": {"kind": "simplex", "n": 2}, "coords": [0.5, 0.5]}"#]));
    assert!((v["entropy"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn divergence_values() {
    let v = json(&run(&["divergence", "--space", "simplex2", "--element", "[0.5, 0.5]", "--to", "[1, 0]"]));
    assert_eq!(v["value"], "inf");
    let v = json(&run(&["divergence", "--space", "simplex2", "--element", "[1, 0]", "--to", "[0.5, 0.5]"]));
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn check_exit_codes() {
    let out = run(&["check", "locality", "--space", "simplex3", "--divergence", "kl", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["check"], "locality");
    let out = run(&["check", "locality", "--space", "simplex3", "--divergence", "squared-euclidean"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", "spectrality", "--space", "square"]);
    assert_eq!(out.status.code(), Some(2));
    let coords = &json(&out)["witness"]["state"]["coords"];
    assert_eq!(coords, &serde_json::json!([0.5, 0.5]));
    let out = run(&["check", "concavity", "--algebra", "complex2", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", "sufficiency", "--space", "simplex4", "--divergence", "kl", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_1() {
    for args in [
        &["decompose", "--space", "nowhere", "--element", "[1]"][..],
        &["decompose", "--space", "square", "--element", "[2, 2]"],
        &["check", "locality", "--space", "square", "--divergence", "kl"],
        &["check", "concavity", "--algebra", "octonion3"],
        &["landscape", "--space", "simplex4"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "locality", "--space", "complex3", "--divergence", "itakura-saito", "--trials", "20"];
    // itakura-saito has no matrix form
    assert_eq!(run(&args).status.code(), Some(1));
    let args = ["check", "locality", "--space", "simplex4", "--divergence", "itakura-saito", "--trials", "50", "--seed", "9"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_spectral-cone"))
        .args(&args[..args.len() - 2])
        .env("SPECTRAL_CONE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn landscape_files() {
    let dir = std::env::temp_dir().join(format!("spectral-cone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("square.csv");
    let out = run(&["landscape", "--space", "square", "--grid", "101", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,y,entropy\n"));
    assert_eq!(text.lines().count(), 1 + 101 * 101);
    let maxima: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("square.csv.maxima.json")).unwrap()).unwrap();
    assert_eq!(maxima.as_array().unwrap().len(), 4);
    let out = run(&["landscape", "--space", "disc", "--grid", "101"]);
    let maxima: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(maxima[0]["coords"], serde_json::json!([0.0, 0.0]));
    let out = run(&["landscape", "--space", "triangle", "--grid", "101"]);
    let maxima: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(maxima.as_array().unwrap().len(), 1);
    assert!((maxima[0]["entropy"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}
