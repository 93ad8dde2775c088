use std::process::{Command, Output};

use serde_json::Value;

fn equilibria(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equilibria")).args(args).output().expect("binary runs")
}

fn record(args: &[&str]) -> Value {
    let out = equilibria(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_price_of_anarchy() {
    let r = record(&["solve", "cr-dilemma", "--concept", "poa"]);
    assert_eq!(r["outputs"]["value"], 3);
    assert_eq!(r["task"], "poa");
}

#[test]
fn scenario_params_are_forwarded() {
    let r = record(&["solve", "sensor-dilemma", "--params", r#"{"e": 0.4}"#, "--concept", "mixed-2x2"]);
    assert_eq!(r["config"]["params"]["e"], 0.4);
    assert_eq!(r["outputs"]["equilibria"].as_array().unwrap().len(), 1);
}

#[test]
fn same_seed_same_output_except_time() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let args = ["--seed", "4", "learn", "aumann", "--algo", "rm", "--iters", "3000"];
    assert_eq!(strip(record(&args)), strip(record(&args)));
}

#[test]
fn csv_trace_for_learning() {
    let out = equilibria(&["--format", "csv", "learn", "matching-pennies", "--algo", "fp", "--iters", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    let refused = equilibria(&["--format", "csv", "solve", "aumann"]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn coalition_and_formation_commands() {
    let core = record(&["coalition", "majority", "--solve", "core"]);
    assert_eq!(core["outputs"]["nonempty"], false);
    assert_eq!(core["outputs"]["lp_value"], 1.5);
    let shap = record(&["coalition", "majority", "--solve", "shapley"]);
    assert_eq!(shap["outputs"]["values"].as_array().unwrap().len(), 3);
    let form = record(&["--seed", "3", "formation", "ctd", "--rule", "ntu", "--shuffle"]);
    assert_eq!(form["converged"], true);
}

#[test]
fn formation_from_init_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("init.json");
    std::fs::write(&path, "[[0, 1], [2]]").unwrap();
    let r = record(&["formation", "majority", "--init", "file", "--init-file", path.to_str().unwrap()]);
    assert_eq!(r["converged"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = equilibria(&["--out", path.to_str().unwrap(), "scenario", "aumann"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["task"], "describe");
}

#[test]
fn batch_file_runs_every_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batch.json");
    std::fs::write(&path, r#"[{"game": "cr-dilemma", "task": "ne"}, {"game": "nope", "task": "ne"}]"#).unwrap();
    let out = equilibria(&["batch", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[1]["error"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(equilibria(&["solve", "no-such-game"]).status.code(), Some(2));
    assert_eq!(equilibria(&["solve", "aumann", "--params", "{"]).status.code(), Some(2));
    let big = equilibria(&["coalition", "majority", "--params", r#"{"players": 15}"#, "--solve", "core"]);
    assert_eq!(big.status.code(), Some(3));
    let strict = equilibria(&["--strict", "learn", "matching-pennies", "--algo", "brd-sim", "--iters", "10"]);
    assert_eq!(strict.status.code(), Some(4));
    let lenient = equilibria(&["learn", "matching-pennies", "--algo", "brd-sim", "--iters", "10"]);
    assert_eq!(lenient.status.code(), Some(0));
}
