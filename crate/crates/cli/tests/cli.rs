use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity-forge"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("parity-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn qaoa_report_has_the_total_row() {
    let o = run(&["report", "--qaoa", "--n", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("qaoa,4,total,2,4,4,2/4/4")),
        "{text}"
    );
    let j = json(&run(&["report", "--qaoa", "--n", "4"]));
    let total = j["qaoa"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["row"] == "total")
        .unwrap()
        .clone();
    assert_eq!(total["depth"], "2/4/4");
}

#[test]
fn qaoa_report_on_three_qubits_fails() {
    let o = run(&["report", "--qaoa", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn qft_six_verifies() {
    let o = run(&["qft", "--n", "6", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let j = json(&o);
    assert_eq!(j["depth"]["cnot"], 14);
    assert_eq!(j["depth"]["measure"], 4);
    assert_eq!(j["verification"]["pass"], true);
}

#[test]
fn qft_report_covers_every_size() {
    let j = json(&run(&["report", "--qft", "--n", "6"]));
    let rows = j["qft"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["pass"] == true));
    assert!(j.get("qaoa").is_none());
}

#[test]
fn layout_has_ten_qubits() {
    let o = run(&["layout", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["qubits"].as_array().unwrap().len(), 10);
    assert_eq!(j["constraints"].as_array().unwrap().len(), 6);
}

#[test]
fn validate_reports_open_constraint() {
    let good = temp_file(
        "good.json",
        &String::from_utf8(run(&["layout", "--n", "3"]).stdout).unwrap(),
    );
    assert_eq!(
        run(&["validate", good.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let bad = temp_file(
        "bad.json",
        r#"{"n": 2, "qubits": [[0], [1]], "constraints": [[0, 1]]}"#,
    );
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        json(&o)["closure_failures"][0][1],
        serde_json::json!([0, 1])
    );
}

#[test]
fn schema_violations_exit_two_and_name_the_module() {
    let bad = temp_file(
        "broken.json",
        r#"{"n": 2, "qubits": [[0], [0]], "constraints": []}"#,
    );
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("code:"), "{}", stderr(&o));
    let o = run(&["qft", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("algorithms:"), "{}", stderr(&o));
    assert_eq!(
        run(&["qft", "--n", "3", "--policy", "sometimes"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["layout", "--n", "3", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn encode_and_decode_verify() {
    for cmd in ["encode", "decode"] {
        let o = run(&[cmd, "--n", "3", "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stderr(&o));
        let j = json(&o);
        assert_eq!(j["verification"]["branches"], "enumerate");
        assert_eq!(j["depth"]["measure"], 1);
    }
    let o = run(&["decode", "--n", "3", "--verify", "--policy", "forced:101"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn partial_decode_from_file() {
    let code = temp_file(
        "lhz4.json",
        &String::from_utf8(run(&["layout", "--n", "4"]).stdout).unwrap(),
    );
    let o = run(&[
        "decode",
        "--code",
        code.to_str().unwrap(),
        "--remove",
        "0-3,1-2",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["after"]["qubits"].as_array().unwrap().len(), 8);
}

#[test]
fn landscape_csv_is_reproducible() {
    let args = [
        "qaoa",
        "--n",
        "3",
        "--landscape",
        "4",
        "--seed",
        "5",
        "--format",
        "csv",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("beta,gamma,E_parity,E_logical,abs_delta")
    );
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn optimizer_output_is_reproducible() {
    let args = ["qaoa", "--n", "3", "--budget", "40", "--seed", "2"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["trace"].as_array().unwrap().len(), 40);
}

#[test]
fn graph_state_and_verify_commands() {
    let o = run(&["graphstate", "--n", "4", "--seed", "3", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["verify", "--n", "3", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["cross_engine"].as_array().unwrap().len(), 20);
}

#[test]
fn qubit_cap_comes_from_the_environment() {
    let o = run_env(
        &["qft", "--n", "6", "--verify", "--inputs", "1"],
        "PARITY_FORGE_MAX_QUBITS",
        "6",
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sim:"), "{}", stderr(&o));
    let o = run_env(
        &["qft", "--n", "3", "--verify"],
        "PARITY_FORGE_MAX_QUBITS",
        "lots",
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("parity-forge-out-{}.json", std::process::id()));
    let o = run(&["layout", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["n"], 2);
}
