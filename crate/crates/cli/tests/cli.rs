use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn gmbqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmbqc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = gmbqc(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn ghz_example_report() {
    let r = json(&["example", "ghz-or", "--format", "json", "--canonical"]);
    assert!((r["computation"]["witness"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(r["computation"]["target"], serde_json::json!([0, 1, 1, 1]));
    assert_eq!(r["hvm"]["delta"]["delta"], 1);
    assert_eq!(r["prop1"]["verdict"], "contextual");
    let values = r["quasi"]["distinct_values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert!((values[0].as_f64().unwrap() + 1.0 / 64.0).abs() < 1e-12);
    assert!((values[1].as_f64().unwrap() - 3.0 / 64.0).abs() < 1e-12);
    assert!(r.get("meta").is_none());
}

#[test]
fn square_and_bell_reports() {
    let r = json(&["example", "mermin-square", "--format", "json"]);
    assert_eq!(r["hvm"]["assignment_count"], 0);
    assert_eq!(r["proofs"]["parity"]["type"], "parity");
    assert_eq!(r["proofs"]["symmetry_element"], "H1");
    assert!(r["meta"]["version"].is_string());
    let r = json(&["example", "bell-identity", "--format", "json"]);
    assert_eq!(r["hvm"]["delta"]["delta"], 0);
    assert_eq!(r["prop1"]["verdict"], "inconclusive");
    assert_eq!(r["phase"]["exact_member_exists"], true);
}

#[test]
fn canonical_output_is_deterministic() {
    let args = ["example", "ghz-or", "--format", "json", "--canonical", "--seed", "17", "--shots", "300"];
    let a = gmbqc(&args);
    let b = gmbqc(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = ["example", "dressed-star"];
    assert_eq!(gmbqc(&text).stdout, gmbqc(&text).stdout);
}

#[test]
fn instance_file_reproduces_fixture_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.json");
    let exported = gmbqc(&["example", "ghz-or", "--emit-instance"]);
    assert!(exported.status.success());
    fs::write(&path, &exported.stdout).unwrap();
    let p = path.to_str().unwrap();
    let from_file = gmbqc(&["analyze", p, "--format", "json", "--canonical", "--seed", "5"]);
    let builtin = gmbqc(&["example", "ghz-or", "--format", "json", "--canonical", "--seed", "5"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, builtin.stdout);
    // Subcommands accept the file in place of a fixture name.
    assert_eq!(json(&["delta", p, "--format", "json"])["delta"]["delta"], 1);
    assert_eq!(json(&["delta", p, "--target", "0000", "--format", "json"])["delta"]["delta"], 0);
}

const GHZ: &str = r#"{
    "n_qubits": 3,
    "observables": ["+III", "+XII", "+IXI", "+IIX", "+YII", "+IYI", "+IIY", "+XXX", "+XYY", "+YXY", "+YYX"],
    "measurable": [1, 2, 3, 4, 5, 6],
    "outputs": [7, 8, 9, 10],
    "reference_context": [1, 2, 3],
    "b_e": 7,
    "group": {"circuits": [[["A", 1], ["A", 2]], [["A", 0], ["A", 2]]]},
    "state": {"type": "stabilizer", "generators": ["+XXX", "-XYY", "-YXY", "-YYX"]}
}"#;

#[test]
fn handwritten_instance_analyzes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.json");
    fs::write(&path, GHZ).unwrap();
    let r = json(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(r["hvm"]["delta"]["delta"], 1);
    assert_eq!(r["extension"]["lambda_trivial"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Usage errors.
    assert_eq!(gmbqc(&["example", "no-such-fixture"]).status.code(), Some(1));
    assert_eq!(gmbqc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gmbqc(&["example", "ghz-or", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(gmbqc(&["--help"]).status.code(), Some(0));
    assert_eq!(json(&["example", "--format", "json"])["fixtures"].as_array().unwrap().len(), 6);
    // A ± pair is refused while building the set.
    let pm = dir.path().join("pm.json");
    fs::write(&pm, GHZ.replace("\"+YYX\"", "\"-XXX\"")).unwrap();
    let out = gmbqc(&["analyze", pm.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("XXX"));
    // Schema violations.
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n_qubits": 1}"#).unwrap();
    assert_eq!(gmbqc(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    // Twelve qubits of unrelated X and Z give a 24-dimensional assignment space.
    let n = 12;
    let mut obs = vec![format!("+{}", "I".repeat(n))];
    for q in 0..n {
        for l in ['X', 'Z'] {
            let mut s: Vec<char> = "I".repeat(n).chars().collect();
            s[q] = l;
            obs.push(format!("+{}", s.into_iter().collect::<String>()));
        }
    }
    obs.push(format!("+XX{}", "I".repeat(n - 2)));
    let measurable: Vec<usize> = (1..=2 * n).collect();
    let generators: Vec<String> = (0..n).map(|q| obs[1 + 2 * q].clone()).collect();
    let big = serde_json::json!({
        "n_qubits": n,
        "observables": obs,
        "measurable": measurable,
        "outputs": [2 * n + 1],
        "reference_context": [1, 3],
        "b_e": 2 * n + 1,
        "group": {"circuits": []},
        "state": {"type": "stabilizer", "generators": generators},
    });
    let big_path = dir.path().join("big.json");
    fs::write(&big_path, big.to_string()).unwrap();
    let out = gmbqc(&["analyze", big_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(gmbqc(&["h2", "--module", "fixture:ghz-or", "--exhaustive"]).status.code(), Some(3));
}

#[test]
fn certificates_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let found = gmbqc(&["proof-search", "mermin-square", "--format", "json", "--canonical"]);
    assert!(found.status.success());
    let report = dir.path().join("report.json");
    fs::write(&report, &found.stdout).unwrap();
    let ok = json(&["verify-certificate", "mermin-square", report.to_str().unwrap(), "--format", "json"]);
    assert_eq!(ok["valid"], true);
    assert_eq!(ok["certificates"], serde_json::json!([{"kind": "parity", "valid": true}, {"kind": "symmetry", "valid": true}]));
    // Dropping a row breaks the parity certificate.
    let mut value: Value = serde_json::from_slice(&found.stdout).unwrap();
    let mut parity = value["parity"].take();
    parity["rows"].as_array_mut().unwrap().pop();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, parity.to_string()).unwrap();
    assert_eq!(gmbqc(&["verify-certificate", "mermin-square", broken.to_str().unwrap()]).status.code(), Some(2));
    // The A1A2 element on the dressed star.
    let g11 = json(&["proof-search", "dressed-star", "--element", "g11", "--format", "json"]);
    assert_eq!(g11["symmetry_element"], "g11");
    assert_eq!(g11["related_parity_valid"], true);
    assert_eq!(json(&["proof-search", "ghz-or", "--format", "json"])["lemma4_obstruction"], true);
}

#[test]
fn quasiprob_csv_and_h2() {
    let out = gmbqc(&["quasiprob", "one-qubit", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,v,value"));
    let values: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 8);
    assert_eq!(values.iter().filter(|&&v| v == 0.25).count(), 4);
    let h = json(&["h2", "--group", "Z2xZ2", "--exhaustive", "--format", "json"]);
    assert_eq!(h["dim"], 3);
    assert_eq!(h["exhaustive_dim"], 3);
    assert_eq!(json(&["h2", "--group", "Z2", "--format", "json"])["dim"], 1);
    let w = json(&["witness", "ghz-or", "--shots", "100", "--format", "json"]);
    assert_eq!(w["sampling"]["mismatches"], serde_json::json!([0, 0, 0, 0]));
}
