use serde_json::Value;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn essalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_essalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let o = essalg(&all);
    (serde_json::from_slice(&o.stdout).expect("structured output is JSON"), o.status.code().unwrap())
}

#[test]
fn build_chain() {
    let (doc, code) = structured(&["build", "--poset", &fixture("chain3.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["result"]["axis_neighbourhoods"].as_array().unwrap().len(), 3);
    assert_eq!(doc["result"]["r_leq_2"].as_array().unwrap().len(), 4);
    assert_eq!(doc["config"]["budget"]["tuples"], 1 << 20);
}

#[test]
fn build_empty_poset() {
    let (doc, code) = structured(&["build", "--poset", &fixture("empty.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["size"], 1);
}

#[test]
fn build_rejects_cycles_and_bad_json() {
    let o = essalg(&["build", "--poset", &fixture("cyclic.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("antisymmetry fails for (1,2)"));
    let o = essalg(&["build", "--poset", &fixture("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn enumerate_counts() {
    let (doc, _) = structured(&["enum", "--poset", &fixture("discrete2.json")]);
    assert_eq!(doc["result"]["count"], 9);
    let (doc, _) = structured(&["enum", "--poset", &fixture("point.json")]);
    assert_eq!(doc["result"]["count"], 3);
    let (doc, code) = structured(&["enum", "--poset", &fixture("vee.json"), "--kind", "cminimal"]);
    assert_eq!(code, 0);
    let classes = doc["result"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0]["size"], 5);
    assert_eq!(classes[1]["size"], 4);
    let members = doc["result"]["members"].as_array().unwrap();
    assert_eq!(members.len(), 16);
    assert!(members.iter().all(|m| m["certificate"]["pairs"].as_array().unwrap().len() == m["elements"].as_array().unwrap().len()));
}

#[test]
fn cminimal_needs_unit_width() {
    let o = essalg(&["enum", "--poset", &fixture("vee.json"), "--kind", "cminimal", "--l", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_errors_are_named() {
    let o = essalg(&["enum", "--poset", &fixture("chain3.json"), "--budget-tuples", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exceeded"));
    let o = essalg(&["verify", "--scope", "bijection", "--bound", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = essalg(&["verify", "--scope", "oracle-crosscheck", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_m3() {
    let (doc, code) = structured(&["classify", "--poset", &fixture("m3.json")]);
    assert_eq!(code, 0);
    let sizes: Vec<u64> =
        doc["result"]["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert!(sizes.contains(&7));
    assert_eq!(doc["result"]["counterexample"]["property_star"], false);
}

#[test]
fn verify_scopes_pass() {
    for scope in ["bijection", "birkhoff", "congruence", "theorems"] {
        let o = essalg(&["verify", "--scope", scope, "--bound", "4"]);
        assert_eq!(o.status.code(), Some(0), "{scope}: {}", stdout(&o));
        assert!(stdout(&o).contains("result: pass"));
    }
    let o = essalg(&["verify", "--scope", "oracle-crosscheck", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn structured_output_ignores_thread_count() {
    let run = |t: &str| {
        essalg(&["verify", "--scope", "theorems", "--bound", "3", "--format", "structured", "--threads", t]).stdout
    };
    assert_eq!(run("1"), run("4"));
    let run = |t: &str| {
        essalg(&["enum", "--poset", &fixture("chain3.json"), "--kind", "cminimal", "--format", "structured", "--threads", t])
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}
