//! End-to-end tests of the `mfwin` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mfwin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfwin"))
        .args(args)
        .env_remove("MFWIN_SUITE_DIR")
        .output()
        .expect("binary runs")
}

fn suite() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("paper-suite")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn suite_lists_scenarios_in_file_order() {
    let o = mfwin(&["suite", "list", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let files: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["file"].as_str().unwrap()).collect();
    assert!(files.len() >= 12, "{files:?}");
    let mut sorted = files.clone();
    sorted.sort();
    assert_eq!(files, sorted);
    assert!(files.contains(&"corank2_end_algebra.json"));
    assert!(files.contains(&"windows_n3_l2.json"));
}

#[test]
fn module_filter_and_unknown_module() {
    let o = mfwin(&["suite", "list", "--module", "windows", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(!v.as_array().unwrap().is_empty());
    assert!(v.as_array().unwrap().iter().all(|e| e["module"] == "windows"));
    let o = mfwin(&["suite", "list", "--module", "nonexistent", "--out", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o), serde_json::json!([]));
}

#[test]
fn corank2_scenario_passes_against_its_golden() {
    let p = suite().join("corank2_end_algebra.json");
    let o = mfwin(&["scenario", "run", p.to_str().unwrap(), "--out", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["golden"], "match");
    let table = &v["output"]["theta_table"];
    assert_eq!(table[0], serde_json::json!(["theta1", "theta1", "s"]));
    assert_eq!(table[3], serde_json::json!(["theta2", "theta2", "u"]));
}

#[test]
fn windows_scenario_reports_the_three_objects() {
    let p = suite().join("windows_n3_l2.json");
    let o = mfwin(&["scenario", "run", p.to_str().unwrap(), "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["output"]["s_plus"].as_array().unwrap().len(), 9);
    assert_eq!(v["output"]["s_minus_res"].as_array().unwrap().len(), 6);
    assert_eq!(v["output"]["objects"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = mfwin(&["suite", "run", "--out", "json"]);
    let b = mfwin(&["--jobs", "2", "suite", "run", "--out", "json"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn malformed_payloads_are_schema_errors() {
    let d = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{ not json"),
        ("unknown_op.json", r#"{"name": "x", "module": "windows", "operation": "nope", "input": {}}"#),
        ("extra_field.json", r#"{"name": "x", "module": "windows", "operation": "sets", "input": {}, "extra": 1}"#),
        ("bad_input.json", r#"{"name": "x", "module": "windows", "operation": "sets", "input": {"n": "three", "l": 0}}"#),
        ("missing.json", r#"{"name": "x", "module": "windows", "operation": "sets", "input": {"n": 3}}"#),
    ];
    for (name, body) in cases {
        let p = write(d.path(), name, body);
        let o = mfwin(&["scenario", "run", p.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{name}: {}", stdout(&o));
    }
}

#[test]
fn failed_checks_and_golden_mismatches_have_their_own_codes() {
    let d = tempfile::tempdir().unwrap();
    let fail = write(
        d.path(),
        "fail.json",
        r#"{"name": "f", "module": "windows", "operation": "sets", "input": {"n": 3, "l": 2, "expect_sizes": {"s_plus": 8, "s_minus_res": 6}}}"#,
    );
    assert_eq!(code(&mfwin(&["scenario", "run", fail.to_str().unwrap()])), 3);
    let op_err = write(d.path(), "op.json", r#"{"name": "o", "module": "windows", "operation": "sets", "input": {"n": 0, "l": 0}}"#);
    assert_eq!(code(&mfwin(&["scenario", "run", op_err.to_str().unwrap()])), 3);

    std::fs::create_dir(d.path().join("golden")).unwrap();
    std::fs::write(d.path().join("golden/g.json"), "{}\n").unwrap();
    let g = write(
        d.path(),
        "g.json",
        r#"{"name": "g", "module": "windows", "operation": "sets", "input": {"n": 3, "l": 2}, "golden": "golden/g.json"}"#,
    );
    assert_eq!(code(&mfwin(&["scenario", "run", g.to_str().unwrap()])), 4);
    assert_eq!(code(&mfwin(&["scenario", "run", g.to_str().unwrap(), "--update-golden"])), 0);
    assert_eq!(code(&mfwin(&["scenario", "run", g.to_str().unwrap()])), 0);
}

#[test]
fn suite_dir_can_be_overridden() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "b.json", r#"{"name": "b", "module": "windows", "operation": "sets", "input": {"n": 2, "l": 1}}"#);
    write(d.path(), "a.json", r#"{"name": "a", "module": "pencil", "operation": "strata", "input": {"system": [[[1, 0], [0, 2]], [[1, 0], [0, 1]]], "expect_total": 2}}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_mfwin"))
        .args(["suite", "list", "--out", "json"])
        .env("MFWIN_SUITE_DIR", d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let names: Vec<String> = json(&o).as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["a", "b"]);
    let o = Command::new(env!("CARGO_BIN_EXE_mfwin"))
        .args(["suite", "run"])
        .env("MFWIN_SUITE_DIR", d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // Schema errors outrank failures in the aggregate code.
    write(d.path(), "c.json", r#"{"name": "c", "module": "windows", "operation": "sets", "input": {"n": 3, "l": 2, "expect_sizes": {"s_plus": 1, "s_minus_res": 1}}}"#);
    let run = |dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_mfwin")).args(["suite", "run"]).env("MFWIN_SUITE_DIR", dir).output().unwrap()
    };
    assert_eq!(code(&run(d.path())), 3);
    write(d.path(), "d.json", "[]");
    assert_eq!(code(&run(d.path())), 2);
}

#[test]
fn direct_subcommands() {
    let d = tempfile::tempdir().unwrap();
    let w = write(d.path(), "w.json", "[[0, 3], [3, 0]]");
    let o = mfwin(&["windows", "reduce", "--weights", w.to_str().unwrap(), "--n", "3", "--out", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["output"]["final"].as_array().unwrap().len(), 8);

    let f = write(d.path(), "f.json", "[[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]");
    let o = mfwin(&["clifford", "center", "--form", f.to_str().unwrap(), "--out", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["output"]["center_dim"], 2);
    let o = mfwin(&["clifford", "build", "--form", f.to_str().unwrap(), "--field", "fp:7", "--out", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["output"]["dim"], 16);
    assert_eq!(json(&o)["output"]["field"], "fp:7");

    let s = write(d.path(), "s.json", "[[[1, 0], [0, 0]], [[0, 0], [0, 1]]]");
    let o = mfwin(&["pencil", "strata", "--system", s.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("discriminant"));

    let o = mfwin(&["windows", "sets", "--n", "3", "--l", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("S+"));

    assert_eq!(code(&mfwin(&["windows", "sets", "--n", "x", "--l", "2"])), 2);
    assert_eq!(code(&mfwin(&["clifford", "build", "--form", "/nonexistent.json"])), 2);
    assert_eq!(code(&mfwin(&["--field", "fp:8", "windows", "sets", "--n", "3", "--l", "2"])), 2);
}
