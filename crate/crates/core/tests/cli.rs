use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadamard"))
        .args(args)
        .current_dir(tests_dir().join("fixtures"))
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(tests_dir().join("golden").join(name)).expect("golden file exists")
}

fn check(args: &[&str], code: i32, golden_name: &str) {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(golden_name), "{args:?}");
}

#[test]
fn geometry_commands() {
    check(&["quasi", "quasi_euclidean.json"], 0, "quasi_euclidean.json");
    check(&["quasi", "quasi_same.json"], 0, "quasi_same.json");
    check(&["distance", "distance_rtree.json"], 0, "distance_rtree.json");
    check(&["geodesic", "geodesic_hyperbolic.json"], 0, "geodesic_hyperbolic.json");
    check(&["pair", "pair_rtree.json"], 0, "pair_rtree.json");
}

#[test]
fn operator_commands() {
    check(&["fitz", "--graph", "empty_graph.json"], 0, "fitz_empty.json");
    check(&["fitz", "identity_line.json"], 0, "fitz_identity.json");
    check(&["monotone-check", "identity_line.json"], 0, "monotone_identity.json");
    check(&["monotone-check", "anti_monotone.json"], 1, "monotone_anti.json");
    check(&["maximal-check", "identity_line.json"], 1, "maximal_identity.json");
    check(&["conjugate", "table_quadratic.json"], 0, "conjugate_quadratic.json");
    check(&["gamma-check", "table_quadratic.json"], 1, "gamma_quadratic.json");
    check(
        &["flatness", "nonflat_hyperbolic.json", "--lambda-grid", "0.5"],
        1,
        "flatness_hyperbolic.json",
    );
}

#[test]
fn csv_output() {
    check(
        &["quasi", "quasi_euclidean.json", "--format", "csv"],
        0,
        "quasi_euclidean.csv",
    );
    let out = run(&["paper-examples", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("computed,example,expected,pass,quantity,tolerance\n"));
    assert!(text.contains("-7/6,rtree,-7/6,true"));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hadamard"))
        .args(["distance", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let input = std::fs::read(tests_dir().join("fixtures/distance_rtree.json")).unwrap();
    child.stdin.take().unwrap().write_all(&input).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("distance_rtree.json"));
}

fn expect_input_error(args: &[&str], needle: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(needle), "{args:?}: {err}");
}

#[test]
fn input_errors_exit_2() {
    expect_input_error(&["quasi", "malformed.json"], "line 3, column");
    expect_input_error(&["distance", "bad_point.json"], "not on the hyperboloid");
    expect_input_error(&["quasi", "mismatch.json"], "$.xy[1]");
    expect_input_error(&["quasi", "missing.json"], "missing.json");
    expect_input_error(
        &["flatness", "nonflat_hyperbolic.json", "--lambda-grid", "0.5,2"],
        "outside [0, 1]",
    );
    expect_input_error(&["conjugate", "quasi_euclidean.json"], "missing \"table\"");
    expect_input_error(&["polar", "anti_monotone.json"], "missing universe");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(
        run(&["quasi", "quasi_same.json", "--format", "xml"]).status.code(),
        Some(2)
    );
}

#[test]
fn universe_flag_overrides_instance() {
    // with only the graph itself as universe, the identity line is maximal
    let dir = std::env::temp_dir().join(format!("hadamard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let u = dir.join("u.json");
    std::fs::write(
        &u,
        r#"{"pairs": [
            {"x": [-1], "xd": {"terms": [{"coeff": 1, "a": [0], "b": [-1]}]}},
            {"x": [0], "xd": {"terms": []}},
            {"x": [1], "xd": {"terms": [{"coeff": 1, "a": [0], "b": [1]}]}}
        ]}"#,
    )
    .unwrap();
    let out = run(&["maximal-check", "identity_line.json", "--universe", u.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sampled_flatness_is_seeded() {
    let dir = std::env::temp_dir().join(format!("hadamard-seed-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("samples.json");
    std::fs::write(&f, r#"{"space": {"kind": "euclidean", "dim": 3}, "samples": 30}"#).unwrap();
    let path = f.to_str().unwrap();
    let a = run(&["flatness", path, "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&["flatness", path, "--seed", "7"]).stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn worked_examples_all_pass() {
    let out = run(&["paper-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_pass"], serde_json::Value::Bool(true));
    assert!(v["rows"].as_array().unwrap().len() > 60);
}
