use mhom::cli::run;
use mhom::report::{Report, SuiteReport};
use serde_json::Value;
use std::process::Command;

fn mhom(args: &[&str]) -> mhom::cli::Outcome {
    run(std::iter::once("mhom").chain(args.iter().copied()))
}

#[test]
fn homology_prints_groups() {
    let out = mhom(&["homology", "--space", "klein"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "H_0(klein) = Z\nH_1(klein) = Z + Z/2\nH_2(klein) = 0\n");
}

#[test]
fn relative_homology_of_the_disc() {
    let out = mhom(&["homology", "--space", "disc", "--pair", "boundary", "--theory", "lipschitz"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("= Z\n"), "{}", out.stdout);
    assert_eq!(out.stdout.lines().filter(|l| l.ends_with("= 0")).count(), 2);
}

#[test]
fn zero_budget_runs_no_checks() {
    let out = mhom(&["verify", "snf", "--budget", "0"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("PASS snf: 0 checks, 0 failures"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "nope"][..],
        &["homology"],
        &["homology", "--space", "torus", "--theory", "bogus"],
        &["homology", "--space", "torus", "--pair", "missing"],
        &["compare", "--space", "disc", "--pair", "boundary", "--degree", "2"],
        &["compare", "--space", "s1", "--degree", "3"],
        &["launch"],
    ] {
        let out = mhom(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = mhom(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Usage"));
}

#[test]
fn malformed_space_file_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"name\": \"x\",\n  \"vertices\": [[0,0]\n").unwrap();
    let out = mhom(&["homology", "--space", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("parse error") && out.stderr.contains("line 2"), "{}", out.stderr);
}

#[test]
fn space_files_round_trip_through_the_loader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.json");
    let text = r#"{"name": "circle", "ambient_dim": 2,
        "vertices": [[[0,1],[0,1]], [[1,1],[0,1]], [[0,1],[1,1]]],
        "simplices": [[0,1],[1,2],[0,2]], "subcomplexes": {}}"#;
    std::fs::write(&path, text).unwrap();
    let out = mhom(&["homology", "--space", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "H_0(circle) = Z\nH_1(circle) = Z\n");
}

#[test]
fn failing_reports_exit_with_one() {
    let mut suite = SuiteReport::new("demo");
    suite.check("truth", 0, false, || Value::Null);
    let mut report = Report::new("verify");
    report.suites.push(suite);
    assert_eq!(report.exit_code(), 1);
    assert!(report.summary().starts_with("FAIL demo: 1 checks, 1 failures"));
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_mhom");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let run = Command::new(exe)
            .args(["verify", "all", "--seed", "5", "--budget", "3", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(run.status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let json: Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(json["config"]["seed"], 5);
}

#[test]
fn compare_on_the_circle_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("compare.json");
    let out = mhom(&["compare", "--space", "s1", "--budget", "3", "--seed", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let names: Vec<&str> = json["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["iota", "bracket-generators", "fill", "cancel"]);
    assert_eq!(json["result"]["groups"], serde_json::json!(["Z", "Z"]));
}

#[test]
fn point_space_and_empty_subcomplex() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.json");
    let text = r#"{"name": "point", "ambient_dim": 1, "vertices": [[[0,1]]], "simplices": [[0]],
        "subcomplexes": {"none": []}}"#;
    std::fs::write(&path, text).unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(mhom(&["homology", "--space", path]).stdout, "H_0(point) = Z\n");
    let relative = mhom(&["homology", "--space", path, "--pair", "none", "--theory", "current"]);
    assert_eq!(relative.code, 0);
    assert!(relative.stdout.starts_with("H_0(point rel none) = Z\n"));
    assert_eq!(mhom(&["compare", "--space", path, "--budget", "2"]).code, 0);
}
