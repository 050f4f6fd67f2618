use std::path::Path;
use std::process::{Command, Output};

use weyl_lab::SuiteReport;

fn weyl_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl-lab")).args(args).output().expect("binary runs")
}

fn schema() -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(report: &serde_json::Value) {
    let validator = jsonschema::validator_for(&schema()).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn parse(out: &Output) -> (serde_json::Value, SuiteReport) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    (serde_json::from_str(&text).unwrap(), serde_json::from_str(&text).unwrap())
}

#[test]
fn every_suite_passes_and_matches_schema() {
    for suite in ["weyl", "states", "gns", "torus", "measures"] {
        let out = weyl_lab(&["verify", suite]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stdout));
        let (json, report) = parse(&out);
        assert_valid(&json);
        assert_eq!(report.suite.name(), suite);
        assert_eq!(report.seed, 42);
        assert!(report.records.iter().all(|r| r.id.starts_with(suite)));
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let a = parse(&weyl_lab(&["verify", "measures", "--seed", "9"])).1;
    let b = parse(&weyl_lab(&["verify", "measures", "--seed", "9"])).1;
    assert_eq!(a.without_runtimes(), b.without_runtimes());
    let c = parse(&weyl_lab(&["verify", "measures", "--seed", "10"])).1;
    assert_ne!(a.without_runtimes(), c.without_runtimes());
}

#[test]
fn failing_check_sets_exit_code() {
    let out = weyl_lab(&["verify", "gns", "--tol", "gns.c0_decay=1e-4"]);
    assert_eq!(out.status.code(), Some(1));
    let (json, report) = parse(&out);
    assert_valid(&json);
    assert!(!report.passed());
}

#[test]
fn bad_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let garbage = dir.path().join("bad.csv");
    std::fs::write(&garbage, "1, 1/0, 2\n").unwrap();
    for args in [
        vec!["verify", "nope"],
        vec!["verify", "weyl", "--tol", "weyl.unknown=1"],
        vec!["verify", "weyl", "--tol", "weyl.unitarity=-1"],
        vec!["verify", "weyl", "--tol", "weyl.unitarity"],
        vec!["verify", "weyl", "--format", "xml"],
        vec!["verify", "states", "--points", empty.to_str().unwrap()],
        vec!["verify", "states", "--points", garbage.to_str().unwrap()],
        vec!["verify", "states", "--points", "/nonexistent/points.csv"],
    ] {
        let out = weyl_lab(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn user_inputs_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(&points, "2, 0, 0, 0, 0\n2, 1/2, 0, 1, -3\n2, 1/2, 0, 2, 1\n2, 0, 1, 0, 1/3\n").unwrap();
    let measure = dir.path().join("mu.json");
    std::fs::write(&measure, r#"{"d": 2, "atoms": [{"x": [0.0, 1.0], "re": 0.5}, {"x": [1.5, -1.0], "re": 0.25, "im": 0.1}]}"#)
        .unwrap();
    let out_file = dir.path().join("report.json");
    let out = weyl_lab(&["verify", "states", "--points", points.to_str().unwrap(), "--out", out_file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_valid(&json);

    let out = weyl_lab(&["verify", "measures", "--measure", measure.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn csv_summary_lists_each_check_once() {
    let out = weyl_lab(&["verify", "torus", "--format", "csv-summary"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().get(0), Some("id"));
    let ids: Vec<String> = reader.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(ids, weyl_lab::check_ids(weyl_lab::Suite::Torus));
}
