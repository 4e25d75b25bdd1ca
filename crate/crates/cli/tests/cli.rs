use std::path::PathBuf;
use std::process::{Command, Output};

fn cogh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogh"))
        .args(args)
        .env_remove("COGH_LOG")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_the_cat_tree() {
    let o = cogh(&["validate", &fixture("the_cat.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("valid tree"));
}

#[test]
fn validate_servo_hierarchy() {
    let o = cogh(&["validate", &fixture("servo.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn validate_cycle_fails() {
    let o = cogh(&["validate", &fixture("cyclic.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cycle"));

    let o = cogh(&["validate", "--json", &fixture("cyclic.json")]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["valid"], false);
    assert_eq!(report["violations"][0]["kind"], "cycle");
}

#[test]
fn validate_bad_tree_fails() {
    let o = cogh(&["validate", &fixture("bad_tree.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("root"));
}

#[test]
fn validate_malformed_is_input_error() {
    let o = cogh(&["validate", &fixture("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));
}

#[test]
fn validate_missing_file_and_unknown_bundle() {
    let o = cogh(&["validate", "/no/such/file.json"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(
        &path,
        r#"{"world_node":"N0","nodes":[{"id":"N1","bundle":"mystery"}],"edges":[]}"#,
    )
    .unwrap();
    let o = cogh(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mystery"));
}

#[test]
fn bp_the_cat_reads_a() {
    let o = cogh(&["bp", &fixture("the_cat.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("BEL(N2) = [0, 1]"), "{out}");
    assert!(out.contains("BEL(N4) = [0, 1]"), "{out}");
    assert!(out.contains("1/1 trees pass"));
}

#[test]
fn bp_builtin_fixture_by_default() {
    let o = cogh(&["bp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("THE/CAT: PASS"));
}

#[test]
fn bp_random_suite() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("reports.json");
    let o = cogh(&[
        "bp",
        "--random",
        "100",
        "--seed",
        "7",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("100/100 trees pass at tolerance 1e-9"));
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 100);
    assert_eq!(reports[0]["report"]["outcome"]["status"], "match");
}

#[test]
fn bp_zero_tolerance_fails() {
    let o = cogh(&["bp", "--tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let o = cogh(&["bp", "--tolerance", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bp_degenerate_evidence_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(
        &path,
        r#"{"processors":[
            {"id":"r","n":2,"external_input":[1,0]},
            {"id":"c","n":2,"parent":"r","matrix":[1,0,0,1],"external_input":[0,1]}]}"#,
    )
    .unwrap();
    let o = cogh(&["bp", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("degenerate"));
}

#[test]
fn servo_defaults_dominate() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let summary = dir.path().join("summary.json");
    let o = cogh(&[
        "servo",
        "--trials",
        "100",
        "--seed",
        "42",
        "--csv",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(s["reduction_percent"].as_f64().unwrap() >= 90.0);
    assert_eq!(s["context"]["n"], 100);
    assert_eq!(s["no_context"]["n"], 100);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("trial,mode,mean_error\n"));
    assert_eq!(rows.lines().count(), 201);
    assert!(stdout(&o).contains("reduction: "));
}

#[test]
fn servo_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let json = dir.path().join(format!("{tag}.json"));
        let o = cogh(&[
            "servo",
            "--noise-sigma",
            "0",
            "--trials",
            "1",
            "--csv",
            csv.to_str().unwrap(),
            "--summary",
            json.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        (
            std::fs::read(csv).unwrap(),
            std::fs::read(json).unwrap(),
            o.stdout,
        )
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn servo_single_mode() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = cogh(&[
        "servo",
        "--mode",
        "no_context",
        "--trials",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 6);
    assert!(rows.lines().skip(1).all(|l| l.contains(",no_context,")));
    assert!(!stdout(&o).contains("reduction: "));
}

#[test]
fn servo_config_file_and_bad_params() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    std::fs::write(&cfg, r#"{"trials": 2, "noise_sigma": 0.0}"#).unwrap();
    let o = cogh(&["servo", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"n\": 2"));

    let o = cogh(&["servo", "--kalman-gain", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kalman_gain"));

    std::fs::write(&cfg, r#"{"trails": 2}"#).unwrap();
    let o = cogh(&["servo", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let o = cogh(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cogh(&["servo", "--mode", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}
