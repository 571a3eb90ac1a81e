use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn loctool(args: &[&str]) -> Output {
    loctool_env(args, None)
}

fn loctool_env(args: &[&str], caps: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_loctool"));
    cmd.args(args).env_remove("LOCTOOL_CAPS");
    if let Some(c) = caps {
        cmd.env("LOCTOOL_CAPS", c);
    }
    cmd.output().expect("loctool runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn catalog_listing_and_kind_filter() {
    let all = loctool(&["catalog"]);
    assert_eq!(code(&all), 0);
    assert_eq!(stdout(&all).lines().count(), 18);
    let fusion = loctool(&["catalog", "--kind", "fusion"]);
    assert_eq!(code(&fusion), 0);
    assert!(stdout(&fusion).lines().all(|l| l.contains(" fusion ")));
    assert_eq!(stdout(&fusion).lines().count(), 7);
    let bad = loctool(&["catalog", "--kind", "bogus"]);
    assert_eq!(code(&bad), 3);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown kind"));
}

#[test]
fn passing_and_failing_checks() {
    let ok = loctool(&["check", "--instance", "s4-d8", "--run", "saturation", "--p", "2"]);
    assert_eq!(code(&ok), 0);
    let report: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["consistent"], Value::Bool(true));
    let bad = loctool(&["check", "--instance", "d8-nonsat", "--run", "saturation"]);
    assert_eq!(code(&bad), 1);
    let kernel = loctool(&["check", "--instance", "s4-kernel", "--run", "theorem-b"]);
    assert_eq!(code(&kernel), 0);
}

#[test]
fn input_errors_exit_with_three() {
    for args in [
        vec!["check", "--instance", "s4-d8", "--run", "theorem-b"],
        vec!["check", "--instance", "s4-d8", "--run", "no-such-check"],
        vec!["check", "--instance", "no-such-instance", "--run", "saturation"],
        vec!["check", "--instance", "s4-d8", "--run", "saturation", "--p", "3"],
        vec!["check", "--instance", "s4-locality", "--run", "validate-locality", "--depth", "0"],
        vec!["suite", "--filter", "no-such-criterion"],
        vec!["frobnicate"],
        vec!["check", "--run", "saturation"],
    ] {
        assert_eq!(code(&loctool(&args)), 3, "{args:?}");
    }
    assert_eq!(code(&loctool(&["--help"])), 0);
}

#[test]
fn lowered_caps_exit_with_three() {
    let o = loctool_env(&["check", "--instance", "gl2-3-sd16", "--run", "saturation"], Some("morphisms=10"));
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("10"));
    let o = loctool_env(&["catalog"], Some("bogus=1"));
    assert_eq!(code(&o), 0);
    let o = loctool_env(&["check", "--instance", "s4-d8", "--run", "saturation"], Some("bogus=1"));
    assert_eq!(code(&o), 3);
}

#[test]
fn wrong_tstar_is_not_applicable() {
    let export = loctool(&["export", "--instance", "s4-product"]);
    assert_eq!(code(&export), 0);
    let mut inst: Value = serde_json::from_str(&stdout(&export)).unwrap();
    inst["payload"]["Tstar"] = serde_json::json!([0]);
    let path = scratch("bad-tstar.json");
    std::fs::write(&path, serde_json::to_string_pretty(&inst).unwrap()).unwrap();
    let o = loctool(&["check", "--instance", path.to_str().unwrap(), "--run", "product-nh"]);
    assert_eq!(code(&o), 2);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let clauses = report["clauses"].as_array().unwrap();
    let failed_pre: Vec<&str> = clauses
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("pre:") && c["verdict"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed_pre.is_empty(), "{report}");
}

#[test]
fn exported_files_check_like_the_catalog() {
    let export = loctool(&["export", "--instance", "s4-d8"]);
    let path = scratch("s4-d8.json");
    std::fs::write(&path, stdout(&export)).unwrap();
    let out = scratch("s4-d8-report.json");
    let o = loctool(&["check", "--instance", path.to_str().unwrap(), "--run", "classify-cr", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["theorem"], "classify-cr");
}

#[test]
fn suite_filter_prints_one_line_and_an_aggregate() {
    let o = loctool(&["suite", "--filter", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("criterion  2") && first.contains("PASS"), "{first}");
    let json_start = text.find('{').unwrap();
    let agg: Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(agg["exit_code"], 0);
    assert_eq!(agg["criteria"].as_array().unwrap().len(), 1);
}
