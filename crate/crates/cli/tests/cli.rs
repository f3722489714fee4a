use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MAVERICK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/maverick.json");

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coset"))
        .args(args)
        .env("COSET_CACHE_DIR", cache)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn wzw_s_matrix_su2_level1() {
    let o = run(&["wzw", "2", "1", "--emit", "s"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["labels"], serde_json::json!(["(0)", "(1)"]));
    let s = &v["S"];
    let h = 0.5f64.sqrt();
    for (i, j, sign) in [(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0)] {
        let re = s[i][j][0].as_f64().unwrap();
        assert!((re - sign * h).abs() < 1e-12);
        assert!(s[i][j][1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn wzw_verify_passes() {
    let o = run(&["wzw", "3", "2", "--emit", "verify"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn invalid_rank_is_usage_error() {
    assert_eq!(code(&run(&["wzw", "1", "1"])), 2);
    assert_eq!(code(&run(&["wzw", "9", "1"])), 2);
    assert_eq!(code(&run(&["coset", "2", "0", "1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["wzw", "2", "1", "--tolerance", "-1"])), 2);
}

#[test]
fn coset_sectors_show_fixed_point_split() {
    let o = run(&["coset", "2", "2", "2", "--emit", "sectors"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let sectors = v["sectors"].as_array().unwrap();
    let fixed: Vec<&Value> = sectors.iter().filter(|s| s["multiplicity"] == 2).collect();
    assert_eq!(fixed.len(), 2);
    assert_eq!(fixed[0]["resolution"], 1);
    assert_eq!(fixed[1]["resolution"], 2);
    for s in &fixed {
        assert!((s["qdim"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    }
}

#[test]
fn coset_verify_passes() {
    for args in [["2", "1", "1"], ["2", "2", "2"], ["3", "1", "2"]] {
        let mut a = vec!["coset"];
        a.extend(args);
        let o = run(&a);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn non_prime_fixed_point_is_out_of_scope() {
    let o = run(&["coset", "4", "2", "2", "--emit", "s"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("scope"));
}

#[test]
fn kw_diagonal_passes() {
    let o = run(&[
        "kw",
        "--diagonal",
        "2",
        "1",
        "1",
        "--checks",
        "kwc,kwh,cond2",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn maverick_fails_kwh_but_satisfies_kwc() {
    let o = run(&["kw", "--branching", MAVERICK, "--checks", "kwh"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert!(!v["kwh"]["violations"].as_array().unwrap().is_empty());

    let o = run(&["kw", "--branching", MAVERICK, "--checks", "kwc"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_branching_file_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"numerator": 3}"#).unwrap();
    let o = run(&["kw", "--branching", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let missing = dir.path().join("absent.json");
    assert_eq!(
        code(&run(&["kw", "--branching", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn invariant_at_zero_framing_is_one() {
    let o = run(&["invariant", "--wzw", "2", "1", "--p", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn invariant_probe_reports_both_orientations() {
    let o = run(&["invariant", "--coset", "2", "1", "1", "--p", "3", "--probe"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let probe = v["probe"].as_array().unwrap();
    assert_eq!(probe.len(), 2);
    assert_eq!(probe[0]["p"], 3);
    assert_eq!(probe[1]["p"], -3);
    assert!(probe[0]["power"].is_i64());
}

#[test]
fn probe_requires_a_coset() {
    assert_eq!(
        code(&run(&[
            "invariant",
            "--wzw",
            "2",
            "1",
            "--p",
            "1",
            "--probe"
        ])),
        2
    );
}

#[test]
fn data_round_trips_through_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["coset", "2", "1", "1", "--emit", "data"]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("ising.json");
    fs::write(&path, &o.stdout).unwrap();

    let direct = json(&run_in(
        dir.path(),
        &["invariant", "--coset", "2", "1", "1", "--p", "2"],
    ));
    let file = json(&run_in(
        dir.path(),
        &["invariant", "--data", path.to_str().unwrap(), "--p", "2"],
    ));
    for k in 0..2 {
        let a = direct["value"][k].as_f64().unwrap();
        let b = file["value"][k].as_f64().unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn data_is_json_only() {
    assert_eq!(
        code(&run(&[
            "wzw", "2", "1", "--emit", "data", "--format", "csv"
        ])),
        2
    );
}

#[test]
fn csv_and_table_formats() {
    let o = run(&["wzw", "2", "2", "--emit", "t", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,delta,T.re,T.im"));
    assert_eq!(lines.count(), 3);

    let o = run(&["coset", "2", "1", "1", "--format", "pretty-table"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("check"));
    assert!(text.contains("PASS") && !text.contains("FAIL"));
}

#[test]
fn cache_hit_on_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_in(dir.path(), &["coset", "2", "2", "2", "--emit", "t"]);
    assert!(!stderr(&first).contains("cache hit"));
    let second = run_in(dir.path(), &["coset", "2", "2", "2", "--emit", "t"]);
    assert!(stderr(&second).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn no_cache_flag_leaves_directory_empty() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["wzw", "2", "3", "--emit", "s", "--no-cache"]);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn tampered_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["wzw", "3", "2", "--emit", "s"];
    let clean = run_in(dir.path(), &args);
    let entries: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 1);

    let mut entry: Value = serde_json::from_str(&fs::read_to_string(&entries[0]).unwrap()).unwrap();
    let payload = entry["payload"].as_str().unwrap().replacen("0.", "0.1", 1);
    entry["payload"] = payload.into();
    fs::write(&entries[0], entry.to_string()).unwrap();

    let o = run_in(dir.path(), &args);
    assert_eq!(code(&o), 0);
    let err = stderr(&o);
    assert!(err.contains("WARN") && err.contains("corrupt"), "{err}");
    assert_eq!(o.stdout, clean.stdout);

    let again = run_in(dir.path(), &args);
    assert!(stderr(&again).contains("cache hit"));
}
