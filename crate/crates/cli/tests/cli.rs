//! End-to-end runs of the `sbrm` binary.

use std::path::Path;
use std::process::{Command, Output};

fn sbrm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbrm")).args(args).env_remove("SBRM_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn ok(args: &[&str]) -> String {
    let o = sbrm(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn documented_moment_examples() {
    assert_eq!(ok(&["moments", "--model", "adjacency", "--order", "6"]).trim(), "t + 6 t^2 + 5 t^3");
    assert_eq!(ok(&["moments", "--model", "laplacian", "--order", "5", "--t", "1", "--d", "1"]).trim(), "212");
    assert_eq!(ok(&["moments", "--model", "diag-block", "--order", "1"]).trim(), "t");
}

#[test]
fn partial_evaluation_at_d_one_gives_walk_counts() {
    // at d = 1 the adjacency moment counts closed tree walks: mu4 = t + 2 t^2
    assert_eq!(ok(&["moments", "--model", "adjacency", "--order", "4", "--d", "1"]).trim(), "t + 2 t^2");
}

#[test]
fn json_moment_schema() {
    let out = ok(&["moments", "--model", "laplacian", "--order", "2", "--t", "1/2", "--d", "3", "--format", "json", "--c-form"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["model"], "laplacian");
    assert_eq!(v["order"], 2);
    assert_eq!(v["moment"][0]["t_power"], 1);
    // nu2 = 2 t + t^2 at t = 1/2
    assert_eq!(v["evaluation"]["value"], "5/4");
    assert_eq!(v["c_form"]["canonical"], false);
}

#[test]
fn over_cap_order_is_refused_with_estimate() {
    let o = sbrm(&["moments", "--model", "laplacian", "--order", "12"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--max-order"), "{err}");
    assert!(err.contains("e"), "no size estimate in {err}");
}

#[test]
fn max_order_unlocks_higher_orders() {
    let o = sbrm(&["moments", "--model", "diag-block", "--order", "9", "--max-order", "9", "--d", "1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    // at d = 1 the diagonal block is Poisson: the leading term is t^9
    assert!(stdout(&o).trim().ends_with("t^9"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["moments", "--model", "adjacency", "--order", "-2"],
        vec!["moments", "--model", "cycle", "--order", "2"],
        vec!["moments", "--model", "adjacency", "--order", "2", "--d", "x"],
        vec!["density", "--law", "mp", "--t", "-1"],
        vec!["simulate", "--model", "adjacency", "--N", "10", "--d", "1", "--Z", "20"],
        vec!["simulate", "--model", "adjacency", "--N", "50", "--d", "1", "--Z", "2", "--orders", "12"],
    ] {
        assert_eq!(sbrm(&args).status.code(), Some(2), "{args:?}");
    }
}

fn moments_with_cache(dir: &Path, extra: &[&str]) -> String {
    let mut args = vec!["moments", "--model", "laplacian", "--order", "6", "--format", "json", "--cache-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    ok(&args)
}

#[test]
fn cache_hit_and_bypass_agree() {
    let dir = tempfile::tempdir().unwrap();
    let bypass = moments_with_cache(dir.path(), &["--no-cache"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "--no-cache wrote an entry");
    let miss = moments_with_cache(dir.path(), &[]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_sbrm"))
        .args(["moments", "--model", "laplacian", "--order", "6", "--format", "json"])
        .env("SBRM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&o.stderr).contains("cache hit"));
    let hit = stdout(&o);
    assert_eq!(bypass, miss);
    assert_eq!(miss, hit);
}

#[test]
fn tampered_cache_entry_from_other_version_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let clean = moments_with_cache(dir.path(), &[]);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    v["key"]["code_version"] = "0".repeat(64).into();
    v["payload"] = serde_json::json!([]);
    std::fs::write(&entry, v.to_string()).unwrap();
    assert_eq!(moments_with_cache(dir.path(), &[]), clean);
}

#[test]
fn limit_moments_match_series() {
    assert_eq!(ok(&["limit-moments", "--model", "laplacian", "--order", "3"]).trim(), "4 t + 6 t^2 + t^3");
    assert_eq!(ok(&["limit-moments", "--model", "diag-block", "--order", "3"]).trim(), "t + 3 t^2 + t^3");
    // both two-edge walks of length 4 are noncrossing, so mu4 keeps t + 2 t^2
    assert_eq!(ok(&["limit-moments", "--model", "adjacency", "--order", "4", "--t", "2"]).trim(), "10");
}

#[test]
fn density_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mp.csv");
    ok(&["density", "--law", "mp", "--t", "2", "--grid", "101", "--out", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,rho"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.1 >= 0.0));

    let out = ok(&["density", "--law", "em", "--t", "1", "--grid", "21", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["method"], "stieltjes-richardson");
    assert_eq!(v["values"].as_array().unwrap().len(), 21);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn simulate_is_deterministic_given_seed() {
    let args = ["simulate", "--model", "laplacian", "--N", "60", "--d", "2", "--Z", "2", "--samples", "20", "--seed", "7", "--orders", "1,2", "--format", "json"];
    let strip = |s: String| {
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_secs");
        v
    };
    let a = strip(ok(&args));
    let b = strip(ok(&args));
    assert_eq!(a, b);
    assert_eq!(a["records"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_gate_fails_with_exit_one() {
    // a gate of zero cannot be met by sampled moments
    let o = sbrm(&["simulate", "--model", "adjacency", "--N", "60", "--d", "2", "--Z", "2", "--samples", "10", "--orders", "2", "--gate", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_writes_histogram_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("h.csv");
    let dump = dir.path().join("m.bin");
    ok(&[
        "simulate", "--model", "adjacency", "--N", "30", "--d", "2", "--Z", "2", "--samples", "4", "--orders", "2",
        "--histogram", "10", "--histogram-out", hist.to_str().unwrap(), "--dump", dump.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&hist).unwrap().lines().count(), 11);
    let bytes = std::fs::read(&dump).unwrap();
    assert_eq!(&bytes[..4], b"SBRM");
    // header 4 + 4 + 4 + 8 + 8 bytes, then a 60 x 60 matrix of f64
    assert_eq!(bytes.len(), 28 + 60 * 60 * 8);
}

#[test]
fn verify_suite_reports_table() {
    let o = sbrm(&["verify", "--suite", "narayana"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| l.starts_with("[PASS]")).count() >= 3, "{out}");
}
