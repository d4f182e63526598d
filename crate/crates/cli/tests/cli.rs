use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    dir.join(name).display().to_string()
}

fn orbitp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn pairs(v: &Value) -> Vec<(u64, u64)> {
    v["outcome"]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
        .collect()
}

#[test]
fn shifted_square_text_lists_power_of_two_pairs() {
    let out = orbitp(&["--scenario", &scenario("shifted-square.scn")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pairs (7): (1,1) (2,2) (4,4) (8,8) (16,16) (32,32) (64,64)"), "{text}");
    assert!(text.contains("caveat:"));
}

#[test]
fn json_report_is_reproducible() {
    let path = scenario("shifted-square.scn");
    let a = orbitp(&["--scenario", &path, "--format", "json"]);
    let b = orbitp(&["--scenario", &path, "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["task"], "intersect");
    assert_eq!(v["outcome"]["kind"], "intersect");
    assert_eq!(v["capsHit"], true);
    assert!(v.get("timingMs").is_none());
    let want: Vec<(u64, u64)> = (0..=6).map(|k| (1 << k, 1 << k)).collect();
    assert_eq!(pairs(&v), want);
}

#[test]
fn timing_is_opt_in() {
    let out = orbitp(&["--scenario", &scenario("classify.scn"), "--format", "json", "--timing"]);
    assert!(json(&out)["timingMs"].is_u64());
}

#[test]
fn pruned_and_plain_runs_agree() {
    let plain = json(&orbitp(&["--scenario", &scenario("shifted-square.scn"), "--format", "json"]));
    let pruned = json(&orbitp(&["--scenario", &scenario("shifted-square-pruned.scn"), "--format", "json"]));
    assert_eq!(pairs(&plain), pairs(&pruned));
    let sieve = &pruned["outcome"]["pruning"];
    assert!(sieve["candidates"].as_u64().unwrap() < sieve["total"].as_u64().unwrap());
}

#[test]
fn cap_flags_override_the_scenario() {
    let out = orbitp(&["--scenario", &scenario("shifted-square.scn"), "--format", "json", "--cap-m", "8", "--cap-n", "8"]);
    assert_eq!(pairs(&json(&out)), vec![(1, 1), (2, 2), (4, 4), (8, 8)]);
}

#[test]
fn extension_and_twisted_scenarios() {
    let v = json(&orbitp(&["--scenario", &scenario("artin-schreier.scn"), "--format", "json"]));
    assert_eq!(pairs(&v), vec![(0, 1), (1, 3), (4, 9), (13, 27), (40, 81)]);
    let v = json(&orbitp(&["--scenario", &scenario("frobenius-twist.scn"), "--format", "json"]));
    assert_eq!(pairs(&v), vec![(2, 1), (8, 4), (32, 16)]);
}

#[test]
fn verify_example_scenario_passes() {
    let out = orbitp(&["--scenario", &scenario("geometric-sum.scn")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS geometric-sum-power [p = 3, n <= 4]"), "{text}");
}

#[test]
fn verify_all_passes_and_pmax_skips() {
    let out = orbitp(&["--verify-all", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"]["failed"], 0);
    assert_eq!(v["outcome"]["skipped"], 0);
    let out = orbitp(&["--verify-all", "--pmax", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["outcome"]["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn malformed_scenario_exits_3_with_position() {
    let out = orbitp(&["--scenario", &scenario("malformed.scn")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("syntax error at"));
    let out = orbitp(&["--scenario", &scenario("malformed.scn"), "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["kind"], "validation");
    assert_eq!(v["exitCode"], 3);
    assert!(v["position"].is_u64());
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = orbitp(&["--scenario", &scenario("over-budget.scn")]);
    assert_eq!(out.status.code(), Some(2));
    let out = orbitp(&["--scenario", &scenario("classify.scn"), "--degree-budget", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(orbitp(&[]).status.code(), Some(3));
    assert_eq!(orbitp(&["--verify-all", "--jobs", "0"]).status.code(), Some(3));
    assert_eq!(orbitp(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_exits_1() {
    let out = orbitp(&["--scenario", "/nonexistent/x.scn"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parallel_runs_keep_input_order() {
    let names = ["classify.scn", "heights.scn", "shifted-square.scn", "synchronized.scn", "curve-return.scn"];
    let mut args: Vec<String> = Vec::new();
    for n in names {
        args.push("--scenario".into());
        args.push(scenario(n));
    }
    args.extend(["--jobs", "4", "--format", "json"].map(String::from));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let a = orbitp(&refs);
    let b = orbitp(&refs);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let tasks: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["task"].as_str().unwrap()).collect();
    assert_eq!(tasks, ["classify", "heights", "intersect", "synchronized", "curve-return"]);
}

#[test]
fn first_error_decides_the_exit_code() {
    let out = orbitp(&[
        "--scenario",
        &scenario("classify.scn"),
        "--scenario",
        &scenario("malformed.scn"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v[0]["task"], "classify");
    assert_eq!(v[1]["kind"], "validation");
}
