use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellfam")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn text(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn washington_average_for_seven() {
    let v = json(&["average", "--family", "Wa", "--a", "7", "--method", "formula"]);
    assert_eq!(v["value"], "1/7");
    assert_eq!(v["schema"], 1);
}

#[test]
fn l_family_rank_with_factor_counts() {
    let v = json(&["rank", "--family", "L", "--w", "1", "--s", "1", "--v", "9", "--method", "formula"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["R_factors"], 2);
    assert_eq!(v["C_factors"], 1);
}

#[test]
fn washington_root_number() {
    let v = json(&["rootnumber", "--family", "Wa", "--a", "1", "--t", "42"]);
    assert_eq!(v["root_number"], -1);
    let product: i64 = v["locals"].as_array().unwrap().iter().map(|l| l["w"].as_i64().unwrap()).product();
    assert_eq!(-product, -1);
}

#[test]
fn root_number_sweep() {
    let v = json(&["rootnumber", "--family", "Wa", "--a", "1", "--t-min", "-50", "--t-max", "50"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 101);
    assert_eq!(v["sum"], -101);
}

#[test]
fn csv_keeps_rationals_exact() {
    let out = text(&["average", "--family", "Wa", "--a", "3", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let header = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let col = header.iter().position(|h| h == "value").unwrap();
    assert_eq!(&row[col], "1/6");
}

#[test]
fn table_lists_catalogue_points() {
    let out = text(&["verify", "--format", "table"]);
    let g = out.lines().find(|l| l.starts_with("G_-2")).unwrap();
    assert!(g.contains("fail"));
    assert_eq!(out.lines().filter(|l| l.contains("verified-non-torsion")).count(), 11);
}

#[test]
fn output_is_byte_identical_across_runs_and_jobs() {
    let args = ["rank", "--family", "Gw", "--w", "1", "--method", "nagao", "--X", "3000"];
    let a = run(&args);
    let b = run(&[&args[..], &["--jobs", "1"]].concat());
    assert!(a.status.success());
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("command");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(run(&args).stdout, a.stdout);
    assert!(strip(&a).get("timing").is_none());
    let timed = json(&[&args[..], &["--timing"]].concat());
    assert!(timed["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn interval_endpoints_are_decimal_strings() {
    let v = json(&["average", "--family", "Va", "--a", "1", "--cutoff", "20000"]);
    let lo: f64 = v["interval"][0].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["interval"][1].as_str().unwrap().parse().unwrap();
    assert!(lo < 0.038562 && 0.038562 < hi && hi - lo < 1e-3);
}

#[test]
fn local_integrals_match_euler_factors() {
    let v = json(&["average", "--family", "Va", "--a", "12", "--method", "local-integral"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["agree"] == true));
}

#[test]
fn design_picks_a_construction() {
    let v = json(&["design", "--target", "3/10"]);
    assert_eq!(v["construction"], "periodic");
    assert_eq!(v["predicted_average"], "3/10");
    let v = json(&["design", "--target", "-2/5", "--validate", "3000"]);
    assert_eq!(v["construction"], "single-prime");
    assert_eq!(v["roundtrip"]["pass"], true);
}

#[test]
fn suite_design_roundtrip_for_one_target() {
    let v = json(&["suite", "design-roundtrip", "--target", "1/3", "--T", "5000"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"][0]["id"], 12);
}

#[test]
fn classify_literal() {
    let v = json(&["classify", "--surface", "a2=0; a4=t; a6=1"]);
    assert_eq!(v["potentially_parity_biased"], false);
    assert_eq!(v["M"], "4*t^3 + 27");
    let v = json(&["classify", "--family", "Fs", "--s", "5"]);
    assert_eq!(v["potentially_parity_biased"], true);
}

#[test]
fn domain_errors_are_structured() {
    let out = run(&["average", "--family", "Gw", "--w", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "unsupported");
    let out = run(&["design", "--target", "2/5", "--construction", "periodic"]);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "inadmissible");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["average", "--format", "xml"]).status.code(), Some(2));
}
