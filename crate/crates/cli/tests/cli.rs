use std::process::{Command, Output};

use serde_json::Value;

const FILLABLE: &str = r#"{"legs":[{"coeffs":[-2,-3,-2],"rot":[-1,-1,0]},{"coeffs":[-2,-3],"rot":[-1,1]},{"coeffs":[-3,-3],"rot":[2,1]}]}"#;
const THIRDS: &str = r#"{"legs":[{"coeffs":[-3],"rot":[2]},{"coeffs":[-3],"rot":[-2]},{"coeffs":[-3],"rot":[2]}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfs-fill")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn decide_fillable() {
    let out = run(&["decide", "--json", FILLABLE, "--format", "json", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Fillable");
    assert_eq!(v["sublink"]["positive_leg"], 3);
    assert_eq!(v["sublink"]["negative_leg"], 1);
    assert!(v["obstruction"].is_null());
}

#[test]
fn decide_not_fillable_has_obstruction() {
    let out = run(&["decide", "--json", THIRDS, "--format", "json", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "NotFillable");
    assert!(v["obstruction"]["kind"].is_string());
}

#[test]
fn rotation_parity_violation_exits_2() {
    let bad = r#"{"legs":[{"coeffs":[-3],"rot":[1]},{"coeffs":[-3],"rot":[0]},{"coeffs":[-3],"rot":[2]}]}"#;
    let out = run(&["decide", "--json", bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_json_exits_2() {
    assert_eq!(run(&["decide", "--json", "{"]).status.code(), Some(2));
    assert_eq!(run(&["decide"]).status.code(), Some(2));
}

#[test]
fn survey_thirds() {
    let out = run(&["survey", "--json", r#"{"chains":[[-3],[-3],[-3]]}"#, "--format", "json", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 28);
    assert!(lines[..27].iter().all(|r| r["status"] == "NotFillable"));
    let s = &lines[27]["summary"];
    assert_eq!(s["structures"], 27);
    assert_eq!(s["disagree"], 0);
}

#[test]
fn survey_status_filter() {
    let family = r#"{"family":{"min_entry":-3,"max_total":4}}"#;
    let out = run(&["survey", "--json", family, "--format", "json", "--status", "fillable"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(lines.len() - 1, summary["fillable"].as_u64().unwrap() as usize);
    assert!(lines[..lines.len() - 1].iter().all(|r| r["status"] == "Fillable"));
}

#[test]
fn survey_cross_check_refuses_large_books() {
    let big = r#"{"chains":[[-2,-2,-2,-2,-2,-2],[-2,-2,-2,-2,-2],[-7]]}"#;
    let out = run(&["survey", "--json", big, "--cross-check", "--max-holes", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let family = r#"{"family":{"min_entry":-4,"max_total":4}}"#;
    let a = run(&["survey", "--json", family, "--format", "json"]);
    let b = run(&["survey", "--json", family, "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["decide", "--json", FILLABLE, "--format", "json"]);
    let d = run(&["decide", "--json", FILLABLE, "--format", "json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn oracle_witness_verifies() {
    let out = run(&["oracle", "--json", FILLABLE, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["status"], "Feasible");
    let mut twists = vec![];
    for w in v["result"]["witness"].as_array().unwrap() {
        for _ in 0..w["multiplicity"].as_u64().unwrap() {
            twists.push(serde_json::json!({"sign": 1, "holes": w["holes"]}));
        }
    }
    let presentation: Value = serde_json::from_str(FILLABLE).unwrap();
    let input = serde_json::json!({"presentation": presentation, "twists": twists}).to_string();
    let out = run(&["verify", "--json", &input, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);

    twists.pop();
    let input = serde_json::json!({"presentation": presentation, "twists": twists}).to_string();
    let out = run(&["verify", "--json", &input, "--format", "json"]);
    assert_eq!(json(&out)["verified"], false);
}

#[test]
fn factorize_needs_a_sublink() {
    let out = run(&["factorize", "--json", FILLABLE, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let twists = json(&out)["trace"]["twists"].as_array().unwrap().len();
    assert_eq!(twists, 5);
    assert_eq!(run(&["factorize", "--json", THIRDS]).status.code(), Some(2));
}

#[test]
fn cf_forms_agree() {
    let a = json(&run(&["cf", "--json", r#"{"r":"3/8"}"#, "--format", "json"]));
    let b = json(&run(&["cf", "--json", r#"{"coeffs":[-3,-3]}"#, "--format", "json"]));
    let c = json(&run(&["cf", "--json", r#"{"value":"-8/3"}"#, "--format", "json"]));
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert_eq!(a["s"], "3/8");
    assert_eq!(run(&["cf", "--json", r#"{"r":"3/2"}"#]).status.code(), Some(2));
}

#[test]
fn reroot_unknown_hole_exits_2() {
    let out = run(&["translate", "--json", FILLABLE, "--reroot", "L9.9.9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["translate", "--json", FILLABLE, "--reroot", "in", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outer"], "in");
}
