use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

fn system(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems");
    root.join(name).to_string_lossy().into_owned()
}

fn spencer(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spencer")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = spencer(&all);
    assert_eq!(code, 0, "{err}{out}");
    serde_json::from_str(&out).expect("valid json")
}

fn cells(v: &Value) -> Vec<(u64, u64, u64)> {
    v.as_array().unwrap().iter().map(|c| (c["i"].as_u64().unwrap(), c["j"].as_u64().unwrap(), c["dim"].as_u64().unwrap())).collect()
}

#[test]
fn analyze_first_example() {
    let v = json(&["analyze", &system("ex1.spd")]);
    assert_eq!(v["involutive"], Value::Bool(false));
    // g_0 = N is two-dimensional here
    assert_eq!(cells(&v["cohomology"]), vec![(0, 0, 2), (1, 1, 2), (2, 1, 1), (2, 2, 1)]);
    assert_eq!(v["orders"], serde_json::json!([2, 3]));
    assert_eq!(v["i1"]["holds"], Value::Bool(true));
    assert_eq!(v["i2"]["holds"], Value::Bool(true));
    for key in ["orders", "multiplicities", "cohomology", "involutive", "char", "thm1", "thm2", "e1", "seed", "cap"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["cap"], 8);
    assert_eq!(v["seed"], 0);
}

#[test]
fn analyze_with_vstar_fills_every_section() {
    let v = json(&["analyze", &system("transport.spd"), "--vstar", "dz", "--max-degree", "5"]);
    assert_eq!(v["thm1"]["mismatches"], serde_json::json!([]));
    assert_eq!(v["char"]["strongly_nonchar"], Value::Bool(true));
    assert!(v["e1"].as_array().unwrap().len() > 0);
}

#[test]
fn wave_pencil_through_cli() {
    let v = json(&["verify", "thm2", &system("wave.spd"), "--vstar", "dx, dy", "--field", "qi"]);
    assert_eq!(v["thm2"]["equivalence_holds"], Value::Bool(true));
    assert_eq!(v["thm2"]["covector"], "dx + dy");
    let (code, text, _) = spencer(&["verify", "thm2", &system("wave.spd"), "--vstar", "dx, dy"]);
    assert_eq!(code, 0);
    assert!(text.contains("dx + dy"));
}

#[test]
fn laplace_needs_gaussian_rationals() {
    let v = json(&["char", &system("laplace.spd"), "--vstar", "dx, dy", "--field", "qi"]);
    assert_eq!(v["pencil"]["exists"], Value::Bool(true));
    let c = v["pencil"]["covector"].as_str().unwrap();
    assert!(c.contains("i*dy"), "{c}");
    let v = json(&["char", &system("laplace.spd"), "--vstar", "dx, dy"]);
    assert_eq!(v["pencil"]["exists"], Value::Bool(true));
    assert_eq!(v["pencil"]["covector"], Value::Null);
}

#[test]
fn restrict_rotation_algebra() {
    let v = json(&["restrict", &system("so2.spd"), "--w", "@y"]);
    assert_eq!(v["dims"], serde_json::json!([2, 1, 0, 0, 0, 0, 0, 0, 0]));
    assert_eq!(v["orders"], serde_json::json!([1, 2]));
    assert_eq!(cells(&v["cohomology"]), vec![(0, 0, 2), (0, 1, 1), (1, 1, 1)]);
    let same = json(&["restrict", &system("so2.spd"), "--vstar", "dx"]);
    assert_eq!(same["dims"], v["dims"]);
}

#[test]
fn reduce_and_descend() {
    let v = json(&["reduce", &system("uxy.spd"), "--order", "2", "--max-degree", "5"]);
    assert_eq!(v["nu"], 2);
    assert_eq!(v["orders"], serde_json::json!([1]));
    assert_eq!(v["involutive"], Value::Bool(true));
    let d = json(&["descend", &system("uxy.spd"), "--max-degree", "5"]);
    assert_eq!(d["descended_dims"][1], 2);
    assert!(d["fixpoint_steps"].as_u64().is_some());
}

#[test]
fn involutive_reports_i3_and_acyclicity() {
    let v = json(&["involutive", &system("ex2.spd"), "--max-degree", "6", "--m", "1"]);
    assert_eq!(v["involutive"], Value::Bool(true));
    assert_eq!(v["i3"]["result"], "not_found_within_budget");
    assert!(v["acyclic"]["holds"].as_bool().is_some());
}

#[test]
fn e1_pages_of_finite_type_system() {
    let v = json(&["e1table", &system("ex6.spd"), "--vstar", "dx + 2dy + 3dz", "--max-degree", "6"]);
    let rows = v["e1"].as_array().unwrap();
    for r in rows {
        // odd l: d_1 is an isomorphism; even l: nothing for d_1 to hit
        if r["l"].as_u64().unwrap() % 2 == 1 {
            assert_eq!(r["e2"], 0, "{r}");
        } else {
            assert_eq!(r["e2"], r["e1"], "{r}");
        }
    }
    let e1: Vec<(u64, i64, i64, u64)> = rows
        .iter()
        .filter(|r| r["e1"].as_u64().unwrap() > 0)
        .map(|r| (r["l"].as_u64().unwrap(), r["p"].as_i64().unwrap(), r["q"].as_i64().unwrap(), r["e1"].as_u64().unwrap()))
        .collect();
    assert!(e1.contains(&(3, 0, 1, 2)) && e1.contains(&(3, 1, 1, 2)), "{e1:?}");
}

#[test]
fn corollary_and_thm1_through_cli() {
    let v = json(&["verify", "corollary", &system("transport.spd"), "--vstar", "dz", "--max-degree", "5", "--m", "1"]);
    assert!(v["corollary"].as_array().unwrap().iter().all(|c| !c["applicable"].as_bool().unwrap() || c["euler_sum"] == 0));
    let (code, text, _) = spencer(&["verify", "thm1", &system("transport.spd"), "--vstar", "dx", "--max-degree", "5"]);
    assert_eq!(code, 0);
    assert!(text.contains("hypotheses not met"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("spencer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.spd");
    std::fs::write(&bad, "vars x y\nunknowns u\neq u_xy + q_x = 0\n").unwrap();
    let (code, out, _) = spencer(&["analyze", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 1);
    let err: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(err["error"]["kind"], "parse");
    assert_eq!(err["error"]["line"], 3);
    let (code, _, _) = spencer(&["analyze", &system("ex1.spd"), "--max-degree", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = spencer(&["e1table", &system("ex1.spd")]);
    assert_eq!(code, 3);
    let (code, _, _) = spencer(&["char", &system("ex1.spd"), "--vstar", "dx, 2dx"]);
    assert_eq!(code, 3);
    let (code, _, _) = spencer(&["char", &system("ex1.spd"), "--vstar", "dx +"]);
    assert_eq!(code, 1);
    let (code, _, _) = spencer(&["frobnicate"]);
    assert_eq!(code, 3);
    let (code, _, _) = spencer(&["analyze", "/nonexistent.spd"]);
    assert_eq!(code, 3);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn json_is_deterministic() {
    let args = ["analyze", &system("so2.spd"), "--vstar", "dx", "--format", "json", "--seed", "7", "--max-degree", "5"];
    let a = spencer(&args);
    let b = spencer(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn every_golden_system_runs_quickly() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems");
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(names.len() >= 8);
    for path in names {
        let start = Instant::now();
        let (code, _, err) = spencer(&["analyze", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {err}", path.display());
        assert!(start.elapsed() < Duration::from_secs(10), "{} took {:?}", path.display(), start.elapsed());
    }
}
