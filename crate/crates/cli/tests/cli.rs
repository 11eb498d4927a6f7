use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dircov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dircov")).args(args).output().expect("binary runs")
}

fn dircov_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dircov"))
        .env("DIRCOV_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> (String, Value) {
    let text = std::fs::read_to_string(path).unwrap();
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

fn assert_round_trip(text: &str) {
    let value: Value = serde_json::from_str(text).unwrap();
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, text);
}

fn without_wall_time(mut v: Value) -> Value {
    v["manifest"].as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn gen_alphabet_writes_e2m1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = dircov(&["gen-alphabet", "--format", "e2m1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (text, v) = read_json(&out);
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(values, [-12., -8., -6., -4., -3., -2., -1., 0., 1., 2., 3., 4., 6., 8., 12.]);
    assert_eq!(v["manifest"]["command"], "gen-alphabet");
    assert_eq!(v["manifest"]["parameters"]["format"], "e2m1");
    assert!(v["manifest"]["tool_version"].is_string());
    assert_round_trip(&text);
}

#[test]
fn classify2d_antipodal_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("antipodal.json");
    std::fs::write(&path, r#"{"name": "antipodal", "values": [-3.0, 3.0]}"#).unwrap();
    let o = dircov(&["classify2d", "--alphabet", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["case"], "antipodal_optimal");
    assert!((v["f2_deg"].as_f64().unwrap() - 45.0).abs() < 1e-9);
    assert_round_trip(&text);
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(dircov(&["eval", "--dim", "4"]).status.code(), Some(2));
    let o = dircov(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(dircov(&[]).status.code(), Some(2));
    assert_eq!(dircov(&["eval", "--alphabet", "e9m9", "--dim", "4"]).status.code(), Some(1));
    assert_eq!(dircov(&["eval", "--alphabet", "e2m1", "--dim", "1", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(dircov(&["eval", "--alphabet", "missing.json", "--dim", "4"]).status.code(), Some(1));
    assert_eq!(dircov(&["classify2d", "--alphabet", "power:0.5,3"]).status.code(), Some(1));
}

#[test]
fn eval_is_seeded_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    for (k, threads) in ["1", "3", "1"].iter().enumerate() {
        let out = dir.path().join(format!("r{k}.json"));
        let args = ["eval", "--alphabet", "int4", "--dim", "8", "--samples", "20000", "--seed", "5", "--out", out.to_str().unwrap()];
        let o = dircov_threads(&args, threads);
        assert!(o.status.success());
        let (text, v) = read_json(&out);
        assert_round_trip(&text);
        assert!((v["max_angle_deg"].as_f64().unwrap() - v["max_angle"].as_f64().unwrap().to_degrees()).abs() < 1e-12);
        assert_eq!(v["manifest"]["seed"], 5);
        let mut v = without_wall_time(v);
        v["manifest"]["parameters"].as_object_mut().unwrap().remove("out");
        results.push(v);
    }
    assert_eq!(results[0], results[1]);
    assert_eq!(results[0], results[2]);
    let other = dircov(&["eval", "--alphabet", "int4", "--dim", "8", "--samples", "20000", "--seed", "6"]);
    let other: Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_ne!(other["argmax_index"], results[0]["argmax_index"]);
}

#[test]
fn sweep_dims_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = dircov(&[
        "sweep-dims", "--alphabet", "e2m1", "--alphabet", "power:2,7", "--dims", "4,8", "--samples", "2000", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let manifest: Value = serde_json::from_str(lines[0].strip_prefix("# manifest: ").unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep-dims");
    assert_eq!(lines[1], "format,d=4,d=8");
    assert!(lines[2].starts_with("e2m1,"));
    assert!(lines[3].starts_with("power:2,7,"));
    assert_eq!(lines.len(), 4);
    let rebuilt: String = lines.iter().map(|l| format!("{l}\n")).collect();
    assert_eq!(rebuilt, text);
}

#[test]
fn bounds_and_regress() {
    let o = dircov(&["bounds", "--alphabet", "e2m1", "--dim", "16"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["fp_constant"].as_f64().unwrap() - 12f64.sqrt()).abs() < 1e-12);
    assert!(v["witness_angle"].as_f64().unwrap() >= v["lower_bound_angle"].as_f64().unwrap() - 1e-9);
    assert!(v["upper_bound_normalized"].as_f64().unwrap() <= 12f64.sqrt());

    let o = dircov(&["bounds", "--alphabet", "int4", "--dim", "16"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["upper_bound_normalized"].is_null());

    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("ref.json");
    std::fs::write(&reference, r#"{"name": "ref", "values": [-13.2, -10.5, -7.25, -5.04, -3.4, -2.12, -1, 0, 1, 2.12, 3.4, 5.04, 7.25, 10.5, 13.2]}"#).unwrap();
    let rms = |f: &str| {
        let o = dircov(&["regress", "--alphabet", f, "--reference", reference.to_str().unwrap()]);
        assert!(o.status.success());
        let text = String::from_utf8(o.stdout).unwrap();
        assert_round_trip(&text);
        serde_json::from_str::<Value>(&text).unwrap()["rms_residual"].as_f64().unwrap()
    };
    assert!(rms("e2m1") < rms("e1m2"));
    assert!(rms("e2m1") < rms("e3m0"));
    assert_eq!(dircov(&["regress", "--alphabet", "int4", "--reference", reference.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn optimize_writes_alphabet_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("opt.json");
    let args = [
        "optimize", "--dim", "4", "--seed", "3", "--pop", "8", "--gens", "3", "--samples", "300", "--holdout-samples",
        "500", "--powell-iters", "1", "--powell-tol", "1e-3", "--out", out.to_str().unwrap(),
    ];
    let o = dircov(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (text, alphabet) = read_json(&out);
    assert_round_trip(&text);
    let (report_text, report) = read_json(&dir.path().join("opt.report.json"));
    assert_round_trip(&report_text);
    let values = alphabet["values"].as_array().unwrap();
    assert_eq!(values.len(), 15);
    assert_eq!(values[8].as_f64(), Some(1.0));
    assert_eq!(report["history"].as_array().unwrap().len(), 4);
    assert_eq!(report["holdout"]["sample_count"], 500);

    let again = dircov_threads(&args, "2");
    assert!(again.status.success());
    let (_, alphabet2) = read_json(&out);
    assert_eq!(without_wall_time(alphabet2)["values"], alphabet["values"]);

    let e = dircov(&["eval", "--alphabet", out.to_str().unwrap(), "--dim", "4", "--samples", "100"]);
    assert!(e.status.success());
}

#[test]
fn selftest_passes_and_flags_corrupt_input() {
    let o = dircov(&["selftest"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "bad", "values": [1.0, 1.0, "x"]}"#).unwrap();
    let o = dircov(&["selftest", "--alphabet", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("alphabet_input"), "{stderr}");
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
}
