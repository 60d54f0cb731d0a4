use std::process::{Command, Output};

use serde_json::Value;

fn factormap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factormap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is strict JSON")
}

#[test]
fn eval_matches_hand_value() {
    let out = factormap(&["eval", "--n", "1", "--point", "1,0i; 0,1i; 2,0i"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v, serde_json::json!({"a": [2.0, 2.0], "b": [0.0, 1.0], "c": 2.0}));
}

#[test]
fn lift_of_negative_c() {
    let out = factormap(&["lift", "--n", "1", "--target", "0,0i; 0,0i; -4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["point"], serde_json::json!([[2.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));
    assert_eq!(v["residual"], 0.0);
}

#[test]
fn lift_round_trips_through_eval() {
    let out = factormap(&["lift", "--n", "3", "--target", "2,2i; 0,1i; 2"]);
    let v = stdout_json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    let p: Vec<String> = v["point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| format!("{},{}i", z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
        .collect();
    let e = stdout_json(&factormap(&["eval", "--n", "3", "--point", &p.join(";")]));
    assert!((e["a"][0].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!((e["a"][1].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!((e["b"][1].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((e["c"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn verify_all_passes() {
    let out = factormap(&["verify", "--n", "1", "--suite", "all", "--samples", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for key in ["suite", "n", "samples", "seed", "failures", "max_residual", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_reports_counterexamples_with_exit_1() {
    let out = factormap(&["verify", "--n", "2", "--suite", "invariance", "--samples", "50", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures[0].get("input").is_some() && failures[0].get("residual").is_some());
}

#[test]
fn malformed_literal_exits_2_naming_token() {
    let out = factormap(&["eval", "--n", "1", "--point", "1,0i; 0,1; 2,0i"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`0,1`"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(factormap(&["eval", "--point", "1,0i;0,0i;0,0i"]).status.code(), Some(2));
    assert_eq!(factormap(&["eval", "--n", "0", "--point", "1,0i;0,0i;0,0i"]).status.code(), Some(2));
    assert_eq!(factormap(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(factormap(&["verify", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(factormap(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn equiv_detects_orbit_and_non_orbit() {
    let same = stdout_json(&factormap(&["equiv", "--n", "2", "--x", "1,0i;0,1i;2,0i", "--y", "0,1i;1,0i;2,-0i"]));
    assert_eq!(same["equivalent"], true);
    assert_eq!(same["pi0_route"], true);
    let diff = stdout_json(&factormap(&["equiv", "--n", "2", "--x", "1,0i;0,1i;2,0i", "--y", "1,0i;0,1i;3,0i"]));
    assert_eq!(diff["equivalent"], false);
}

#[test]
fn sample_orbit_stays_on_the_fiber() {
    let base = "1,0.5i; -0.3,1i; 2,-1i";
    let f0 = stdout_json(&factormap(&["eval", "--n", "2", "--point", base]));
    let out = stdout_json(&factormap(&["sample-orbit", "--n", "2", "--point", base, "--samples", "5"]));
    let orbit = out["orbit"].as_array().unwrap();
    assert_eq!(orbit.len(), 5);
    for entry in orbit {
        let p: Vec<String> = entry["point"]
            .as_array()
            .unwrap()
            .iter()
            .map(|z| format!("{:e},{:e}i", z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
            .collect();
        let f = stdout_json(&factormap(&["eval", "--n", "2", "--point", &p.join(";")]));
        for (x, y) in [(&f["a"][0], &f0["a"][0]), (&f["b"][1], &f0["b"][1]), (&f["c"], &f0["c"])] {
            assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["verify", "--n", "1,3", "--suite", "all", "--samples", "200", "--seed", "3", "--no-timing"];
    let a = factormap(&args);
    let b = factormap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let orbit = ["sample-orbit", "--n", "2", "--point", "1,0i;0,1i;2,0i", "--samples", "20", "--seed", "9"];
    assert_eq!(factormap(&orbit).stdout, factormap(&orbit).stdout);
}

#[test]
fn csv_output() {
    let out = factormap(&["eval", "--n", "1", "--point", "1,0i; 0,1i; 2,0i", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a_re,a_im,b_re,b_im,c\n2.0,2.0,0.0,1.0,2.0\n");
}
