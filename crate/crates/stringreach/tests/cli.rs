use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const UNIT: &str = r#"{"breakpoints":[0],"values":[1],"f":0}"#;

fn stringreach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringreach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn real(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn bellman_and_mu_on_the_unit_field() {
    let want = 2.0 * PI * (1.0 + 2f64.sqrt());
    let b = json(&stringreach(&["bellman", "--state", UNIT]));
    assert!((real(&b["calT"]) - want).abs() < 1e-9);
    assert_eq!(b["branch"], "T1");
    let m = json(&stringreach(&["mu", "--state", UNIT]));
    assert!((real(&m["mu"]) - want).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let bad = stringreach(&[
        "bellman",
        "--state",
        r#"{"breakpoints":[0],"values":["x"],"f":0}"#,
    ]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("values"));

    let unsorted = stringreach(&[
        "bellman",
        "--state",
        r#"{"breakpoints":[2,1],"values":[1,2],"f":0}"#,
    ]);
    assert_eq!(unsorted.status.code(), Some(2));

    let missing = stringreach(&["bellman", "--state", "/nonexistent/state.json"]);
    assert_eq!(missing.status.code(), Some(3));

    let radius = stringreach(&["certify", "--state", UNIT, "--radius", "0"]);
    assert_eq!(radius.status.code(), Some(2));
}

#[test]
fn synthesize_then_simulate_reaches_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("target.json");
    fs::write(&target, r#"{"breakpoints":[0,2],"values":[12,-5],"f":30}"#).unwrap();
    let schedule = dir.path().join("schedule.json");
    let trace = dir.path().join("trace.csv");
    let rep = json(&stringreach(&[
        "synthesize",
        "--target",
        target.to_str().unwrap(),
        "--out",
        schedule.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]));
    assert_eq!(rep["exhausted"], false);
    let periods = rep["periods"].as_u64().unwrap() as usize;
    let csv = fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("period,t,calT,supnorm,f\n"));
    assert_eq!(csv.lines().count(), periods + 2);

    let residual = serde_json::to_string(&rep["residual"]).unwrap();
    let path = dir.path().join("path.csv");
    let end = json(&stringreach(&[
        "simulate",
        "--state",
        &residual,
        "--schedule",
        schedule.to_str().unwrap(),
        "--trace",
        path.to_str().unwrap(),
    ]));
    assert!((real(&end["f"]) - 30.0).abs() < 1e-8);
    let values: Vec<f64> = end["values"].as_array().unwrap().iter().map(real).collect();
    assert!(values.iter().any(|v| (v - 12.0).abs() < 1e-9));
    assert!(values.iter().any(|v| (v + 5.0).abs() < 1e-9));
    assert!(fs::read_to_string(&path)
        .unwrap()
        .starts_with("t,f,supnorm_F,mean_F,mean_F2\n"));
    assert!(path.with_extension("json").exists());
}

#[test]
fn extremal_schedule_attains_the_support() {
    let dual = r#"{"breakpoints":[0,3],"values":[1,-0.5],"phi":0.2}"#;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.json");
    let doc = json(&stringreach(&[
        "extremal",
        "--dual",
        dual,
        "--T",
        "12",
        "--out",
        out.to_str().unwrap(),
    ]));
    let (a, s) = (real(&doc["attained"]), real(&doc["support_DT"]));
    assert!((a - s).abs() <= 1e-9 * s);
    let sched: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(real(&sched["T"]), 12.0);

    let sup = json(&stringreach(&["support", "--dual", dual, "--T", "12"]));
    assert!((real(&sup["support_DT"]) - s).abs() <= 1e-12 * s);
}

#[test]
fn certify_small_and_large_states() {
    let small = json(&stringreach(&[
        "certify",
        "--state",
        r#"{"breakpoints":[0],"values":[0.5],"f":0.1}"#,
    ]));
    assert_eq!((real(&small["lower"]), real(&small["upper"])), (0.0, 0.0));

    let big = json(&stringreach(&[
        "certify",
        "--state",
        r#"{"breakpoints":[0],"values":[100],"f":0}"#,
    ]));
    let (lo, hi) = (real(&big["lower"]), real(&big["upper"]));
    assert!(lo <= hi && hi / lo <= 1.3);
    assert_eq!(real(&big["ratio"]), hi / lo);
}

#[test]
fn example_strange_report() {
    let r = json(&stringreach(&["example-strange", "--steps", "4"]));
    assert!((real(&r["T"]) - 3.0 * PI).abs() < 1e-12);
    assert!((real(&r["f_min"]) + 1.75 * PI).abs() < 1e-12);
    assert!((real(&r["f_max"]) + 1.25 * PI).abs() < 1e-12);
    assert_eq!(r["members"].as_array().unwrap().len(), 5);
}

#[test]
fn sweep_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let args = ["sweep", "--seed", "4", "--arcs", "5", "--scales", "10,20"];
    let first = stringreach(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, stringreach(&args).stdout);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert!(stringreach(&with_out).status.success());
    assert_eq!(fs::read(&out).unwrap(), first.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text
        .starts_with("lambda,lower,upper,calT,upper_over_lower,lower_over_calT,upper_over_calT\n"));
    assert_eq!(text.lines().count(), 3);
}
