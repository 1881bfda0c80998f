use std::path::Path;
use std::process::{Command, Output};

use mhtgame::protocols::{make_group_max_rule, CostFunction};
use serde_json::Value;

fn mhtgame<I: AsRef<std::ffi::OsStr>>(args: impl IntoIterator<Item = I>) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhtgame")).args(args).output().unwrap()
}

fn single_row(out: &Output) -> Vec<String> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    lines.nth(1).unwrap().split(',').map(String::from).collect()
}

fn result(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"].clone()
}

fn rule_file(dir: &Path, name: &str, args: &[&str]) -> String {
    let p = dir.join(name).to_str().unwrap().to_string();
    let mut full = vec!["critval", "--rule-out", &p];
    full.extend_from_slice(args);
    assert!(mhtgame(&full).status.success());
    p
}

#[test]
fn critval_examples() {
    let out = mhtgame(["critval", "--J", "5", "--cost-fixed", "0.1", "--pub", "linear"]);
    assert_eq!(out.status.code(), Some(0));
    let row = single_row(&out);
    assert_eq!(row[5], "bonferroni");
    assert_eq!(row[6].parse::<f64>().unwrap(), 0.02);
    assert!((row[7].parse::<f64>().unwrap() - 2.053_748_910_631_823).abs() < 1e-13);

    let out = mhtgame([
        "critval",
        "--J",
        "2",
        "--pub",
        "threshold",
        "--kappa",
        "1",
        "--gamma",
        "1",
        "--cost-fixed",
        "0.1",
    ]);
    let row = single_row(&out);
    assert_eq!(row[5], "p_star");
    assert!((row[6].parse::<f64>().unwrap() - (1.1_f64.sqrt() - 1.0)).abs() < 1e-15);

    let row = single_row(&mhtgame(["critval", "--J", "1", "--cost-fixed", "0.05"]));
    assert!((row[7].parse::<f64>().unwrap() - 1.644_853_626_951_472_7).abs() < 1e-13);

    let row = single_row(&mhtgame(["critval", "--J", "7", "--cost-variable", "0.05"]));
    assert_eq!(row[5], "no_adjustment");
    assert_eq!(row[6].parse::<f64>().unwrap(), 0.05);
}

#[test]
fn critval_infeasible_target_reports_the_interval() {
    let out = mhtgame([
        "critval",
        "--J",
        "2",
        "--pub",
        "threshold",
        "--kappa",
        "2",
        "--gamma",
        "0.05",
        "--cost-fixed",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(0, 1)"), "{err}");
    assert_eq!(mhtgame(["critval", "--J", "two"]).status.code(), Some(3));
    assert_eq!(
        mhtgame(["critval", "--J", "2", "--pub", "threshold"]).status.code(),
        Some(2)
    );
}

#[test]
fn figure3_rows() {
    let out = mhtgame([
        "figure3",
        "--J-range",
        "10..10",
        "--kappa-list",
        "1",
        "--cost",
        "fixed:0.1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "linear");
    assert_eq!(rows[0][6].parse::<f64>().unwrap(), 0.01);
    let p: f64 = rows[1][6].parse().unwrap();
    assert!((p - 9.955_282_949_736_23e-4).abs() < 1e-17, "{p}");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = rule_file(dir.path(), "good.json", &["--J", "2", "--cost-fixed", "0.1"]);
    let out = mhtgame(["verify", "--rule-file", &good, "--mode", "strong"]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["report"]["passed"], Value::Bool(true));
    let lp = r["local_power"]["value"].as_f64().unwrap();
    assert!((lp - 0.05).abs() < 0.003);

    let doc = std::fs::read_to_string(&good)
        .unwrap()
        .replace("1.6448536269514726", "1.4");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc).unwrap();
    let out = mhtgame(["verify".as_ref(), "--rule-file".as_ref(), bad.as_os_str()]);
    assert_eq!(out.status.code(), Some(1));
    let w = &result(&out)["report"]["worst_null_beta"];
    assert!(w["theta"].as_array().unwrap().iter().all(|t| t.as_f64().unwrap() < 0.0));

    std::fs::write(dir.path().join("broken.json"), "{\"variant\": \"nope\"}").unwrap();
    let broken = dir.path().join("broken.json");
    let out = mhtgame(["verify".as_ref(), "--rule-file".as_ref(), broken.as_os_str()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_group_rule_weak_mode() {
    let dir = tempfile::tempdir().unwrap();
    let rule = make_group_max_rule(2, 1, &CostFunction::fixed(0.1), 1.0).unwrap();
    let p = dir.path().join("group.json");
    std::fs::write(&p, serde_json::to_string(&rule).unwrap()).unwrap();
    let out = mhtgame([
        "verify",
        "--rule-file",
        p.to_str().unwrap(),
        "--welfare",
        "general:2",
        "--pub",
        "threshold",
        "--mode",
        "weak",
        "--space",
        "box:-1:1:11",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let rule = rule_file(dir.path(), "r.json", &["--J", "2", "--cost-fixed", "0.1"]);
    let r = result(&mhtgame(["simulate", "--theta", "-0.5,-0.5", "--rule-file", &rule]));
    assert_eq!(r["experimented"], Value::Bool(false));
    assert_eq!(r["editor_utility"].as_f64(), Some(0.0));
    let r = result(&mhtgame(["simulate", "--theta", "1,1", "--rule-file", &rule]));
    assert_eq!(r["experimented"], Value::Bool(true));
    assert!(r["editor_utility"].as_f64().unwrap() > 0.0);
    let out = mhtgame(["simulate", "--theta", "1,1,1", "--rule-file", &rule]);
    assert_eq!(out.status.code(), Some(2));

    let out = mhtgame([
        "simulate",
        "--endogenous",
        "--theta",
        "0.5,0,0",
        "--cost-fixed",
        "0.05",
        "--cost-variable",
        "0.02",
    ]);
    let r = result(&out);
    assert_eq!(r["selected"], serde_json::json!([0]));
}

#[test]
fn index_examples() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let eye = write("eye.json", "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]");
    let r = result(&mhtgame([
        "index",
        "--sigma-file",
        &eye,
        "--mode",
        "variance",
        "--cost",
        "0.05",
    ]));
    for w in r["weights"].as_array().unwrap() {
        assert!((w.as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
    let d = write("d.json", "[[1, 0], [0, 4]]");
    let r = result(&mhtgame([
        "index",
        "--sigma-file",
        &d,
        "--mode",
        "variance",
        "--cost",
        "0.05",
    ]));
    assert_eq!(r["weights"], serde_json::json!([0.8, 0.2]));
    let r = result(&mhtgame([
        "index",
        "--sigma-file",
        &d,
        "--mode",
        "welfare",
        "--weights",
        "0.3,0.7",
        "--cost",
        "0.05",
    ]));
    assert!((r["critical_value"].as_f64().unwrap() - 1.644_853_626_951_472_7).abs() < 1e-13);
    let r = result(&mhtgame([
        "index",
        "--sigma-file",
        &eye,
        "--mode",
        "factor",
        "--loadings",
        "1,1,1",
        "--cost",
        "0.05",
    ]));
    assert!((r["mean_per_theta"].as_f64().unwrap() - 3.0_f64.sqrt()).abs() < 1e-14);
    let singular = write("s.json", "[[1, 1], [1, 1]]");
    assert_eq!(
        mhtgame([
            "index",
            "--sigma-file",
            &singular,
            "--mode",
            "variance",
            "--cost",
            "0.05"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn config_file_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"J": 5, "cost-fixed": 0.1}"#).unwrap();
    let a = mhtgame(["critval".as_ref(), "--config".as_ref(), cfg.as_os_str()]);
    let b = mhtgame(["critval", "--J", "5", "--cost-fixed", "0.1"]);
    assert_eq!(a.stdout, b.stdout);

    let holm = mhtgame::protocols::RecommendationRule::holm(0.15, vec![1.0; 3]).unwrap();
    let p = dir.path().join("holm.json");
    std::fs::write(&p, serde_json::to_string(&holm).unwrap()).unwrap();
    let run = || {
        mhtgame([
            "simulate",
            "--theta",
            "0.2,0,-0.1",
            "--rule-file",
            p.to_str().unwrap(),
            "--cost-fixed",
            "0.15",
            "--seed",
            "9",
            "--mc-draws",
            "20000",
        ])
    };
    let (x, y) = (run(), run());
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(result(&x)["simulated"], Value::Bool(true));
}
