//! End-to-end runs of the `recfair` binary on temporary files.

mod common;

use common::*;
use recfair::io::{format_catalog, format_qrels};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn recfair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recfair"))
        .args(args)
        .env("RECFAIR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = recfair(args);
    assert!(
        out.status.success(),
        "recfair {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Data {
    dir: tempfile::TempDir,
    catalog: PathBuf,
    qrels: PathBuf,
}

fn data() -> Data {
    let dir = tempfile::tempdir().unwrap();
    let f = skewed_fixture(20, 40, 5, 2, 8, 1.0, 9);
    let catalog = dir.path().join("catalog.tsv");
    let qrels = dir.path().join("qrels.tsv");
    std::fs::write(&catalog, format_catalog(&f.catalog)).unwrap();
    std::fs::write(&qrels, format_qrels(&f.qrels, &f.catalog)).unwrap();
    Data { dir, catalog, qrels }
}

fn synth(d: &Data, scenario: &str) -> PathBuf {
    let out = d.dir.path().join(scenario);
    ok(&[
        "synth",
        scenario,
        "-m",
        "20",
        "-n",
        "40",
        "-k",
        "5",
        "--out-dir",
        s(&out),
    ]);
    out.join("run.tsv")
}

fn eval(d: &Data, run: &Path, name: &str) -> PathBuf {
    let report = d.dir.path().join(format!("{name}.json"));
    ok(&[
        "eval",
        "--run",
        s(run),
        "--qrels",
        s(&d.qrels),
        "--catalog",
        s(&d.catalog),
        "-k",
        "5",
        "--name",
        name,
        "-o",
        s(&report),
    ]);
    report
}

#[test]
fn synth_eval_agree_pipeline() {
    let d = data();
    let fair = synth(&d, "most-fair");
    let unfair = synth(&d, "most-unfair");
    let mixed = d.dir.path().join("mixed.tsv");
    ok(&[
        "synth",
        "vary-relevance",
        "--qrels",
        s(&d.qrels),
        "--catalog",
        s(&d.catalog),
        "-k",
        "5",
        "--frac-zero",
        "0.5",
        "--seed",
        "4",
        "-o",
        s(&mixed),
    ]);
    let reports: Vec<PathBuf> = [(&fair, "fair"), (&unfair, "unfair"), (&mixed, "mixed")]
        .into_iter()
        .map(|(run, name)| eval(&d, run, name))
        .collect();

    let fair_report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&reports[0]).unwrap()).unwrap();
    let jain = fair_report["measures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["measure"] == "Jain" && m["variant"] == "corrected")
        .expect("corrected Jain in report");
    assert!((jain["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let mut args = vec!["agree"];
    for r in &reports {
        args.extend(["--report", s(r)]);
    }
    let matrix: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
    assert!(matrix["measures"].as_array().unwrap().len() > 1);
    args.extend(["--format", "csv"]);
    assert!(ok(&args).lines().count() > 1);
}

#[test]
fn reruns_are_byte_identical() {
    let d = data();
    let run = synth(&d, "most-unfair");
    let a = std::fs::read_to_string(eval(&d, &run, "same")).unwrap();
    let b = std::fs::read_to_string(eval(&d, &run, "same")).unwrap();
    let first_diff = a.lines().zip(b.lines()).find(|(x, y)| x != y);
    assert!(a == b, "reports differ at {first_diff:?}");
    let sim = |seed: &str| ok(&["sim", "--kind", "weibull", "-m", "12", "--seed", seed]);
    assert_eq!(sim("3"), sim("3"));
    assert_ne!(sim("3"), sim("4"));
}

#[test]
fn pareto_then_dpfr() {
    let d = data();
    let trace = d.dir.path().join("trace.json");
    let tsv = d.dir.path().join("trace.tsv");
    ok(&[
        "pareto",
        "--qrels",
        s(&d.qrels),
        "--catalog",
        s(&d.catalog),
        "-k",
        "5",
        "-o",
        s(&trace),
        "--tsv",
        s(&tsv),
    ]);
    assert!(std::fs::read_to_string(&tsv).unwrap().lines().count() >= 2);
    let fair = synth(&d, "most-fair");
    let unfair = synth(&d, "most-unfair");
    let out = ok(&[
        "dpfr",
        "--frontier",
        s(&trace),
        "--qrels",
        s(&d.qrels),
        "--catalog",
        s(&d.catalog),
        "--model",
        &format!("fair={}", s(&fair)),
        "--model",
        &format!("unfair={}", s(&unfair)),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v.to_string();
    assert!(text.contains("fair") && text.contains("unfair"), "{text}");

    let est = d.dir.path().join("est.json");
    ok(&[
        "pareto",
        "--qrels",
        s(&d.qrels),
        "--catalog",
        s(&d.catalog),
        "-k",
        "5",
        "--points",
        "4",
        "-o",
        s(&est),
    ]);
    let est: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&est).unwrap()).unwrap();
    assert!(est["checkpoints"].as_array().unwrap().len() <= 4);
}

#[test]
fn bounds_prints_closed_forms() {
    let out = ok(&["bounds", "-k", "2", "-m", "2", "-n", "4", "--measures", "Jain,Gini"]);
    assert!(out.contains("Jain") && out.contains("Gini"), "{out}");
}

#[test]
fn failures_exit_nonzero_with_a_message() {
    let d = data();
    let missing = d.dir.path().join("nope.tsv");
    let out = recfair(&["eval", "--run", s(&missing), "--qrels", s(&d.qrels), "-k", "5"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nope.tsv"), "{err}");

    let bad = d.dir.path().join("bad.tsv");
    std::fs::write(&bad, "u0\ti00\tzero\n").unwrap();
    let out = recfair(&[
        "eval",
        "--run",
        s(&bad),
        "--catalog",
        s(&d.catalog),
        "--qrels",
        s(&d.qrels),
        "-k",
        "5",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));

    assert!(!recfair(&["bounds", "-k", "0", "-m", "2", "-n", "4"]).status.success());
    assert!(!recfair(&["frobnicate"]).status.success());
}
