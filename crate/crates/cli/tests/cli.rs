use std::path::Path;
use std::process::{Command, Output};

fn polya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya"))
        .args(args)
        .output()
        .expect("run polya")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.split_whitespace()
        .find_map(|w| w.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(polya(&[]).status.code(), Some(2));
    assert_eq!(polya(&["classify", "--lambda", "3"]).status.code(), Some(2));
    assert_eq!(
        polya(&["classify", "--lambda", "x", "--mu", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polya(&["classify", "--lambda", "3", "--mu", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polya(&["--jobs", "0", "coverage", "--lambda-max", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(polya(&["certify", "--alpha", "3/2"]).status.code(), Some(2));
}

#[test]
fn classify_prints_labels() {
    let o = polya(&["classify", "--lambda", "40", "--mu", "20"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "regions"), "COMP");
    let o = polya(&["classify", "--lambda", "160", "--mu", "80"]);
    assert!(field(&stdout(&o), "regions").contains('V'));
}

#[test]
fn count_reports_the_chain() {
    let o = polya(&["count", "--r", "1/2", "--lambda", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let n: u64 = field(&text, "N").parse().unwrap();
    let p: u64 = field(&text, "P").parse().unwrap();
    let pb: u64 = field(&text, "P_bar").parse().unwrap();
    let bound: f64 = field(&text, "polya_bound").parse().unwrap();
    assert_eq!(n, 63);
    assert!(n <= p && p <= pb);
    assert!((n as f64) < bound);
}

#[test]
fn bounds_prints_enclosures() {
    let o = polya(&["bounds", "--lambda", "10", "--mu", "4", "--z", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["G=", "H=", "F=", "Phi=", "omega0="] {
        assert!(text.contains(name), "{name} missing from {text}");
    }
}

fn certify(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let out = dir.join(name);
    let out_s = out.to_str().unwrap().to_string();
    let mut args = vec!["--out", out_s.as_str(), "certify", "--lambda-start", "20"];
    args.extend_from_slice(extra);
    (polya(&args), out_s)
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (o, path) = certify(dir.path(), "c.jsonl", &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(field(&text, "status"), "complete");
    let v = polya(&["verify", &path]);
    assert!(v.status.success());
    let vt = stdout(&v);
    assert!(vt.starts_with("PASS"));
    assert_eq!(field(&vt, "failures"), "0");
    assert_eq!(field(&vt, "covers_comp"), "false");

    // decrement one recorded majorant
    let cert = std::fs::read_to_string(&path).unwrap();
    let line = cert.lines().find(|l| l.contains("\"rectangle\"")).unwrap();
    let p = line
        .split("\"p\":\"")
        .nth(1)
        .unwrap()
        .split('/')
        .next()
        .unwrap();
    let lowered: i64 = p.parse::<i64>().unwrap() - 1;
    let bad = cert.replacen(
        line,
        &line.replace(
            &format!("\"p\":\"{p}/1\""),
            &format!("\"p\":\"{lowered}/1\""),
        ),
        1,
    );
    let bad_path = dir.path().join("bad.jsonl");
    std::fs::write(&bad_path, bad).unwrap();
    let v = polya(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("FAIL"));

    let garbage = dir.path().join("garbage.jsonl");
    std::fs::write(&garbage, "not json\n").unwrap();
    assert_eq!(
        polya(&["verify", garbage.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn resumed_certificate_matches_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let (o, full) = certify(dir.path(), "full.jsonl", &[]);
    assert!(o.status.success());
    let (o, part) = certify(dir.path(), "part.jsonl", &["--max-columns", "4"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "status"), "partial");
    let o = polya(&["--out", &part, "certify", "--resume", &part]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&part).unwrap());
}

fn csv(args: &[&str]) -> Vec<Vec<String>> {
    let o = polya(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn bounds_plot_relation() {
    let rows = csv(&[
        "plotdata",
        "--figure",
        "bounds-gfh",
        "--lambda",
        "40",
        "--mu",
        "25",
        "--points",
        "200",
    ]);
    assert_eq!(
        rows[0],
        ["z", "phi_plus_h", "g_plus_quarter", "gamma", "g_minus_f"]
    );
    let num = |s: &str| s.parse::<f64>().ok();
    let mut checked = 0;
    for r in &rows[1..] {
        let z = num(&r[0]).unwrap();
        let gf = num(&r[4]).unwrap();
        if let (Some(ph), Some(gq)) = (num(&r[1]), num(&r[2])) {
            assert!(z < 25.0);
            assert!((gf - ph.min(gq)).abs() < 1e-9, "z = {z}");
            checked += 1;
        }
        if let Some(g) = num(&r[3]) {
            assert!(g <= gf + 1e-9, "gamma above bound at z = {z}");
        }
    }
    assert!(checked > 100);
}

#[test]
fn region_grid_and_trace() {
    let rows = csv(&["plotdata", "--figure", "region-grid", "--points", "50"]);
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][0], "r");
    let dir = tempfile::tempdir().unwrap();
    let (_, path) = certify(dir.path(), "c.jsonl", &[]);
    let rows = csv(&[
        "plotdata",
        "--figure",
        "strip-trace",
        "--certificate",
        &path,
    ]);
    assert_eq!(rows[0], ["k", "lambda_hi", "lambda_lo", "width", "cells"]);
    assert_eq!(rows[1][1], "20/1");
    assert_eq!(
        polya(&["plotdata", "--figure", "strip-trace"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn coverage_small_grid() {
    let o = polya(&["coverage", "--step", "1/2", "--lambda-max", "200"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn theorems_small_run() {
    let o = polya(&[
        "--seed",
        "7",
        "theorems",
        "--instances",
        "200",
        "--samples",
        "100",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("seed=7"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}
