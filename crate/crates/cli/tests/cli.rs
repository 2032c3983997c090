use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn takagi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_takagi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let o = takagi(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&d);
    d
}

#[test]
fn maximize_classical() {
    let v = json(&["maximize", "--alpha", "1"]);
    assert_eq!(v["value"]["num"], "2");
    assert_eq!(v["value"]["den"], "3");
    assert_eq!(v["dimension"], "1/2");
    assert_eq!(v["value_decimal"], "0.666666666666666666666666666667");
}

#[test]
fn maximize_power_squared() {
    let v = json(&["maximize", "--seq", "power-squared"]);
    let locs: Vec<(String, String)> = v["locations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["num"].as_str().unwrap().to_string(), l["den"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(locs, vec![("11".into(), "24".into()), ("13".into(), "24".into())]);
}

#[test]
fn minimize_minus_one() {
    let v = json(&["minimize", "--alpha", "-1"]);
    assert_eq!(v["value"]["num"], "0");
    assert_eq!(v["dimension"], "1/2");
}

#[test]
fn algebraic_alpha_syntax() {
    let a = json(&["maximize", "--alpha", "sqrt2"]);
    let b = json(&["maximize", "--alpha", "root:-2,0,1:1:2"]);
    assert_eq!(a["value_enclosure"], b["value_enclosure"]);
}

#[test]
fn classify_reports_regime() {
    let v = json(&["classify", "--alpha", "-3/2"]);
    assert_eq!(v["regime"], "neg-steep(n=1)");
    assert_eq!(v["max"]["cardinality"]["count"], 2);
}

#[test]
fn eval_rational_point() {
    let o = takagi(&["eval", "--alpha", "1", "--t", "1/3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "f(1/3) = 0.666666666666666666666666666667");
}

#[test]
fn csv_output_has_header() {
    let o = takagi(&["--output", "csv", "maximize", "--alpha", "1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("target,kind,which,exact,decimal,value,cardinality,dim\n"));
}

#[test]
fn scan_degree_one() {
    let v = json(&["littlewood", "scan", "--max-degree", "1"]);
    assert_eq!(v["total_real_roots"], 2);
    assert_eq!(v["total_step_roots"], 1);
}

#[test]
fn scan_writes_files_with_sidecars() {
    let d = scratch("scan");
    let out = d.to_str().unwrap();
    let o = takagi(&["littlewood", "scan", "--max-degree", "6", "--out", out, "--roots-csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["summary.json", "histograms.csv", "roots.csv"] {
        assert!(d.join(f).exists(), "{f}");
        let meta: Value = serde_json::from_str(&fs::read_to_string(d.join(format!("{f}.meta.json"))).unwrap()).unwrap();
        assert_eq!(meta["file"], f);
        assert!(meta["git_describe"].is_string());
    }
    let first = fs::read(d.join("roots.csv")).unwrap();
    let o = takagi(&["littlewood", "scan", "--max-degree", "6", "--out", out, "--roots-csv", "--jobs", "1"]);
    assert!(o.status.success());
    assert_eq!(first, fs::read(d.join("roots.csv")).unwrap());
}

#[test]
fn steproots_and_gaps() {
    let o = takagi(&["littlewood", "steproots", "--max-degree", "4", "--sign", "neg"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("-1.61803398874989484820458683437"));
    let o = takagi(&["littlewood", "gaps", "--max-degree", "8", "--resolution", "0.05"]);
    assert!(o.status.success());
    assert!(!stdout(&o).is_empty());
}

#[test]
fn figures_are_deterministic() {
    let d = scratch("figures");
    let out = d.to_str().unwrap();
    for which in ["2", "3"] {
        let o = takagi(&["figure", which, "--out", out, "--points", "32"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let fig3 = fs::read_to_string(d.join("fig3_landsberg.csv")).unwrap();
    let series: std::collections::BTreeSet<&str> = fig3.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(series.len(), 8);
    let lines = fs::read_to_string(d.join("fig2_maximizers.csv")).unwrap();
    assert!(lines.contains("0.458333333333333333333333333333"));
    let before = fs::read(d.join("fig2_power_squared.csv")).unwrap();
    assert!(takagi(&["figure", "2", "--out", out, "--points", "32"]).status.success());
    assert_eq!(before, fs::read(d.join("fig2_power_squared.csv")).unwrap());
}

#[test]
fn figure_one_rows() {
    let d = scratch("fig1");
    let o = takagi(&["figure", "1", "--out", d.to_str().unwrap(), "--points", "99"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(d.join("fig1_maximizer_curve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 100);
}

#[test]
fn selftest_passes() {
    let o = takagi(&["selftest", "--seed", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(takagi(&["maximize", "--alpha", "3"]).status.code(), Some(1));
    assert_eq!(takagi(&["maximize", "--alpha", "nonsense"]).status.code(), Some(1));
    assert_eq!(takagi(&["maximize"]).status.code(), Some(1));
    assert_eq!(takagi(&["--depth", "0", "maximize", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(takagi(&["littlewood", "scan", "--max-degree", "40"]).status.code(), Some(3));
    assert_eq!(takagi(&["--help"]).status.code(), Some(0));
}
