use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn specdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specdim")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = specdim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn describe_presets() {
    let u = json_ok(&["describe", "--spec", "uniform"]);
    assert_eq!(u["information_dimension"], 1.0);
    assert_eq!(u["fourier"].as_array().unwrap().len(), 17);
    assert_eq!(u["config"]["spec"], "uniform");

    let c = json_ok(&["describe", "--spec", "cantor"]);
    let d = c["information_dimension"].as_f64().unwrap();
    assert!((d - 2f64.ln() / 3f64.ln()).abs() < 1e-12);

    let a = json_ok(&["describe", "--spec", "appendix"]);
    let log2: Vec<f64> = a["appendix_mu"].as_array().unwrap()[1..].iter().map(|m| m["log2"].as_f64().unwrap()).collect();
    assert_eq!(log2, vec![-1.0, -2.0, -19.0, -20.0]);
}

#[test]
fn describe_reads_spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(&p, r#"{"kind":"binomial","params":{"p":0.8}}"#).unwrap();
    let v = json_ok(&["describe", "--spec", p.to_str().unwrap()]);
    let d = v["information_dimension"].as_f64().unwrap();
    assert!((d - 0.7219280948873623).abs() < 1e-12);

    std::fs::write(&p, r#"{"kind":"binomial","params":{"p":0.8,"q":1}}"#).unwrap();
    let out = specdim(&["describe", "--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn entropy_scan_uniform_is_exact() {
    let out = specdim(&["entropy-scan", "--spec", "uniform", "--times", "2,4,8"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(header, ["T", "S", "S_over_lnT"]);
    for r in rows {
        assert!((r[1] - r[0].ln()).abs() < 1e-9);
    }
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!((summary["slope"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn entropy_scan_atomic_is_flat() {
    let v = json_ok(&["entropy-scan", "--spec", "atomic", "--times", "2^1..2^6", "--format", "json"]);
    for p in v["points"].as_array().unwrap() {
        assert!(p["S"].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn entropy_scan_cantor_slope() {
    let v = json_ok(&["entropy-scan", "--spec", "cantor", "--times", "2^4..2^11", "--format", "json"]);
    let s = v["slope"].as_f64().unwrap();
    assert!((0.53..=0.73).contains(&s), "{s}");
    assert_eq!(v["config"]["times"].as_array().unwrap().len(), 8);
}

#[test]
fn entropy_scan_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scan.csv");
    let out = specdim(&["entropy-scan", "--spec", "uniform", "--times", "2^1..2^3", "--output", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 4);
}

#[test]
fn dimension_examples() {
    let c = json_ok(&["dimension", "--spec", "cantor", "--kind", "info", "--base", "3", "--depths", "4..12"]);
    assert!((c["value"].as_f64().unwrap() - 0.6309).abs() < 1e-4);
    assert_eq!(c["kind"], "info");

    let a = json_ok(&["dimension", "--spec", "appendix", "--kind", "fractal", "--epsilon", "0.01", "--depths", "6..22"]);
    assert!(a["value"].as_f64().unwrap() >= 0.85);

    for kind in ["info", "fractal", "hausdorff"] {
        let v = json_ok(&["dimension", "--spec", "atomic", "--kind", kind, "--depths", "4..10", "--samples", "200"]);
        assert_eq!(v["value"], 0.0, "{kind}");
        let v = json_ok(&["dimension", "--spec", "atoms(3)", "--kind", kind, "--depths", "4..10", "--samples", "200"]);
        let x = v["value"].as_f64().unwrap();
        if kind == "hausdorff" {
            // each small ball holds one atom of mass 1/3: α = log2(3)/k at δ = π·2^-k
            assert!((x - 3f64.log2() / 10.0).abs() < 1e-12, "{x}");
        } else {
            assert!(x.abs() < 1e-12, "{kind}: {x}");
        }
    }
}

#[test]
fn error_exit_codes() {
    assert_eq!(specdim(&["dimension", "--spec", "nope"]).status.code(), Some(2));
    assert_eq!(specdim(&["entropy-scan", "--spec", "uniform", "--times", "8,4"]).status.code(), Some(2));
    assert_eq!(specdim(&["entropy-scan", "--spec", "uniform", "--method", "svd"]).status.code(), Some(2));
    assert_eq!(specdim(&["describe", "--spec", "uniform", "--unknown"]).status.code(), Some(2));
    let big = specdim(&["dimension", "--spec", "uniform", "--depths", "20..30"]);
    assert_eq!(big.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&big.stderr).contains("cells"));
    assert_eq!(specdim(&["entropy-scan", "--spec", "uniform", "--times", "8192"]).status.code(), Some(3));
}

#[test]
fn synth_atomic_has_unit_modulus() {
    let out = specdim(&["timeseries", "synth", "--spec", "atomic", "--length", "4"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(header, ["re", "im"]);
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!((r[0].hypot(r[1]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn synth_is_deterministic() {
    let a = specdim(&["timeseries", "synth", "--spec", "cantor", "--length", "64", "--seed", "7"]);
    let b = specdim(&["timeseries", "synth", "--spec", "cantor", "--length", "64", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

fn synth_then_analyze(spec: &str, dir: &Path) -> Value {
    let csv = dir.join(format!("{spec}.csv"));
    let out = specdim(&["timeseries", "synth", "--spec", spec, "--length", "131072", "--seed", "1", "--output", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    json_ok(&["timeseries", "analyze", "--input", csv.to_str().unwrap(), "--times", "2^3..2^9"])
}

#[test]
fn analyze_recovers_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let u = synth_then_analyze("uniform", dir.path());
    let su = u["curve"]["slope"].as_f64().unwrap();
    assert!((su - 1.0).abs() < 0.1, "{su}");
    let c = synth_then_analyze("cantor", dir.path());
    let sc = c["curve"]["slope"].as_f64().unwrap();
    assert!((sc - 0.63).abs() < 0.15, "{sc}");
    for e in c["min_eigenvalues"].as_array().unwrap() {
        assert!(e.as_f64().unwrap() > -1e-8);
    }
}

#[test]
fn analyze_reports_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "re,im\n1,0\n0,1\nfoo,1\n").unwrap();
    let out = specdim(&["timeseries", "analyze", "--input", p.to_str().unwrap(), "--times", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&out.stderr));
}
