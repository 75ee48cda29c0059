use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64 as C64;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssdesign"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn read_rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().expect("header");
    lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[test]
fn fig1a_potential_is_pt_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--preset", "fig1a"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows(&dir.path().join("fig1a_potential.csv"));
    assert_eq!(rows.len(), 2001);
    let n = rows.len();
    for i in 0..n {
        let (a, b) = (&rows[i], &rows[n - 1 - i]);
        assert!((a[0] + b[0]).abs() < 1e-12);
        assert!((a[1] - b[1]).abs() <= 1e-10 * (1.0 + a[1].abs()), "Re U not even at x = {}", a[0]);
        assert!((a[2] + b[2]).abs() <= 1e-10 * (1.0 + a[2].abs()), "Im U not odd at x = {}", a[0]);
    }
}

#[test]
fn fig4_build_matches_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--preset", "fig4"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let i = C64::i();
    for r in read_rows(&dir.path().join("fig4_w1.csv")) {
        let x = r[0];
        let w = C64::new(-x.tanh() - 0.5 * sech(x), sech(x));
        assert!((C64::new(r[1], r[2]) - w).norm() < 1e-9, "w at x = {x}");
    }
    let k = 1.0;
    for r in read_rows(&dir.path().join("fig4_potential.csv")) {
        let x = r[0];
        let kk = C64::new(k, 0.5);
        let u = (2.0 * kk * kk * (1.0 + i * x.sinh()) + 0.25) * sech(x).powi(2);
        assert!((C64::new(r[1], r[2]) - u).norm() < 1e-8 * (1.0 + u.norm()), "U at x = {x}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"construction":{"kind":"self_dual","k1":2.5,"a0":0}}"#).unwrap();
    let o = run(&["build", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    assert_eq!(code(&run(&["build", "--preset", "nope"], dir.path())), 2);
}

#[test]
fn construction_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("three.json");
    fs::write(&cfg, r#"{"construction":{"kind":"three_ss","k1":1,"k2":2,"k3":3,"z":[-1,0]}}"#).unwrap();
    let o = run(&["build", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn narrow_window_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scan", "--preset", "fig1a", "--L", "1"], dir.path());
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("TailTooFat"));
}

fn peaks(rows: &[Vec<f64>], above: f64) -> Vec<f64> {
    (1..rows.len() - 1)
        .filter(|&i| rows[i][1] > above && rows[i][1] >= rows[i - 1][1] && rows[i][1] >= rows[i + 1][1])
        .map(|i| rows[i][0])
        .collect()
}

#[test]
fn free_scan_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scan", "--preset", "free", "--svg"], dir.path());
    assert_eq!(code(&o), 0);
    for r in read_rows(&dir.path().join("free_spectrum.csv")) {
        assert!((r[1] - 1.0).abs() < 1e-8 && r[2] < 1e-8 && r[3] < 1e-8, "{r:?}");
    }
    assert!(fs::read_to_string(dir.path().join("free_spectrum.svg")).unwrap().contains("<polyline"));
}

#[test]
fn fig2_has_two_positive_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig2.json");
    let o = Command::new(env!("CARGO_BIN_EXE_ssdesign")).args(["presets", "fig2"]).output().unwrap();
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v["scan"]["n"] = 2001.into();
    fs::write(&cfg, v.to_string()).unwrap();
    let o = run(&["scan", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = peaks(&read_rows(&dir.path().join("fig2_spectrum.csv")), 1e2);
    assert_eq!(p.len(), 2, "{p:?}");
    assert!((p[0] - 2.5).abs() < 0.01 && (p[1] - 3.0).abs() < 0.01, "{p:?}");
}

#[test]
fn fig6_has_three_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scan", "--preset", "fig6"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = peaks(&read_rows(&dir.path().join("fig6_spectrum.csv")), 1e2);
    assert_eq!(p.len(), 3, "{p:?}");
}

fn find_ss(preset: &str) -> serde_json::Value {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["find-ss", "--preset", preset], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{preset}_ss.json"))).unwrap()).unwrap()
}

fn found(report: &serde_json::Value) -> Vec<(f64, u64)> {
    report["found"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["k0"].as_f64().unwrap(), s["order"].as_u64().unwrap()))
        .collect()
}

#[test]
fn find_ss_fig4_second_order() {
    let f = found(&find_ss("fig4"));
    assert_eq!(f.len(), 1);
    assert!((f[0].0 - 1.0).abs() < 1e-3 && f[0].1 == 2, "{f:?}");
}

#[test]
fn find_ss_fig5_orders() {
    let f = found(&find_ss("fig5"));
    assert_eq!(f.len(), 2, "{f:?}");
    assert!((f[0].0 + 0.5).abs() < 1e-3 && f[0].1 == 1);
    assert!((f[1].0 - 0.5).abs() < 1e-3 && f[1].1 == 2);
}

#[test]
fn find_ss_fig7_three() {
    let r = find_ss("fig7");
    let f = found(&r);
    assert_eq!(f.len(), 3, "{f:?}");
    for (got, want) in f.iter().zip([1.0, 2.0, 3.0]) {
        assert!((got.0 - want).abs() < 1e-3 && got.1 == 1, "{f:?}");
    }
    assert_eq!(r["recovered"], true);
}

#[test]
fn verify_presets_pass() {
    for preset in ["fig1a", "fig1d"] {
        let dir = tempfile::tempdir().unwrap();
        let o = run(&["verify", "--preset", preset], dir.path());
        assert_eq!(code(&o), 0, "{preset}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn verify_fig5_pseudo_hermitian() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--preset", "fig5"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig5_verify.json")).unwrap()).unwrap();
    let c = v["report"]["checks"].as_array().unwrap().iter().find(|c| c["name"] == "pseudo_hermitian_identity").unwrap();
    assert_eq!(c["pass"], true);
    assert!(c["residual"].as_f64().unwrap() <= 1e-4);
}
