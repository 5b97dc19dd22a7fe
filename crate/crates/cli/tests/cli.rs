use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const FANO: &str = "0 1 3\n1 2 4\n2 3 5\n3 4 6\n0 4 5\n1 5 6\n0 2 6\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disjunct"))
        .args(args)
        .env_remove("DISJUNCT_ENUM_BUDGET")
        .env_remove("DISJUNCT_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn fano_matrix(dir: &Path) -> String {
    let blocks = path(dir, "fano.blocks");
    std::fs::write(&blocks, FANO).unwrap();
    let out = path(dir, "fano.txt");
    json(&["construct", "--family", "design", "--in", &blocks, "--out", &out]);
    out
}

#[test]
fn construct_ks_rs_shape() {
    let dir = tempfile::tempdir().unwrap();
    let (m, c) = (path(dir.path(), "m.txt"), path(dir.path(), "c.txt"));
    let r = json(&["construct", "--family", "ks-rs", "--q", "8", "--k", "3", "--out", &m, "--code-out", &c]);
    assert_eq!((r["M"].as_u64(), r["N"].as_u64(), r["w"].as_u64()), (Some(56), Some(512), Some(7)));
    // RS distance n - k + 1 = 5 doubles under the map
    assert_eq!(r["min_distance"], 10);
    let text = std::fs::read_to_string(&m).unwrap();
    assert!(text.starts_with("56 512 7\n"));
    assert!(std::fs::read_to_string(&c).unwrap().starts_with("8 7 512\n"));
}

#[test]
fn construct_bch_subcodes() {
    let r = json(&["construct", "--family", "bch-cw", "--m", "6", "--delta", "5", "--w", "3"]);
    assert_eq!(r["M"], 63);
    // the [63,51] code has minimum distance 5, so nothing of weight 3
    assert_eq!(r["N"], 0);
    let r = json(&["construct", "--family", "bch-cw", "--m", "6", "--delta", "3", "--w", "3"]);
    // Hamming code weight-3 words: 63 * 62 / 6
    assert_eq!(r["N"], 651);
    assert_eq!(r["min_distance"], 4);
}

#[test]
fn construct_design_passthrough() {
    let dir = tempfile::tempdir().unwrap();
    let m = fano_matrix(dir.path());
    let text = std::fs::read_to_string(m).unwrap();
    assert!(text.starts_with("7 7 3\n"));
}

#[test]
fn spectra_reports() {
    let dir = tempfile::tempdir().unwrap();
    let m = fano_matrix(dir.path());
    let r = json(&["spectra", "--matrix", &m]);
    assert_eq!(r["johnson"]["dual_distance"], 3);
    assert_eq!(r["johnson"]["dual"], serde_json::json!(["1/1", "0/1", "0/1", "4/1"]));
    assert_eq!(r["johnson"]["dual_nonnegative"], true);

    let c = path(dir.path(), "rs52.txt");
    json(&["construct", "--family", "ks-rs", "--q", "5", "--k", "2", "--code-out", &c]);
    let r = json(&["spectra", "--code", &c]);
    assert_eq!(r["hamming"]["dual_distance"], 3);
    assert_eq!(r["hamming"]["counts"], serde_json::json!([25, 0, 0, 400, 200]));
    let rows = r["hamming"]["moments"].as_array().unwrap();
    for row in rows.iter().filter(|row| row["below_dual_distance"] == true) {
        assert_eq!(row["relation"], "equal");
    }
}

fn epsilon(r: &Value) -> f64 {
    r["reports"][0]["report"]["epsilon"].as_f64().unwrap()
}

#[test]
fn bound_mirrors() {
    let r = json(&["bound", "--family", "cw", "--M", "1024", "--w", "32", "--t", "8", "--ell", "4"]);
    assert!((epsilon(&r) - 0.7605).abs() < 5e-4, "{}", epsilon(&r));

    let r = json(&["bound", "--family", "cw_l2", "--M", "63", "--w", "3", "--t", "5"]);
    assert_eq!(r["reports"][0]["report"]["epsilon_exact"], "125/992");

    let r = json(&["bound", "--family", "rs_asymptotic", "--q", "64", "--t", "2", "--ell", "4"]);
    assert!((epsilon(&r) - 0.0168).abs() < 5e-4);
}

#[test]
fn bound_auto_ell_uses_measured_dual_distance() {
    let dir = tempfile::tempdir().unwrap();
    let m = fano_matrix(dir.path());
    let r = json(&["bound", "--family", "cw", "--matrix", &m, "--t", "1", "--ell", "auto"]);
    assert_eq!(r["reports"][0]["ell"], 2);
    assert_eq!(r["reports"][0]["report"]["inputs"]["dprime"], 3);
    let out = run(&["bound", "--family", "cw", "--M", "7", "--w", "3", "--t", "1", "--ell", "auto"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_exact_and_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    let m = fano_matrix(dir.path());
    let r = json(&["simulate", "--matrix", &m, "--t", "2", "--exact"]);
    assert_eq!(r["report"]["mode"], "exact");
    let exact = r["report"]["exact"].as_str().unwrap().to_string();
    let bounds = r["bounds"].as_array().unwrap();
    assert!(bounds.iter().any(|b| b["formula_id"] == "cw_l2"));
    assert!(bounds.iter().all(|b| b["consistent"] == true));

    let csv = path(dir.path(), "trials.csv");
    let r = json(&["simulate", "--matrix", &m, "--t", "2", "--trials", "20000", "--trials-csv", &csv]);
    assert_eq!(r["report"]["mode"], "monte_carlo");
    assert_eq!(r["report"]["false_negatives"], 0);
    let (num, den) = exact.split_once('/').unwrap();
    let p = num.parse::<f64>().unwrap() / den.parse::<f64>().unwrap();
    let ci = r["report"]["ci"].as_array().unwrap();
    assert!(ci[0].as_f64().unwrap() <= p && p <= ci[1].as_f64().unwrap());
    let dump = std::fs::read_to_string(csv).unwrap();
    assert_eq!(dump.lines().count(), 20_001);
}

#[test]
fn simulate_exact_falls_back_over_budget() {
    let dir = tempfile::tempdir().unwrap();
    let m = fano_matrix(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_disjunct"))
        .args(["simulate", "--matrix", &m, "--t", "2", "--exact", "--trials", "1000"])
        .env("DISJUNCT_ENUM_BUDGET", "10")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["report"]["mode"], "monte_carlo");
    assert!(r["notes"][0].as_str().unwrap().contains("exact enumeration skipped"));
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "m.txt");
    json(&["construct", "--family", "ks-rs", "--q", "7", "--k", "2", "--out", &m]);
    let args = ["simulate", "--matrix", &m, "--t", "3", "--trials", "30000"];
    let a = run(&[&args[..], &["--workers", "1"]].concat()).stdout;
    let b = run(&[&args[..], &["--workers", "4"]].concat()).stdout;
    let c = run(&args).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn verify_runs_and_filters() {
    let r = json(&["verify", "--only", "orthogonality,moments"]);
    assert_eq!(r["passed"], true);
    let groups: Vec<_> = r["checks"].as_array().unwrap().iter().map(|c| c["group"].as_str().unwrap()).collect();
    assert!(groups.iter().all(|g| *g == "orthogonality" || *g == "moments"));
    assert!(groups.contains(&"moments"));
}

#[test]
fn verify_full_suite_passes() {
    let out = run(&["verify", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, "7 7 3\n0 1 3\n1 2\n").unwrap();
    let out = run(&["verify", "--matrix", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("header says 7"));
    assert_eq!(run(&["construct", "--family", "ks-rs", "--q", "6", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--family", "ks-rs", "--q", "7"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--family", "nope", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--matrix", "/nonexistent", "--t", "1"]).status.code(), Some(2));
}

#[test]
fn csv_and_text_projections() {
    let out = run(&["--format", "csv", "bound", "--family", "cw_l2", "--M", "7", "--w", "3", "--t", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,ell,epsilon,log_epsilon,epsilon_exact,trivial,preconditions_met"));
    assert!(lines.next().unwrap().starts_with("cw_l2,"));
    let out = run(&["--format", "text", "construct", "--family", "ks-rs", "--q", "4", "--k", "2"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("ks-rs M=12 N=16 w=3"));
}
