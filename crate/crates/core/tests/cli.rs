// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn hetvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hetvar")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = hetvar(&["generate", "--samples", "1024", "--num-sigmas", "4", "--seed", "7", "--out", path(out)]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn analyze_prints_bounded_score() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.csv");
    assert!(hetvar(&["generate", "--samples", "4096", "--num-sigmas", "8", "--out", path(&s)]).status.success());
    let dist = dir.path().join("dist.csv");
    let o = hetvar(&[
        "analyze", "--input", path(&s), "--window", "128", "--bins", "64", "--variant", "bhattacharyya",
        "--emit-distribution", path(&dist),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("variant,score,window,bins,n_variances"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[0], "bhattacharyya");
    let score: f64 = fields[1].parse().unwrap();
    assert!((0.0..=1.0).contains(&score));
    assert_eq!(fields[2..], ["128", "64", "3969"]);

    let hist = std::fs::read_to_string(&dist).unwrap();
    assert!(hist.starts_with("bin_midpoint,mass\n"));
    assert_eq!(hist.lines().count(), 65);
}

#[test]
fn divergence_self_identity() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    std::fs::write(&a, "bin_midpoint,mass\n0.5,0.2\n1.5,0.3\n2.5,0.5\n").unwrap();
    let o = hetvar(&["divergence", "--p", path(&a), "--q", path(&a), "--metric", "bc"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "metric,value,alpha,log_base\nbc,1,,natural\n");

    let o = hetvar(&["divergence", "--p", path(&a), "--metric", "shannon_entropy", "--log-base", "base2"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.lines().nth(1).unwrap().starts_with("shannon_entropy,"));
    assert!(out.ends_with(",,base2\n"));
}

#[test]
fn divergence_infinite_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    let q = dir.path().join("q.csv");
    let r = dir.path().join("r.csv");
    std::fs::write(&p, "mass\n1\n0\n").unwrap();
    std::fs::write(&q, "mass\n0\n1\n").unwrap();
    std::fs::write(&r, "mass\n1\n1\n1\n").unwrap();
    let o = hetvar(&["divergence", "--p", path(&p), "--q", path(&q), "--metric", "bhattacharyya"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("bhattacharyya,inf,,natural"));

    let o = hetvar(&["divergence", "--p", path(&p), "--q", path(&r), "--metric", "kl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("error: binning:"));

    let o = hetvar(&["divergence", "--p", path(&p), "--q", path(&q), "--metric", "renyi", "--alpha", "0.5"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("renyi,inf,0.5,natural"));
}

#[test]
fn malformed_csv_exit_one_with_row() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "value\n1.0\nabc\n").unwrap();
    let o = hetvar(&["analyze", "--input", path(&bad), "--window", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: ingestion: row 2"), "{err}");
}

#[test]
fn io_errors_exit_two() {
    let o = hetvar(&["analyze", "--input", "/no/such/file.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_run_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = hetvar(&["generate", "--samples", "3", "--num-sigmas", "9", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn sweep_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let summary = dir.path().join("s.csv");
    let o = hetvar(&[
        "sweep", "--sigma-counts", "1,4", "--windows", "32", "--bins", "16", "--samples", "2048", "--seeds", "1,2",
        "--out", path(&out), "--summary", path(&summary),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(&out).unwrap();
    assert_eq!(report.lines().next(), Some("k,window,seed,metric,score"));
    assert_eq!(report.lines().count(), 1 + 2 * 2 * 3);
    let summary = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(summary.lines().next(), Some("window,metric,spearman,mean_score_k1,mean_score_k4"));
    assert_eq!(summary.lines().count(), 4);
}

#[test]
fn usage_errors() {
    let o = hetvar(&["sweep", "--windows", "a,b"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hetvar(&[]);
    assert_eq!(o.status.code(), Some(1));
    let o = hetvar(&["--help"]);
    assert!(o.status.success());
    let help = String::from_utf8(o.stdout).unwrap();
    for sub in ["generate", "analyze", "divergence", "sweep"] {
        assert!(help.contains(sub));
    }
}
