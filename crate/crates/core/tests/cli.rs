use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bottlab::manifest::parse_manifest;
use bottlab::report::{parse_report, CSV_HEADER};

fn bottlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bottlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

#[test]
fn dim_zero_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bottlab(&["spectrum", "--dim", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim must be ≥ 1"));
}

#[test]
fn unknown_flags_and_threads_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bottlab(&["spectrum", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(
        bottlab(&["spectrum", "--suite", "mehler"], dir.path()).status.code(),
        Some(2)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_bottlab"))
        .env("BOTTLAB_THREADS", "zero")
        .args(["spectrum", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_writes_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let out = bottlab(&["spectrum", "--dim", "1", "--levels", "12"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = parse_report(&fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert!(report.pass);
    let clusters = &report.params["clusters"];
    assert_eq!(clusters["0"], 1);
    for lambda in ["2", "4", "6", "8", "10", "12"] {
        assert_eq!(clusters[lambda], 2, "eigenvalue {lambda}");
    }
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    let manifest = parse_manifest(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "spectrum");
    assert!(manifest.outputs.contains(&"spectrum.json".to_string()));
}

#[test]
fn runs_are_deterministic_and_replayable() {
    let (a, b, c) = (
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    );
    let args = [
        "report-all",
        "--suite",
        "mehler,graded-laws,commutator-dirac",
        "--levels",
        "10",
    ];
    assert_eq!(bottlab(&args, a.path()).status.code(), Some(0));
    assert_eq!(bottlab(&args, b.path()).status.code(), Some(0));
    let manifest = a.path().join("manifest.json");
    let replay = ["report-all", "--manifest", manifest.to_str().unwrap()];
    assert_eq!(bottlab(&replay, c.path()).status.code(), Some(0));
    for name in [
        "mehler.json",
        "graded-laws.json",
        "commutator-dirac.json",
        "report-all.csv",
    ] {
        let first = fs::read(a.path().join(name)).unwrap();
        assert_eq!(
            first,
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs between runs"
        );
        assert_eq!(
            first,
            fs::read(c.path().join(name)).unwrap(),
            "{name} differs on replay"
        );
    }
}

#[test]
fn json_only_skips_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = bottlab(&["delta", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("delta-xr.json").exists());
    assert!(!dir.path().join("delta.csv").exists());
}

#[test]
fn report_all_at_level_ten_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bottlab(
        &["report-all", "--dim", "1", "--levels", "10", "--t-max", "16"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn csv_has_one_row_per_t_and_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = bottlab(
        &["commutators", "--suite", "commutator-dirac", "--t-points", "7"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("commutators.csv")).unwrap();
    // Two generators f against three default fields h.
    assert_eq!(csv.lines().count() - 1, 7 * 2 * 3);
}
