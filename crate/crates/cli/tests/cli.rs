use std::process::{Command, Output};

use anisocap::{main_with, Cli, ReportDocument, RunConfig, Summary, REPORT_DIR_ENV, SCHEMA_VERSION};
use clap::Parser;

fn anisocap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anisocap"))
        .args(args)
        .env_remove(REPORT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_names_checks_and_scenarios() {
    let o = anisocap(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "hsiung-minkowski",
        "heintze-karcher",
        "minkowski-uniqueness",
        "hemisphere",
        "closed-sphere",
    ] {
        assert!(text.contains(name), "{name} missing from list");
    }
}

#[test]
fn unknown_names_are_usage_errors() {
    let o = anisocap(&["verify", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hsiung-minkowski"));

    let o = anisocap(&["verify", "hsiung-minkowski", "--surface", "no-such-surface"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(
        err.contains("ellipsoid-wulff-cap") && err.contains("capillary-wulff"),
        "{err}"
    );
}

#[test]
fn verify_single_identity() {
    let o = anisocap(&[
        "verify",
        "hsiung-minkowski",
        "--surface",
        "capillary-wulff",
        "--f",
        "const",
        "--k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS"), "{text}");
    assert!(text.contains("1 passed, 0 failed"));
}

#[test]
fn solve_prints_json_document() {
    let o = anisocap(&["solve", "minkowski1d", "--p", "3", "--N", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.schema_version, SCHEMA_VERSION);
    let sol = doc.solution.expect("solution present");
    assert_eq!(sol.u.len(), 65);
    assert!(sol.residual <= 1e-10);
}

#[test]
fn ladder_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ladder.csv");
    let o = anisocap(&[
        "ladder",
        "hsiung-minkowski",
        "--surface",
        "perturbed-cap",
        "--k",
        "1",
        "--f",
        "u",
        "--levels",
        "2,3,4",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "id",
            "scenario",
            "k",
            "f",
            "level",
            "h",
            "lhs",
            "rhs",
            "residual",
            "fitted_order"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let residuals: Vec<f64> = rows.iter().map(|r| r[8].parse().unwrap()).collect();
    assert!(
        residuals[0] > residuals[1] && residuals[1] > residuals[2],
        "{residuals:?}"
    );
    let order: f64 = rows[0][9].parse().unwrap();
    assert!(order >= 1.8, "{order}");
}

#[test]
fn report_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_anisocap"))
        .args(["verify", "boundary-condition", "--surface", "hemisphere"])
        .env(REPORT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("verify-boundary-condition.json")).unwrap();
    let doc: ReportDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.summary.passed, 1);
    assert_eq!(doc.reports[0].scenario.as_deref(), Some("hemisphere"));
}

#[test]
fn exit_codes_follow_verdicts() {
    let s = |passed, failed, inconclusive| Summary {
        total: passed + failed + inconclusive,
        passed,
        failed,
        inconclusive,
    };
    assert_eq!(s(3, 0, 0).exit_code(), 0);
    assert_eq!(s(3, 1, 2).exit_code(), 1);
    assert_eq!(s(3, 0, 2).exit_code(), 3);
    assert_eq!(s(0, 0, 0).exit_code(), 1);
}

#[test]
fn config_roundtrips_through_json() {
    let cli = Cli::try_parse_from([
        "anisocap",
        "verify",
        "minkowski-corollary",
        "--surface",
        "perturbed-capillary",
        "--eps",
        "0.04",
        "--k",
        "0",
        "--f",
        "u",
        "--level",
        "3",
    ])
    .unwrap();
    let config = RunConfig::from_cli(&cli).unwrap();
    let text = serde_json::to_string(&config).unwrap();
    let back: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(config, back);
}

#[test]
fn in_process_run_matches_binary() {
    let cli = Cli::try_parse_from([
        "anisocap",
        "verify",
        "support-constancy",
        "--surface",
        "ellipsoid-wulff-cap",
    ])
    .unwrap();
    let mut buf = Vec::new();
    let code = main_with(&cli, &mut buf).unwrap();
    assert_eq!(code, 0);
    let o = anisocap(&["verify", "support-constancy", "--surface", "ellipsoid-wulff-cap"]);
    assert_eq!(String::from_utf8(buf).unwrap(), stdout(&o));
}
