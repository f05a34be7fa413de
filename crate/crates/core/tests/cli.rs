mod common;

use std::path::Path;
use std::process::{Command, Output};

use arswarm::app::io::series_to_csv;
use arswarm::app::{load_csv, ColumnSelector};
use serde_json::Value;

fn arswarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arswarm")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_fixture(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("ar2.csv");
    std::fs::write(&path, series_to_csv(common::fixture(7).values())).unwrap();
    path
}

#[test]
fn simulate_is_deterministic_and_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = arswarm(&["simulate", "--n", "300", "--seed", "9", "--coefficients", "0.6,-0.3", "--output", s(p)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let series = load_csv(&a, &ColumnSelector::default()).unwrap();
    assert_eq!(series.len(), 300);
    // rows are written losslessly
    assert_eq!(series_to_csv(series.values()), std::fs::read_to_string(&a).unwrap());
}

#[test]
fn select_order_writes_one_row_per_order() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let outdir = dir.path().join("out");
    let out = arswarm(&["select-order", "--input", s(&input), "--rho-max", "6", "--output-dir", s(&outdir)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let curve = std::fs::read_to_string(outdir.join("aic_curve.csv")).unwrap();
    let lines: Vec<&str> = curve.lines().collect();
    assert_eq!(lines[0], "order,aic");
    assert_eq!(lines.len(), 7);
    assert!(outdir.join("manifest.json").exists());
}

#[test]
fn select_order_rejects_zero_rho_max() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = arswarm(&["select-order", "--input", s(&input), "--rho-max", "0", "--output-dir", s(dir.path())]);
    assert_eq!(code(&out), 1);
}

#[test]
fn compare_reports_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let outdir = dir.path().join("cmp");
    let out = arswarm(&[
        "compare", "--input", s(&input), "--order", "2", "--runs", "5", "--ls-seeding", "--output-dir", s(&outdir),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let report: Value = serde_json::from_str(&std::fs::read_to_string(outdir.join("report.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let row = |name: &str| rows.iter().find(|r| r["method"] == name).unwrap();
    assert_eq!(row("LS")["emp_mse_pct"].as_f64().unwrap(), 0.0);
    let pso = row("CF-PSO");
    assert!(pso["mse"].as_f64().unwrap() <= row("LS")["mse"].as_f64().unwrap());
    assert_eq!(pso["runs"].as_u64().unwrap(), 5);
    assert!(pso["std_mse"].as_f64().is_some());

    for file in ["report.csv", "convergence_trace.csv", "estimated_vs_actual.csv", "manifest.json"] {
        assert!(outdir.join(file).exists(), "{file}");
    }
    let eva = std::fs::read_to_string(outdir.join("estimated_vs_actual.csv")).unwrap();
    assert_eq!(eva.lines().next().unwrap(), "t,actual,LS,FB,YW,GL,CF-PSO");
    assert_eq!(eva.lines().count(), 1 + 2048 - 2);
}

#[test]
fn forecast_with_given_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ar1.csv");
    std::fs::write(&input, "1\n2\n8\n").unwrap();
    let out = arswarm(&[
        "forecast", "--input", s(&input), "--coefficients", "0.5", "--horizon", "2", "--output-dir", s(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("forecast.csv")).unwrap();
    assert_eq!(csv, "step,forecast\n1,4\n2,2\n");
}

#[test]
fn forecast_rejects_zero_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = arswarm(&["forecast", "--input", s(&input), "--horizon", "0", "--output-dir", s(dir.path())]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_flag_is_a_configuration_error() {
    assert_eq!(code(&arswarm(&["compare", "--no-such-flag"])), 1);
}

#[test]
fn missing_or_malformed_data_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_eq!(code(&arswarm(&["select-order", "--input", s(&missing)])), 2);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "value\n1.0\nabc\n2.0\n").unwrap();
    let out = arswarm(&["select-order", "--input", s(&bad), "--output-dir", s(dir.path())]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn constant_column_fails_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    std::fs::write(&flat, "5\n".repeat(100)).unwrap();
    let out = arswarm(&["compare", "--input", s(&flat), "--order", "2", "--runs", "1", "--output-dir", s(dir.path())]);
    assert_eq!(code(&out), 3);
    // the failed rows are still reported
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["failures"].as_array().unwrap().len(), 5);
}

#[test]
fn unit_root_without_noise_gives_constant_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ones.csv");
    let out = arswarm(&[
        "simulate", "--coefficients", "1", "--noise-std", "0", "--initial", "1", "--warmup", "0", "--n", "6",
        "--output", s(&path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "1\n".repeat(6));
}

#[test]
fn diverging_simulation_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = arswarm(&[
        "simulate", "--coefficients", "1.9", "--n", "5000", "--warmup", "0", "--output", s(&dir.path().join("x.csv")),
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bundled_fixture_matches_generator() {
    let bundled = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ar2_fixture.csv")).unwrap();
    assert_eq!(bundled, series_to_csv(common::fixture(7).values()));
}
