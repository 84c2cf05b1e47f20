use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use srlab_core::theorems::Variants;
use srlab_core::SuiteConfig;

fn srlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srlab")).current_dir(dir).args(args).output().expect("binary runs")
}

fn calibrated(dir: &Path) {
    let cfg = SuiteConfig { variants: Some(Variants::CALIBRATED), ..SuiteConfig::default() };
    cfg.save(&dir.join("srlab.json")).unwrap();
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("srlab-out/report.json")).unwrap()).unwrap()
}

#[test]
fn theorem_commands_refuse_to_run_uncalibrated() {
    let dir = tempfile::tempdir().unwrap();
    let out = srlab(dir.path(), &["verify", "series"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("calibrate"));
    assert!(!dir.path().join("srlab-out").exists());
}

#[test]
fn malformed_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("srlab.json"), r#"{"seed": "one"}"#).unwrap();
    let out = srlab(dir.path(), &["all"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config parse error"));
}

#[test]
fn bad_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    calibrated(dir.path());
    assert_eq!(srlab(dir.path(), &["verify", "nope"]).status.code(), Some(2));
    assert_eq!(srlab(dir.path(), &["all", "--resolution", "ultra"]).status.code(), Some(2));
    assert_eq!(srlab(dir.path(), &["verify", "series", "--point", "exterior"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    calibrated(dir.path());
    let out = srlab(dir.path(), &["verify", "series", "--resolution", "low", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path());
    for key in ["identity", "params", "residuals", "resolutions", "variants", "pass"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["seed"], 7);
    assert_eq!(r["pass"], true);
    assert_eq!(r["reports"][0]["seed"], 7);
    assert_eq!(r["variants"]["bp-assembly"], "stokes-consistent");

    let csv = fs::read_to_string(dir.path().join("srlab-out/samples/series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("test-id,p0,p1,p2,p3,residual-norm"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), r["residuals"].as_array().unwrap().len());
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields.len(), 6);
    assert!(fields[1..].iter().all(|x| x.parse::<f64>().is_ok()));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SuiteConfig { variants: Some(Variants::CALIBRATED), seed: 11, ..SuiteConfig::default() };
    cfg.save(&dir.path().join("alt.json")).unwrap();
    let out = srlab(dir.path(), &["--config", "alt.json", "verify", "representation", "--out", "elsewhere"]);
    assert!(out.status.success());
    let r: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("elsewhere/report.json")).unwrap()).unwrap();
    assert_eq!(r["seed"], 11);
    let out =
        srlab(dir.path(), &["--config", "alt.json", "--out", "elsewhere", "--seed", "12", "verify", "representation"]);
    assert!(out.status.success());
    let r: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("elsewhere/report.json")).unwrap()).unwrap();
    assert_eq!(r["seed"], 12);
}

#[test]
fn failing_checks_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = SuiteConfig { variants: Some(Variants::CALIBRATED), ..SuiteConfig::default() };
    cfg.tolerances.series_round_trip = 1e-30;
    cfg.save(&dir.path().join("srlab.json")).unwrap();
    let out = srlab(dir.path(), &["verify", "series", "--resolution", "low"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(dir.path())["pass"], false);
}

#[test]
fn exterior_points_only() {
    let dir = tempfile::tempdir().unwrap();
    calibrated(dir.path());
    let out = srlab(dir.path(), &["verify", "cauchy-global", "--point", "exterior", "--resolution", "low"]);
    // The low preset does not meet the doubling tolerance here, so only the point set is checked.
    assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    let ids: Vec<&str> = r["residuals"].as_array().unwrap().iter().map(|x| x["test_id"].as_str().unwrap()).collect();
    assert!(ids.iter().any(|id| id.contains("/exterior-")));
    assert!(!ids.iter().any(|id| id.contains("/interior-")));
}

#[test]
fn calibrate_stores_variants_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let out = srlab(dir.path(), &["calibrate"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let cfg = SuiteConfig::load(&dir.path().join("srlab.json")).unwrap();
    assert_eq!(cfg.variants, Some(Variants::CALIBRATED));
    let first = fs::read_to_string(dir.path().join("srlab.json")).unwrap();

    // A second run compares against the stored calibration.
    let out = srlab(dir.path(), &["calibrate"]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("srlab.json")).unwrap(), first);
    let r = report(dir.path());
    assert_eq!(r["reports"][0]["params"]["stored-calibration"], "identical");
    let ratios =
        r["residuals"].as_array().unwrap().iter().filter(|x| x["test_id"].as_str().unwrap().contains("ratio/"));
    assert!(ratios.clone().count() >= 7);
    // An infinite ratio serializes as null.
    assert!(ratios.into_iter().all(|x| x["norm"].as_f64().map_or(true, |r| r >= 100.0)));
}
