//! `report.json` and `samples/*.csv`.

use std::fs;
use std::path::Path;

use serde_json::Value;
use srlab_core::theorems::SuiteReport;

/// Published schema for `report.json`.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("report does not match the published schema: {0}")]
    Schema(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io { path: path.display().to_string(), source }
}

pub fn validate(report: &Value) -> Result<(), OutputError> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is valid JSON");
    let validator = jsonschema::validator_for(&schema).map_err(|e| OutputError::Schema(e.to_string()))?;
    let errors: Vec<String> =
        validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(OutputError::Schema(errors.join("; ")))
    }
}

/// Validate, then write `report.json` and one CSV per target.
pub fn write_outputs(dir: &Path, report: &SuiteReport) -> Result<(), OutputError> {
    let value = serde_json::to_value(report).expect("report serializes");
    validate(&value)?;
    let samples = dir.join("samples");
    fs::create_dir_all(&samples).map_err(io_err(&samples))?;
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(&value).expect("report serializes") + "\n";
    fs::write(&path, text).map_err(io_err(&path))?;

    for r in &report.reports {
        let path = samples.join(format!("{}.csv", r.identity));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["test-id", "p0", "p1", "p2", "p3", "residual-norm"])?;
        for x in &r.residuals {
            let [a, b, c, d] = x.point;
            w.write_record([
                x.test_id.clone(),
                a.to_string(),
                b.to_string(),
                c.to_string(),
                d.to_string(),
                format!("{:e}", x.norm),
            ])?;
        }
        w.flush().map_err(io_err(&path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use srlab_core::theorems::{Residual, Variants, VerificationReport};

    fn sample() -> Value {
        let mut r = VerificationReport::exact("x", 3);
        r.push(Residual::below("a", [0.0, 1.0, 2.0, 3.0], 1e-13, 1e-12));
        r.push(Residual::above("b", [0.0; 4], f64::INFINITY, 1e-2));
        let r = r.with_variants(Variants::CALIBRATED).finish();
        serde_json::to_value(SuiteReport::merge("x", json!({}), 3, vec![r])).unwrap()
    }

    #[test]
    fn reports_match_the_schema() {
        validate(&sample()).unwrap();
    }

    #[test]
    fn schema_rejects_malformed_reports() {
        let mut v = sample();
        v.as_object_mut().unwrap().remove("pass");
        assert!(matches!(validate(&v), Err(OutputError::Schema(_))));
        let mut v = sample();
        v["residuals"][0]["point"] = json!([0.0, 1.0]);
        assert!(validate(&v).is_err());
        let mut v = sample();
        v["variants"]["extra"] = json!("x");
        assert!(validate(&v).is_err());
    }
}
