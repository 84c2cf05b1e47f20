//! Verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Variants;

/// Which side of the tolerance a residual must land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Identity holds: residual must be below the tolerance.
    Below,
    /// Witness of failure: residual must exceed the tolerance.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub test_id: String,
    pub point: [f64; 4],
    pub norm: f64,
    pub tolerance: f64,
    pub bound: Bound,
}

impl Residual {
    pub fn below(test_id: impl Into<String>, point: [f64; 4], norm: f64, tolerance: f64) -> Self {
        Self { test_id: test_id.into(), point, norm, tolerance, bound: Bound::Below }
    }

    pub fn above(test_id: impl Into<String>, point: [f64; 4], norm: f64, tolerance: f64) -> Self {
        Self { test_id: test_id.into(), point, norm, tolerance, bound: Bound::Above }
    }

    pub fn ok(&self) -> bool {
        match self.bound {
            Bound::Below => self.norm < self.tolerance,
            Bound::Above => self.norm > self.tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceKind {
    /// Quadrature rerun at doubled node counts.
    Doubling,
    /// Finite differences rerun at `h/2`.
    StepHalving,
}

/// Largest change of any residual under refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub kind: ConvergenceKind,
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Convergence {
    pub fn new(kind: ConvergenceKind, delta: f64, tolerance: f64) -> Self {
        Self { kind, delta, tolerance, passed: delta.is_finite() && delta < tolerance }
    }
}

/// Outcome of one identity check.
///
/// A discretized check (quadrature or finite differences) only passes together with a
/// passing convergence check; exact algebraic checks carry none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Value,
    pub residuals: Vec<Residual>,
    pub resolutions: Value,
    pub variants: Option<Variants>,
    pub convergence: Option<Convergence>,
    pub discretized: bool,
    pub seed: u64,
    pub pass: bool,
}

impl VerificationReport {
    /// A report for a check free of discretization error.
    pub fn exact(identity: impl Into<String>, seed: u64) -> Self {
        Self {
            identity: identity.into(),
            params: Value::Null,
            residuals: Vec::new(),
            resolutions: Value::Null,
            variants: None,
            convergence: None,
            discretized: false,
            seed,
            pass: false,
        }
    }

    /// A report for a quadrature or finite-difference check.
    pub fn discretized(identity: impl Into<String>, seed: u64) -> Self {
        Self { discretized: true, ..Self::exact(identity, seed) }
    }

    pub fn with_params(mut self, params: Value) -> Self {
        self.params = params;
        self
    }

    pub fn with_resolutions(mut self, resolutions: Value) -> Self {
        self.resolutions = resolutions;
        self
    }

    pub fn with_variants(mut self, variants: Variants) -> Self {
        self.variants = Some(variants);
        self
    }

    pub fn with_convergence(mut self, c: Convergence) -> Self {
        self.convergence = Some(c);
        self
    }

    pub fn push(&mut self, r: Residual) {
        self.residuals.push(r);
    }

    /// Recompute `pass`.
    pub fn finish(mut self) -> Self {
        let converged = match (self.discretized, self.convergence) {
            (false, _) => true,
            (true, Some(c)) => c.passed,
            (true, None) => false,
        };
        self.pass = converged && !self.residuals.is_empty() && self.residuals.iter().all(Residual::ok);
        self
    }

    /// Largest residual norm among test ids starting with `prefix`.
    pub fn max_norm(&self, prefix: &str) -> f64 {
        self.residuals.iter().filter(|r| r.test_id.starts_with(prefix)).fold(0.0, |m, r| m.max(r.norm))
    }

    /// Smallest residual norm among test ids starting with `prefix`.
    pub fn min_norm(&self, prefix: &str) -> f64 {
        self.residuals.iter().filter(|r| r.test_id.starts_with(prefix)).fold(f64::INFINITY, |m, r| m.min(r.norm))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.ok())
    }
}

/// Several reports merged in identity order. Top-level fields follow the single-report
/// layout; `residuals` is the concatenation with test ids prefixed by identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub identity: String,
    pub params: Value,
    pub residuals: Vec<Residual>,
    pub resolutions: Value,
    pub variants: Option<Variants>,
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn merge(identity: impl Into<String>, params: Value, seed: u64, mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| a.identity.cmp(&b.identity));
        let residuals = reports
            .iter()
            .flat_map(|r| {
                r.residuals
                    .iter()
                    .map(move |x| Residual { test_id: format!("{}/{}", r.identity, x.test_id), ..x.clone() })
            })
            .collect();
        let resolutions = Value::Object(reports.iter().map(|r| (r.identity.clone(), r.resolutions.clone())).collect());
        let variants = reports.iter().find_map(|r| r.variants);
        let pass = !reports.is_empty() && reports.iter().all(|r| r.pass);
        Self { identity: identity.into(), params, residuals, resolutions, variants, seed, pass, reports }
    }
}
