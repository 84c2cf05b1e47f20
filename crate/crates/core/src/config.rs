//! Suite configuration: a single JSON file; command-line flags override it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{Resolution, ResolutionLevel};
use crate::theorems::calibration::Calibration;
use crate::theorems::Variants;

/// Tolerance ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Tolerances {
    pub algebraic: f64,
    pub finite_difference: f64,
    pub contour: f64,
    pub quadrature: f64,
    /// Allowed change of a 3D/4D quadrature result under doubling.
    pub quadrature_doubling: f64,
    pub member: f64,
    pub non_member: f64,
    pub morera_member: f64,
    pub series_round_trip: f64,
    /// Representation formula and `P∘Q` / `Q∘P` round trips.
    pub representation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-12,
            finite_difference: 5e-6,
            contour: 1e-9,
            quadrature: 2e-2,
            quadrature_doubling: 5e-3,
            member: 1e-6,
            non_member: 1e-2,
            morera_member: 1e-8,
            series_round_trip: 1e-8,
            representation: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct SuiteConfig {
    pub tolerances: Tolerances,
    pub resolution: ResolutionLevel,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Set by `calibrate`; theorem suites refuse to run without it.
    pub variants: Option<Variants>,
    pub calibration: Option<Calibration>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            resolution: ResolutionLevel::Default,
            seed: 1,
            out_dir: PathBuf::from("srlab-out"),
            variants: None,
            calibration: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Read `path`; a missing file yields the defaults.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(s) => Self::from_json(&s),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn require_variants(&self) -> Result<Variants> {
        self.variants.ok_or(Error::Uncalibrated)
    }

    pub fn node_counts(&self) -> Resolution {
        Resolution::preset(self.resolution)
    }
}
