//! Executable statements of the integral and algebraic identities.

pub mod bp;
pub mod calibration;
pub mod cauchy;
pub mod covariance;
pub mod morera;
pub mod report;
pub mod representation;

use serde::{Deserialize, Serialize};

use crate::field::{FieldSpec, Term};
use crate::kernels::KernelBracket;

pub use bp::BpAssembly;
pub use covariance::{CovarianceNormalization, GammaBracket};
pub use report::{Bound, Convergence, ConvergenceKind, Residual, SuiteReport, VerificationReport};

/// Sign of the `dx̂_k` minors on the boundary rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub const ALL: [Self; 2] = [Self::Positive, Self::Negative];

    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

/// Sign of the exponent in `e^{±⟨ζ,v⟩}` inside slice contour integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpSign {
    Plus,
    Minus,
}

impl ExpSign {
    pub const ALL: [Self; 2] = [Self::Plus, Self::Minus];

    pub fn sign(self) -> f64 {
        match self {
            ExpSign::Plus => 1.0,
            ExpSign::Minus => -1.0,
        }
    }
}

/// Which side of the integrand the slice differential `dζ_i = −dζ i` multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferentialSide {
    /// `∮ dζ_i e^{..} h(ζ)`
    Left,
    /// `∮ h(ζ) e^{..} dζ_i`
    Right,
}

impl DifferentialSide {
    pub const ALL: [Self; 2] = [Self::Left, Self::Right];
}

/// Readings of the ambiguous formulas, chosen by `calibrate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Variants {
    pub kernel_bracket: KernelBracket,
    pub orientation: Orientation,
    pub bp_assembly: BpAssembly,
    pub gamma_bracket: GammaBracket,
    pub covariance_normalization: CovarianceNormalization,
    pub morera_sign: ExpSign,
    pub differential_side: DifferentialSide,
}

impl Variants {
    /// The selection `calibrate` arrives at.
    pub const CALIBRATED: Self = Self {
        kernel_bracket: KernelBracket::Verbatim,
        orientation: Orientation::Positive,
        bp_assembly: BpAssembly::StokesConsistent,
        gamma_bracket: GammaBracket::PreimageVectorPart,
        covariance_normalization: CovarianceNormalization::MapJacobian,
        morera_sign: ExpSign::Plus,
        differential_side: DifferentialSide::Left,
    };
}

fn poly(components: [&[(f64, [u32; 4])]; 4]) -> FieldSpec {
    FieldSpec::Polynomial {
        components: components.map(|c| c.iter().map(|&(coef, powers)| Term { coef, powers }).collect()),
    }
}

/// A quadratic field with every component populated; not a member of any SR_v.
pub fn reference_f() -> FieldSpec {
    poly([
        &[(1.0, [0, 0, 0, 0]), (1.0, [1, 1, 0, 0])],
        &[(1.0, [0, 0, 2, 0]), (-1.0, [0, 0, 0, 1])],
        &[(1.0, [1, 0, 0, 0]), (1.0, [0, 1, 0, 1])],
        &[(0.5, [0, 2, 0, 0]), (1.0, [0, 0, 1, 0])],
    ])
}

pub fn reference_g() -> FieldSpec {
    poly([
        &[(1.0, [0, 1, 0, 0]), (-1.0, [0, 0, 1, 1])],
        &[(1.0, [0, 0, 0, 0]), (1.0, [2, 0, 0, 0])],
        &[(1.0, [0, 1, 0, 1])],
        &[(1.0, [0, 0, 1, 0]), (-1.0, [1, 0, 0, 0])],
    ])
}
