use thiserror::Error;

/// Which of the three reality constraints on Möbius coefficients failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoebiusConstraint {
    /// `a·conj(c)`
    AConjC,
    /// `(b − ac⁻¹d)·conj(c)`
    DeltaConjC,
    /// `d·conj(b − ac⁻¹d)`
    DConjDelta,
}

impl std::fmt::Display for MoebiusConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MoebiusConstraint::AConjC => "a·conj(c)",
            MoebiusConstraint::DeltaConjC => "(b−ac⁻¹d)·conj(c)",
            MoebiusConstraint::DConjDelta => "d·conj(b−ac⁻¹d)",
        };
        f.write_str(s)
    }
}

/// Singular loci of the reproducing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularLocus {
    /// Vector part of `x` vanishes.
    XOnRealAxis,
    /// Vector part of `t` vanishes.
    TOnRealAxis,
    /// `x = t`.
    Diagonal,
}

impl std::fmt::Display for SingularLocus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SingularLocus::XOnRealAxis => "x on the real axis",
            SingularLocus::TOnRealAxis => "t on the real axis",
            SingularLocus::Diagonal => "x = t",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a zero quaternion")]
    ZeroDivisor,
    #[error("structural set is not orthonormal (Gram defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("structural set has psi0 = {psi0:?}, expected +1 or -1")]
    Psi0NotUnitReal { psi0: [f64; 4] },
    #[error("point lies on the real axis; its slice unit is undefined")]
    RealAxisPoint,
    #[error("invalid slice point: {0}")]
    InvalidSlicePoint(&'static str),
    #[error("Möbius reality constraint violated: {0} is not real")]
    ConstraintViolated(MoebiusConstraint),
    #[error("Möbius coefficient c is not invertible")]
    CNotInvertible,
    #[error("degenerate Möbius map: b − ac⁻¹d = 0")]
    DegenerateMap,
    #[error("Möbius map has a pole at this point")]
    PoleHit,
    #[error("evaluation point {point:?} is outside the field's safe box")]
    OutOfDomain { point: [f64; 4] },
    #[error("exponential weight overflow risk: |<q,v>| = {exponent:.3e} > 500")]
    OverflowRisk { exponent: f64 },
    #[error("kernel evaluated at a singular point: {0}")]
    SingularPoint(SingularLocus),
    #[error("surface tangents are linearly dependent")]
    DegenerateTangents,
    #[error("integrand returned a non-finite value")]
    NonFiniteIntegrand,
    #[error("resolution too low: doubling moved the result by {delta:.3e} (tolerance {tol:.3e})")]
    ResolutionTooLow { delta: f64, tol: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("point is not inside the contour disc")]
    QNotInDisc,
    #[error("slice units are not orthogonal unit imaginaries")]
    NotOrthogonal,
    #[error("series evaluation point outside the unit ball")]
    OutsideBall,
    #[error("c_vk is undefined at q = 0")]
    ZeroPoint,
    #[error("series weights differ")]
    WeightMismatch,
    #[error("series exponential tail did not converge within 32 terms")]
    TailNotConverged,
    #[error("domain precondition failed: {0}")]
    DomainViolation(String),
    #[error("variants are not calibrated; run `srlab calibrate` first")]
    Uncalibrated,
    #[error("config parse error: {0}")]
    ConfigParse(String),
    #[error("unknown field: {0}")]
    UnknownField(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
