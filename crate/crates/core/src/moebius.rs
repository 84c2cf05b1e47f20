//! Quaternionic Möbius maps `T(x) = (ax + b)(cx + d)⁻¹` under the reality constraints
//! `a c̄`, `(b − ac⁻¹d) c̄`, `d·conj(b − ac⁻¹d)` ∈ ℝ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, MoebiusConstraint, Result};
use crate::quat::Quaternion;

/// Threshold on `‖cq + d‖` below which a point counts as a pole.
pub const POLE_TOL: f64 = 1e-13;

const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Quaternion; 4]", into = "[Quaternion; 4]")]
pub struct MoebiusMap {
    a: Quaternion,
    b: Quaternion,
    c: Quaternion,
    d: Quaternion,
    c_inv: Quaternion,
    /// `ℓ = (b − ac⁻¹d)⁻¹`
    ell: Quaternion,
    /// `m = ℓa`
    m: Quaternion,
    /// `p = c⁻¹d`
    p: Quaternion,
}

fn is_real(q: Quaternion) -> bool {
    q.vec_norm() <= REAL_TOL * q.norm().max(1.0)
}

pub fn moebius_validate(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Result<MoebiusMap> {
    let c_inv = c.inverse().map_err(|_| Error::CNotInvertible)?;
    let delta = b - a * c_inv * d;
    let ell = delta.inverse().map_err(|_| Error::DegenerateMap)?;
    if !is_real(a * c.conj()) {
        return Err(Error::ConstraintViolated(MoebiusConstraint::AConjC));
    }
    if !is_real(delta * c.conj()) {
        return Err(Error::ConstraintViolated(MoebiusConstraint::DeltaConjC));
    }
    if !is_real(d * delta.conj()) {
        return Err(Error::ConstraintViolated(MoebiusConstraint::DConjDelta));
    }
    Ok(MoebiusMap { a, b, c, d, c_inv, ell, m: ell * a, p: c_inv * d })
}

impl TryFrom<[Quaternion; 4]> for MoebiusMap {
    type Error = Error;
    fn try_from(c: [Quaternion; 4]) -> Result<Self> {
        moebius_validate(c[0], c[1], c[2], c[3])
    }
}

impl From<MoebiusMap> for [Quaternion; 4] {
    fn from(t: MoebiusMap) -> Self {
        [t.a, t.b, t.c, t.d]
    }
}

impl MoebiusMap {
    /// Real-coefficient map.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        moebius_validate(a.into(), b.into(), c.into(), d.into())
    }

    pub fn coefficients(&self) -> [Quaternion; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn ell(&self) -> Quaternion {
        self.ell
    }

    pub fn m(&self) -> Quaternion {
        self.m
    }

    pub fn p(&self) -> Quaternion {
        self.p
    }

    pub fn c(&self) -> Quaternion {
        self.c
    }

    /// `ac⁻¹`, the image of ∞.
    pub fn pole_image(&self) -> Quaternion {
        self.a * self.c_inv
    }

    /// All four coefficients real.
    pub fn is_real(&self) -> bool {
        self.coefficients().iter().all(|q| q.vec_norm() == 0.0)
    }

    /// `ad − bc` for a real-coefficient map.
    pub fn real_determinant(&self) -> Option<f64> {
        self.is_real().then_some(self.a.q0 * self.d.q0 - self.b.q0 * self.c.q0)
    }

    pub fn apply(&self, q: Quaternion) -> Result<Quaternion> {
        let den = self.c * q + self.d;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleHit);
        }
        Ok((self.a * q + self.b) * den.inverse()?)
    }

    /// `T⁻¹(y) = (ℓyc − m)⁻¹ − p`.
    pub fn apply_inverse(&self, y: Quaternion) -> Result<Quaternion> {
        let w = self.ell * y * self.c - self.m;
        if w.norm() < POLE_TOL {
            return Err(Error::PoleHit);
        }
        Ok(w.inverse()? - self.p)
    }
}

pub fn moebius_apply(t: &MoebiusMap, q: Quaternion) -> Result<Quaternion> {
    t.apply(q)
}
