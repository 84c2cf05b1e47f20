//! Quaternion algebra and structural sets.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthonormality tolerance for structural sets.
pub const ORTHO_TOL: f64 = 1e-12;

/// A real quaternion `q0 + q1 e1 + q2 e2 + q3 e3` with `e1e2 = e3`, `e2e3 = e1`, `e3e1 = e2`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub const fn real(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    pub const fn vector(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    /// Standard basis element `e_k`, `k ∈ 0..4`.
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        c.into()
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// Vector part `𝐪`.
    pub fn vec(self) -> Self {
        Self::new(0.0, self.q1, self.q2, self.q3)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn vec_norm(self) -> f64 {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    /// Euclidean inner product `⟨q, r⟩ = Σ q_k r_k = ½(q r̄ + r q̄)`.
    pub fn dot(self, r: Self) -> f64 {
        self.q0 * r.q0 + self.q1 * r.q1 + self.q2 * r.q2 + self.q3 * r.q3
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Integer power by repeated multiplication.
    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| acc * self)
    }

    /// Quaternion exponential `e^{q0}(cos‖𝐪‖ + 𝐪/‖𝐪‖ sin‖𝐪‖)`.
    pub fn exp(self) -> Self {
        let r = self.vec_norm();
        let s = if r > 0.0 { r.sin() / r } else { 1.0 };
        let e = self.q0.exp();
        Self::new(e * r.cos(), e * s * self.q1, e * s * self.q2, e * s * self.q3)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self - other).to_array().iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}e1 + {}e2 + {}e3)", self.q0, self.q1, self.q2, self.q3)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.q0 + r.q0, self.q1 + r.q1, self.q2 + r.q2, self.q3 + r.q3)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.q0 - r.q0, self.q1 - r.q1, self.q2 - r.q2, self.q3 - r.q3)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (r.q0, r.q1, r.q2, r.q3);
        Self::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, r: Self) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// Hamilton product.
pub fn mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn inverse(q: Quaternion) -> Result<Quaternion> {
    q.inverse()
}

/// An orthonormal basis `ψ = (ψ0, ψ1, ψ2, ψ3)` of ℍ with `ψ0 = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructuralSet {
    psi: [Quaternion; 4],
}

impl StructuralSet {
    /// `ψ_st = {1, e1, e2, e3}`.
    pub const STANDARD: Self = Self { psi: [Quaternion::ONE, Quaternion::E1, Quaternion::E2, Quaternion::E3] };

    pub fn new(psi: [Quaternion; 4]) -> Result<Self> {
        validate_structural_set(psi)
    }

    pub fn psi(&self, k: usize) -> Quaternion {
        self.psi[k]
    }

    pub fn elements(&self) -> [Quaternion; 4] {
        self.psi
    }

    /// `±1`, the sign of ψ0.
    pub fn psi0(&self) -> f64 {
        self.psi[0].q0
    }

    /// Coordinates `x_k = ⟨x, ψ_k⟩`.
    pub fn coords(&self, x: Quaternion) -> [f64; 4] {
        std::array::from_fn(|k| x.dot(self.psi[k]))
    }

    pub fn compose(&self, c: [f64; 4]) -> Quaternion {
        (0..4).map(|k| self.psi[k] * c[k]).sum()
    }

    /// `⟨x, y⟩_ψ = Σ x_k y_k` in ψ-coordinates.
    pub fn inner(&self, x: Quaternion, y: Quaternion) -> f64 {
        let (a, b) = (self.coords(x), self.coords(y));
        a.iter().zip(&b).map(|(p, q)| p * q).sum()
    }

    /// `𝐱_ψ = Σ_{k≥1} x_k ψ_k`.
    pub fn vec_part(&self, x: Quaternion) -> Quaternion {
        let c = self.coords(x);
        (1..4).map(|k| self.psi[k] * c[k]).sum()
    }

    /// `x_0 = ⟨x, ψ0⟩`.
    pub fn real_coord(&self, x: Quaternion) -> f64 {
        x.dot(self.psi[0])
    }
}

impl Default for StructuralSet {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl<'de> Deserialize<'de> for StructuralSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let psi = <[Quaternion; 4]>::deserialize(d)?;
        validate_structural_set(psi).map_err(serde::de::Error::custom)
    }
}

pub fn validate_structural_set(psi: [Quaternion; 4]) -> Result<StructuralSet> {
    let mut defect = 0.0f64;
    for k in 0..4 {
        for m in 0..4 {
            let target = if k == m { 1.0 } else { 0.0 };
            defect = defect.max((psi[k].dot(psi[m]) - target).abs());
        }
    }
    if defect > ORTHO_TOL {
        return Err(Error::NotOrthonormal { defect });
    }
    let p0 = psi[0];
    if p0.vec_norm() > ORTHO_TOL || (p0.q0.abs() - 1.0).abs() > ORTHO_TOL {
        return Err(Error::Psi0NotUnitReal { psi0: p0.to_array() });
    }
    Ok(StructuralSet { psi })
}

pub fn psi_coords(x: Quaternion, psi: &StructuralSet) -> [f64; 4] {
    psi.coords(x)
}

pub fn inner_psi(x: Quaternion, y: Quaternion, psi: &StructuralSet) -> f64 {
    psi.inner(x, y)
}
