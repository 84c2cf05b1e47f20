//! Reproducing kernels `A`, `B`, `C`, their exponentially weighted forms and the boundary
//! 3-form `ν`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SingularLocus};
use crate::field::exp_checked;
use crate::quat::{Quaternion, StructuralSet};

/// Points closer than this to a singular locus are rejected.
pub const SINGULAR_TOL: f64 = 1e-8;

/// Global sign of the `dx̂_k` minors.
///
/// With the outward hyperspherical parametrization used by the boundary rule
/// (`det[n, ∂χ, ∂θ, ∂φ] > 0`) and `dx̂_k = (−1)^k·minor_k`, `+1` is the sign under which the
/// Borel–Pompeiu interior case reproduces `f + g`; `calibrate` re-derives it.
pub const FORM_ORIENTATION: f64 = 1.0;

/// Reading of the `(x0 − t)` factor in `B` and `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelBracket {
    /// Scalar `x0` minus the full quaternion `t`.
    Verbatim,
    /// Scalar `x0 − t0`.
    T0Corrected,
}

impl KernelBracket {
    pub const ALL: [Self; 2] = [Self::Verbatim, Self::T0Corrected];
}

/// Validated kernel arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: Quaternion,
    pub t: Quaternion,
    pub psi: StructuralSet,
    pub weight: Quaternion,
}

impl KernelPoint {
    pub fn new(x: Quaternion, t: Quaternion, psi: StructuralSet, weight: Quaternion) -> Result<Self> {
        check_point(&psi, x, t)?;
        Ok(Self { x, t, psi, weight })
    }

    pub fn standard(x: Quaternion, t: Quaternion, weight: Quaternion) -> Result<Self> {
        Self::new(x, t, StructuralSet::STANDARD, weight)
    }

    /// `e^{⟨t − x, w⟩_ψ}`.
    pub fn weight_factor(&self) -> Result<f64> {
        exp_checked(self.psi.inner(self.t - self.x, self.weight))
    }
}

fn check_point(psi: &StructuralSet, x: Quaternion, t: Quaternion) -> Result<()> {
    if psi.vec_part(x).norm() < SINGULAR_TOL {
        return Err(Error::SingularPoint(SingularLocus::XOnRealAxis));
    }
    if psi.vec_part(t).norm() < SINGULAR_TOL {
        return Err(Error::SingularPoint(SingularLocus::TOnRealAxis));
    }
    if (t - x).norm() < SINGULAR_TOL {
        return Err(Error::SingularPoint(SingularLocus::Diagonal));
    }
    Ok(())
}

/// Unweighted `A(x,t) = 𝐱 conj(t−x) 𝐭 / (2π² ‖𝐱‖²‖t−x‖⁴‖𝐭‖²)`.
pub fn a_raw(psi: &StructuralSet, x: Quaternion, t: Quaternion) -> Result<Quaternion> {
    check_point(psi, x, t)?;
    Ok(a_unchecked(psi, x, t))
}

pub(crate) fn a_unchecked(psi: &StructuralSet, x: Quaternion, t: Quaternion) -> Quaternion {
    let (xv, tv, d) = (psi.vec_part(x), psi.vec_part(t), t - x);
    let d2 = d.norm_sq();
    xv * d.conj() * tv / (2.0 * PI * PI * xv.norm_sq() * d2 * d2 * tv.norm_sq())
}

fn bracket(psi: &StructuralSet, x: Quaternion, t: Quaternion, variant: KernelBracket) -> Quaternion {
    let (xv, tv) = (psi.vec_part(x), psi.vec_part(t));
    let x0 = psi.real_coord(x);
    let lead = match variant {
        KernelBracket::Verbatim => (Quaternion::real(x0) - t) * tv,
        KernelBracket::T0Corrected => tv * (x0 - psi.real_coord(t)),
    };
    lead - Quaternion::real(psi.inner(tv, xv))
}

/// Unweighted `B(t,x)`; `x` carries the left factor `𝐱/‖𝐱‖²`.
pub fn b_raw(psi: &StructuralSet, x: Quaternion, t: Quaternion, variant: KernelBracket) -> Result<Quaternion> {
    check_point(psi, x, t)?;
    Ok(b_unchecked(psi, x, t, variant))
}

pub(crate) fn b_unchecked(psi: &StructuralSet, x: Quaternion, t: Quaternion, variant: KernelBracket) -> Quaternion {
    let xv = psi.vec_part(x);
    let d = t - x;
    let d2 = d.norm_sq();
    let first = (t + x.conj() * 3.0 - t.conj() * 4.0) / (d2 * d2);
    let second = d.conj() * bracket(psi, x, t, variant) * 4.0 / (d2 * d2 * d2);
    xv / xv.norm_sq() * (first + second) / (PI * PI)
}

/// Unweighted `C(x,t)`; `x` carries the right factor `𝐱/‖𝐱‖²`.
pub fn c_raw(psi: &StructuralSet, x: Quaternion, t: Quaternion, variant: KernelBracket) -> Result<Quaternion> {
    check_point(psi, x, t)?;
    Ok(c_unchecked(psi, x, t, variant))
}

pub(crate) fn c_unchecked(psi: &StructuralSet, x: Quaternion, t: Quaternion, variant: KernelBracket) -> Quaternion {
    let xv = psi.vec_part(x);
    let d = t - x;
    let d2 = d.norm_sq();
    let first = (t + x.conj() * 3.0 - t.conj() * 4.0) / (d2 * d2);
    let second = bracket(psi, x, t, variant) * d.conj() * 4.0 / (d2 * d2 * d2);
    (first + second) * (xv / xv.norm_sq()) / (PI * PI)
}

/// `𝒜(x,t,u) = e^{⟨t−x,u⟩} A(x,t)`.
pub fn kernel_a(kp: &KernelPoint) -> Result<Quaternion> {
    Ok(a_unchecked(&kp.psi, kp.x, kp.t) * kp.weight_factor()?)
}

/// `ℬ(t,x,v) = e^{⟨t−x,v⟩} B(t,x)`.
pub fn kernel_b(kp: &KernelPoint, variant: KernelBracket) -> Result<Quaternion> {
    Ok(b_unchecked(&kp.psi, kp.x, kp.t, variant) * kp.weight_factor()?)
}

/// `𝒞(x,t,u) = e^{⟨t−x,u⟩} C(x,t)`.
pub fn kernel_c(kp: &KernelPoint, variant: KernelBracket) -> Result<Quaternion> {
    Ok(c_unchecked(&kp.psi, kp.x, kp.t, variant) * kp.weight_factor()?)
}

/// A point on a parametrized hypersurface with its three tangent vectors
/// (Jacobian columns per unit parameter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePatch {
    pub point: Quaternion,
    pub tangents: [Quaternion; 3],
}

impl SurfacePatch {
    /// `(dx̂_0, …, dx̂_3)` in ψ-coordinates with the given orientation sign.
    pub fn hat_forms(&self, psi: &StructuralSet, orientation: f64) -> [f64; 4] {
        let cols = self.tangents.map(|t| psi.coords(t));
        std::array::from_fn(|k| {
            let rows: Vec<usize> = (0..4).filter(|&r| r != k).collect();
            let m = |i: usize, j: usize| cols[j][rows[i]];
            let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            orientation * sign * det
        })
    }

    /// Scalar 3-volume element `‖(dx̂_k)‖`.
    pub fn area_element(&self) -> f64 {
        self.hat_forms(&StructuralSet::STANDARD, 1.0).iter().map(|h| h * h).sum::<f64>().sqrt()
    }

    fn check(&self, hats: &[f64; 4]) -> Result<()> {
        let scale: f64 = self.tangents.iter().map(|t| t.norm()).product();
        let size = hats.iter().map(|h| h * h).sum::<f64>().sqrt();
        if !(size > 1e-12 * scale) || scale == 0.0 {
            return Err(Error::DegenerateTangents);
        }
        Ok(())
    }
}

/// `σ = Σ ψ_k dx̂_k`.
pub fn sigma_form(psi: &StructuralSet, patch: &SurfacePatch, orientation: f64) -> Result<Quaternion> {
    let h = patch.hat_forms(psi, orientation);
    patch.check(&h)?;
    Ok((0..4).map(|k| psi.psi(k) * h[k]).sum())
}

/// `ν = 2ψ0 dx̂_0 + 2(𝐱/‖𝐱‖²) Σ_{k≥1} x_k dx̂_k`.
pub fn nu_form_oriented(psi: &StructuralSet, patch: &SurfacePatch, orientation: f64) -> Result<Quaternion> {
    let xv = psi.vec_part(patch.point);
    let n2 = xv.norm_sq();
    if n2.sqrt() < SINGULAR_TOL {
        return Err(Error::SingularPoint(SingularLocus::XOnRealAxis));
    }
    let h = patch.hat_forms(psi, orientation);
    patch.check(&h)?;
    let c = psi.coords(patch.point);
    let s: f64 = (1..4).map(|k| c[k] * h[k]).sum();
    let nu = psi.psi(0) * (2.0 * h[0]) + xv * (2.0 * s / n2);
    debug_assert!({
        let sigma = (0..4).map(|k| psi.psi(k) * h[k]).sum::<Quaternion>();
        let u = xv / n2.sqrt();
        (sigma - u * sigma * u).max_abs_diff(nu) <= 1e-10 * (1.0 + nu.norm())
    });
    Ok(nu)
}

pub fn nu_form(psi: &StructuralSet, patch: &SurfacePatch) -> Result<Quaternion> {
    nu_form_oriented(psi, patch, FORM_ORIENTATION)
}
