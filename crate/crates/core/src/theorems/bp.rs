//! Borel–Pompeiu and global Cauchy formulas for `G_v` / `G_{r,u}` on a ball.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{exp_checked, Field};
use crate::kernels::{a_raw, b_raw, c_raw, nu_form_oriented, KernelBracket};
use crate::operators::{grv_from_jet, gv_from_jet, jet, DEFAULT_H};
use crate::quadrature::{boundary_integrate, volume_integrate, BoundarySpec, Excision, Resolution, VolumeSpec};
use crate::quat::{Quaternion, StructuralSet};
use crate::slice::DomainSpec;

use super::Orientation;

/// How the kernels are placed in the boundary and volume terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BpAssembly {
    /// `‖𝛕‖²[g ν 𝒜(x,τ) − 𝒜(τ,x) ν f]`, `[ℬ f − g 𝒞]`, `2[𝒜(y,x) G_v f − G_{r,u}g 𝒜(x,y)]`.
    Printed,
    /// `‖𝛕‖²[g ν A(τ,x) − A(x,τ) ν f]`, `[B f + g C]`, `2[A(x,y) G_v f − G_{r,u}g A(y,x)]`:
    /// the kernel slots are swapped and the `C` term changes sign.
    StokesConsistent,
}

impl BpAssembly {
    pub const ALL: [Self; 2] = [Self::Printed, Self::StokesConsistent];
}

/// Node counts and excision radius for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpQuadrature {
    pub boundary: [usize; 3],
    pub angular: [usize; 3],
    pub radial: usize,
    /// Excision radius as a fraction of the ball radius.
    pub eps: f64,
}

impl BpQuadrature {
    pub const DEFAULT_EPS: f64 = 1e-2;

    pub fn from_resolution(r: &Resolution) -> Self {
        Self { boundary: r.boundary, angular: r.volume_angular, radial: r.volume_radial, eps: Self::DEFAULT_EPS }
    }

    pub fn doubled(self) -> Self {
        Self {
            boundary: self.boundary.map(|n| 2 * n),
            angular: self.angular.map(|n| 2 * n),
            radial: 2 * self.radial,
            ..self
        }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }
}

/// Formula readings used by one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpSetup {
    pub quadrature: BpQuadrature,
    pub bracket: KernelBracket,
    pub orientation: Orientation,
    pub assembly: BpAssembly,
}

/// The three pieces of the left side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpTerms {
    pub boundary: Quaternion,
    pub volume: Quaternion,
    /// The doubled volume term carrying `G_v f` and `G_{r,u} g`; zero for the Cauchy form.
    pub operator: Quaternion,
}

impl BpTerms {
    pub fn total(&self) -> Quaternion {
        self.boundary + self.volume + self.operator
    }
}

/// Where `x` sits relative to the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Interior,
    Exterior,
}

fn ball(domain: &DomainSpec) -> Result<(Quaternion, f64)> {
    match *domain {
        DomainSpec::Ball { center, radius } => {
            if !domain.avoids_real_axis() {
                return Err(Error::DomainViolation("closure of the domain meets the real axis".into()));
            }
            Ok((center, radius))
        }
        _ => Err(Error::InvalidSpec("Borel–Pompeiu quadrature needs a ball".into())),
    }
}

/// Classify `x`, refusing points on the boundary.
pub fn side_of(domain: &DomainSpec, x: Quaternion) -> Result<Side> {
    let (c, r) = ball(domain)?;
    let d = (x - c).norm();
    if (d - r).abs() <= 1e-9 * r {
        return Err(Error::DomainViolation("x lies on the boundary".into()));
    }
    Ok(if d < r { Side::Interior } else { Side::Exterior })
}

#[allow(clippy::too_many_arguments)]
fn terms(
    psi: &StructuralSet,
    v: Quaternion,
    u: Quaternion,
    f: &Field,
    g: &Field,
    x: Quaternion,
    domain: &DomainSpec,
    setup: &BpSetup,
    with_operator: bool,
) -> Result<BpTerms> {
    let (center, radius) = ball(domain)?;
    let side = side_of(domain, x)?;
    let q = setup.quadrature;
    let (bracket, sign, stokes) =
        (setup.bracket, setup.orientation.sign(), setup.assembly == BpAssembly::StokesConsistent);
    // e^{⟨y − x, w⟩}, y the integration point
    let weight = |y: Quaternion, w: Quaternion| exp_checked(psi.inner(y - x, w));

    let bspec = BoundarySpec { center, radius, nodes: q.boundary };
    let boundary = boundary_integrate(
        |p| {
            let tau = p.point;
            let nu = nu_form_oriented(psi, p, sign)?;
            let (a_tx, a_xt) = (a_raw(psi, tau, x)?, a_raw(psi, x, tau)?);
            let (gt, ft) = (g.eval(tau)? * weight(tau, u)?, f.eval(tau)? * weight(tau, v)?);
            let s = if stokes { gt * nu * a_tx - a_xt * nu * ft } else { gt * nu * a_xt - a_tx * nu * ft };
            Ok(s * psi.vec_part(tau).norm_sq())
        },
        &bspec,
    )?;

    let excision = (side == Side::Interior).then_some(Excision { point: x, eps: q.eps * radius });
    let vspec = VolumeSpec { center, radius, angular: q.angular, radial: q.radial, excision };
    let c_sign = if stokes { 1.0 } else { -1.0 };
    let volume = volume_integrate(
        |y| {
            let (wv, wu) = (weight(y, v)?, weight(y, u)?);
            let b = b_raw(psi, x, y, bracket)?;
            let c = c_raw(psi, x, y, bracket)?;
            Ok(b * f.eval(y)? * wv + g.eval(y)? * c * (c_sign * wu))
        },
        &vspec,
    )?;

    let operator = if with_operator {
        volume_integrate(
            |y| {
                let (wv, wu) = (weight(y, v)?, weight(y, u)?);
                let (jf, jg) = (jet(f, y, DEFAULT_H)?, jet(g, y, DEFAULT_H)?);
                let (gf, gg) = (gv_from_jet(psi, v, y, &jf), grv_from_jet(psi, u, y, &jg));
                let (a_xy, a_yx) = (a_raw(psi, x, y)?, a_raw(psi, y, x)?);
                let s = if stokes { a_xy * gf * wv - gg * a_yx * wu } else { a_yx * gf * wv - gg * a_xy * wu };
                Ok(s * 2.0)
            },
            &vspec,
        )?
    } else {
        Quaternion::ZERO
    };
    Ok(BpTerms { boundary, volume, operator })
}

/// Boundary, volume and operator terms of the Borel–Pompeiu left side at `x`.
#[allow(clippy::too_many_arguments)]
pub fn borel_pompeiu_terms(
    psi: &StructuralSet,
    v: Quaternion,
    u: Quaternion,
    f: &Field,
    g: &Field,
    x: Quaternion,
    domain: &DomainSpec,
    setup: &BpSetup,
) -> Result<BpTerms> {
    terms(psi, v, u, f, g, x, domain, setup, true)
}

/// Borel–Pompeiu left side at `x`; equals `f(x) + g(x)` inside the ball and `0` outside.
#[allow(clippy::too_many_arguments)]
pub fn borel_pompeiu_eval(
    psi: &StructuralSet,
    v: Quaternion,
    u: Quaternion,
    f: &Field,
    g: &Field,
    x: Quaternion,
    domain: &DomainSpec,
    setup: &BpSetup,
) -> Result<Quaternion> {
    Ok(borel_pompeiu_terms(psi, v, u, f, g, x, domain, setup)?.total())
}

/// The Borel–Pompeiu left side without the operator term, valid for `f ∈ Ker G_v`,
/// `g ∈ Ker G_{r,u}`.
#[allow(clippy::too_many_arguments)]
pub fn cauchy_global_eval(
    psi: &StructuralSet,
    v: Quaternion,
    u: Quaternion,
    f: &Field,
    g: &Field,
    x: Quaternion,
    domain: &DomainSpec,
    setup: &BpSetup,
) -> Result<Quaternion> {
    Ok(terms(psi, v, u, f, g, x, domain, setup, false)?.total())
}

/// The value the left side should reproduce.
pub fn expected(f: &Field, g: &Field, x: Quaternion, domain: &DomainSpec) -> Result<Quaternion> {
    Ok(match side_of(domain, x)? {
        Side::Interior => f.eval(x)? + g.eval(x)?,
        Side::Exterior => Quaternion::ZERO,
    })
}

/// `‖lhs − (f+g)‖ / (1 + ‖f+g‖)` inside, `‖lhs‖` outside.
pub fn bp_error(lhs: Quaternion, expected: Quaternion, side: Side) -> f64 {
    match side {
        Side::Interior => (lhs - expected).norm() / (1.0 + expected.norm()),
        Side::Exterior => lhs.norm(),
    }
}
