//! Contour, 3-sphere and 4-ball quadrature with deterministic reduction.
//!
//! Every rule evaluates its nodes in parallel, collects the results in node order and
//! reduces them with [`pairwise_sum`], so results are bitwise identical for any thread count.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::SurfacePatch;
use crate::quat::Quaternion;
use crate::slice::{check_unit_imaginary, in_slice};

/// Pairwise summation in a fixed tree order.
pub fn pairwise_sum(xs: &[Quaternion]) -> Quaternion {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().fold(Quaternion::ZERO, |a, &b| a + b);
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Evaluate `f(0..n)` in parallel and pairwise-sum in index order.
pub fn par_sum<F>(n: usize, f: F) -> Result<Quaternion>
where
    F: Fn(usize) -> Result<Quaternion> + Sync,
{
    let vals: Vec<Quaternion> = (0..n)
        .into_par_iter()
        .map(|k| {
            let v = f(k)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteIntegrand)
            }
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&vals))
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one node"));
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut out: Vec<(f64, f64)> =
        rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect();
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

/// Circle `a + r e^{iθ}` in the slice `ℂ(i)`, traversed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: f64,
    pub radius: f64,
    pub i: Quaternion,
    pub nodes: usize,
}

/// A trapezoid node: `ζ` and `ζ′ = dζ/dθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub zeta: Quaternion,
    pub dzeta: Quaternion,
}

impl ContourSpec {
    pub fn new(center: f64, radius: f64, i: Quaternion, nodes: usize) -> Result<Self> {
        let s = Self { center, radius, i, nodes };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_imaginary(self.i)?;
        if !(self.radius > 0.0) {
            return Err(Error::InvalidSpec("contour radius must be positive".into()));
        }
        if self.nodes < 8 {
            return Err(Error::InvalidSpec("contour needs at least 8 nodes".into()));
        }
        Ok(())
    }

    pub fn with_nodes(self, nodes: usize) -> Self {
        Self { nodes, ..self }
    }

    pub fn node(&self, k: usize) -> ContourNode {
        let th = 2.0 * PI * k as f64 / self.nodes as f64;
        let (s, c) = th.sin_cos();
        ContourNode {
            zeta: in_slice(self.center + self.radius * c, self.radius * s, self.i),
            dzeta: in_slice(-self.radius * s, self.radius * c, self.i),
        }
    }

    /// Whether `q` lies strictly inside the disc in this contour's slice.
    pub fn encloses(&self, q: Quaternion) -> bool {
        let y = q.dot(self.i);
        let off_slice = (q.vec() - self.i * y).norm();
        off_slice <= 1e-12 * (1.0 + q.norm()) && ((q.q0 - self.center).powi(2) + y * y).sqrt() < self.radius
    }
}

/// `(2π/N) Σ h(node_k)`; `h` places `dζ` itself.
pub fn contour_sum<F>(h: F, spec: &ContourSpec) -> Result<Quaternion>
where
    F: Fn(&ContourNode) -> Result<Quaternion> + Sync,
{
    spec.validate()?;
    let s = par_sum(spec.nodes, |k| h(&spec.node(k)))?;
    Ok(s * (2.0 * PI / spec.nodes as f64))
}

/// `∮ g(ζ) dζ ≈ (2π/N) Σ g(ζ_k) ζ′_k`.
pub fn contour_integrate<F>(g: F, spec: &ContourSpec) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Sync,
{
    contour_sum(|n| Ok(g(n.zeta)? * n.dzeta), spec)
}

/// Boundary of the ball `‖q − c‖ < r` with an angular resolution `(n_χ, n_θ, n_φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub center: Quaternion,
    pub radius: f64,
    pub nodes: [usize; 3],
}

/// Angular rule on S³: unit normal, unscaled tangents, raw weight, and the Jacobian
/// `sin²χ sinθ`.
#[derive(Debug, Clone, Copy)]
struct SphereNode {
    n: Quaternion,
    d: [Quaternion; 3],
    w: f64,
    jac: f64,
}

fn sphere_nodes(nodes: [usize; 3]) -> Vec<SphereNode> {
    let chi = gauss_legendre(nodes[0], 0.0, PI);
    let th = gauss_legendre(nodes[1], 0.0, PI);
    let nph = nodes[2];
    let wph = 2.0 * PI / nph as f64;
    let mut out = Vec::with_capacity(chi.len() * th.len() * nph);
    for &(c, wc) in &chi {
        let (sc, cc) = c.sin_cos();
        for &(t, wt) in &th {
            let (st, ct) = t.sin_cos();
            for k in 0..nph {
                let p = wph * k as f64;
                let (sp, cp) = p.sin_cos();
                out.push(SphereNode {
                    n: Quaternion::new(cc, sc * ct, sc * st * cp, sc * st * sp),
                    d: [
                        Quaternion::new(-sc, cc * ct, cc * st * cp, cc * st * sp),
                        Quaternion::new(0.0, -sc * st, sc * ct * cp, sc * ct * sp),
                        Quaternion::new(0.0, 0.0, -sc * st * sp, sc * st * cp),
                    ],
                    w: wc * wt * wph,
                    jac: sc * sc * st,
                });
            }
        }
    }
    out
}

impl BoundarySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || self.nodes.contains(&0) {
            return Err(Error::InvalidSpec("boundary needs positive radius and node counts".into()));
        }
        Ok(())
    }

    pub fn doubled(self) -> Self {
        Self { nodes: self.nodes.map(|n| 2 * n), ..self }
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes.iter().product()
    }
}

/// `Σ w_k · integrand(patch_k)`; the integrand receives the point and its tangents
/// (the parametrization's Jacobian) and forms any differential itself.
pub fn boundary_integrate<F>(integrand: F, spec: &BoundarySpec) -> Result<Quaternion>
where
    F: Fn(&SurfacePatch) -> Result<Quaternion> + Sync,
{
    spec.validate()?;
    let nodes = sphere_nodes(spec.nodes);
    let r = spec.radius;
    par_sum(nodes.len(), |k| {
        let s = &nodes[k];
        let patch = SurfacePatch { point: spec.center + s.n * r, tangents: s.d.map(|t| t * r) };
        Ok(integrand(&patch)? * s.w)
    })
}

/// A ball excluded around an interior point of the volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excision {
    pub point: Quaternion,
    pub eps: f64,
}

/// Ball `‖q − c‖ < r`: angular nodes `(n_χ, n_θ, n_φ)` times `radial` Gauss nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeSpec {
    pub center: Quaternion,
    pub radius: f64,
    pub angular: [usize; 3],
    pub radial: usize,
    /// Polar coordinates about the excised point with a logarithmic radial variable.
    pub excision: Option<Excision>,
}

impl VolumeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || self.radial == 0 || self.angular.contains(&0) {
            return Err(Error::InvalidSpec("volume needs positive radius and node counts".into()));
        }
        if let Some(e) = self.excision {
            let gap = self.radius - (e.point - self.center).norm();
            if !(e.eps > 0.0 && e.eps < gap) {
                return Err(Error::InvalidSpec("excision ball must lie inside the volume".into()));
            }
        }
        Ok(())
    }

    pub fn doubled(self) -> Self {
        Self { angular: self.angular.map(|n| 2 * n), radial: 2 * self.radial, ..self }
    }

    pub fn total_nodes(&self) -> usize {
        self.angular.iter().product::<usize>() * self.radial
    }

    /// Quadrature points and weights.
    pub fn nodes(&self) -> Result<Vec<(Quaternion, f64)>> {
        self.validate()?;
        let sphere = sphere_nodes(self.angular);
        let mut out = Vec::with_capacity(self.total_nodes());
        match self.excision {
            None => {
                for &(r, wr) in &gauss_legendre(self.radial, 0.0, self.radius) {
                    let rw = wr * r * r * r;
                    out.extend(sphere.iter().map(|s| (self.center + s.n * r, s.w * s.jac * rw)));
                }
            }
            Some(e) => {
                let d = e.point - self.center;
                let unit = gauss_legendre(self.radial, 0.0, 1.0);
                let lo = e.eps.ln();
                for s in &sphere {
                    let dn = s.n.dot(d);
                    let rho = -dn + (dn * dn - d.norm_sq() + self.radius * self.radius).sqrt();
                    let span = rho.ln() - lo;
                    for &(u, wu) in &unit {
                        let r = (lo + span * u).exp();
                        out.push((e.point + s.n * r, s.w * s.jac * wu * span * r.powi(4)));
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn volume_integrate<F>(integrand: F, spec: &VolumeSpec) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Sync,
{
    let nodes = spec.nodes()?;
    par_sum(nodes.len(), |k| Ok(integrand(nodes[k].0)? * nodes[k].1))
}

/// Integrate at `spec` and at double resolution; fail if the two differ by more than `tol`.
/// Returns the fine result and the difference.
pub fn with_doubling<S: Copy, F>(spec: S, double: impl Fn(S) -> S, tol: f64, run: F) -> Result<(Quaternion, f64)>
where
    F: Fn(&S) -> Result<Quaternion>,
{
    let coarse = run(&spec)?;
    let fine = run(&double(spec))?;
    let delta = (fine - coarse).norm();
    if delta > tol {
        return Err(Error::ResolutionTooLow { delta, tol });
    }
    Ok((fine, delta))
}

fn halton(mut k: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while k > 0 {
        f /= base as f64;
        r += f * (k % base) as f64;
        k /= base;
    }
    r
}

/// Quasi-Monte Carlo cross-check over a ball: Halton points (bases 2, 3, 5, 7) in the
/// bounding cube, kept if inside.
pub fn volume_integrate_qmc<F>(integrand: F, center: Quaternion, radius: f64, points: usize) -> Result<Quaternion>
where
    F: Fn(Quaternion) -> Result<Quaternion> + Sync,
{
    let cube = (2.0 * radius).powi(4);
    let s = par_sum(points, |k| {
        let u: [f64; 4] = std::array::from_fn(|d| radius * (2.0 * halton(k + 1, [2, 3, 5, 7][d]) - 1.0));
        let q = center + Quaternion::from(u);
        if (q - center).norm() < radius {
            integrand(q)
        } else {
            Ok(Quaternion::ZERO)
        }
    })?;
    Ok(s * (cube / points as f64))
}

/// Named resolution presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum ResolutionLevel {
    Low,
    #[default]
    Default,
    High,
}

impl std::str::FromStr for ResolutionLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Self::Low),
            "default" => Ok(Self::Default),
            "high" => Ok(Self::High),
            _ => Err(Error::ConfigParse(format!("unknown resolution {s:?}"))),
        }
    }
}

/// Node counts for every rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub contour: usize,
    pub boundary: [usize; 3],
    pub volume_angular: [usize; 3],
    pub volume_radial: usize,
}

impl Resolution {
    pub fn preset(level: ResolutionLevel) -> Self {
        match level {
            ResolutionLevel::Low => {
                Self { contour: 128, boundary: [12, 12, 24], volume_angular: [8, 8, 16], volume_radial: 8 }
            }
            ResolutionLevel::Default => {
                Self { contour: 256, boundary: [24, 24, 48], volume_angular: [16, 16, 32], volume_radial: 16 }
            }
            ResolutionLevel::High => {
                Self { contour: 512, boundary: [32, 32, 64], volume_angular: [24, 24, 48], volume_radial: 24 }
            }
        }
    }

    pub fn doubled(self) -> Self {
        Self {
            contour: self.contour * 2,
            boundary: self.boundary.map(|n| 2 * n),
            volume_angular: self.volume_angular.map(|n| 2 * n),
            volume_radial: self.volume_radial * 2,
        }
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Self::preset(ResolutionLevel::Default)
    }
}
