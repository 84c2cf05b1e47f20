//! Power series of v-slice regular functions on the unit ball.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{exp_checked, Field};
use crate::quadrature::{pairwise_sum, ContourSpec};
use crate::quat::Quaternion;

/// Cap on the exponential index `k`.
pub const MAX_K: usize = 32;
pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_FIT_RADIUS: f64 = 0.7;

/// `f(q) = e^{−⟨q,v⟩} Σ qⁿ aₙ`, stored as `v` and `a0..aN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VSeries {
    pub v: Quaternion,
    pub coeffs: Vec<Quaternion>,
}

impl VSeries {
    pub fn new(v: Quaternion, coeffs: Vec<Quaternion>) -> Self {
        Self { v, coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `e^{−⟨q,v⟩} Σ qⁿ aₙ` evaluated directly.
    pub fn closed_form(&self, q: Quaternion) -> Result<Quaternion> {
        let mut p = Quaternion::ONE;
        let mut s = Quaternion::ZERO;
        for a in &self.coeffs {
            s += p * *a;
            p *= q;
        }
        Ok(s * exp_checked(-q.dot(self.v))?)
    }
}

/// Smallest `K` with `|⟨q,v⟩|^K / K! < 1e-17`.
fn k_terms(q: Quaternion, v: Quaternion) -> Result<usize> {
    let s = q.dot(v).abs();
    let mut term = 1.0;
    for k in 0..=MAX_K {
        if term < 1e-17 {
            return Ok(k);
        }
        term *= s / (k + 1) as f64;
    }
    Err(Error::TailNotConverged)
}

fn signed_factorial_weights(kmax: usize) -> Vec<f64> {
    // (−1)^k / (2^k k!)
    let mut w = vec![1.0; kmax + 1];
    for k in 1..=kmax {
        w[k] = -w[k - 1] / (2.0 * k as f64);
    }
    w
}

/// `Σ_n Σ_k q^{n−k}(v q̄ + q v̄)^k (−1)^k a_{n−k} / (2^k k!)` with `a_m = 0` for `m > N`
/// and `k` running until the exponential tail is below roundoff.
pub fn series_eval(s: &VSeries, q: Quaternion) -> Result<Quaternion> {
    if q.norm() >= 1.0 {
        return Err(Error::OutsideBall);
    }
    let kmax = k_terms(q, s.v)?;
    let base = s.v * q.conj() + q * s.v.conj();
    let bpow: Vec<Quaternion> =
        std::iter::successors(Some(Quaternion::ONE), |p| Some(*p * base)).take(kmax + 1).collect();
    let w = signed_factorial_weights(kmax);
    let n_max = s.order() + kmax;
    let mut qpow = vec![Quaternion::ONE; s.order() + 1];
    for m in 1..qpow.len() {
        qpow[m] = qpow[m - 1] * q;
    }
    let mut terms = Vec::new();
    for n in 0..=n_max {
        for k in n.saturating_sub(s.order())..=n.min(kmax) {
            terms.push(qpow[n - k] * bpow[k] * s.coeffs[n - k] * w[k]);
        }
    }
    Ok(pairwise_sum(&terms))
}

/// `((q̄/‖q‖) v (q̄/‖q‖) + v̄)^k`.
pub fn c_vk(v: Quaternion, q: Quaternion, k: usize) -> Result<Quaternion> {
    let n = q.norm();
    if n == 0.0 {
        return Err(Error::ZeroPoint);
    }
    let u = q.conj() / n;
    let b = u * v * u + v.conj();
    Ok((0..k).fold(Quaternion::ONE, |p, _| p * b))
}

/// The resummed form `Σ qⁿ Σ_k c_{v,k}(q) a_{n−k} (−1)^k / (2^k k!)`, for `q ≠ 0`.
pub fn series_eval_resummed(s: &VSeries, q: Quaternion) -> Result<Quaternion> {
    if q.norm() >= 1.0 {
        return Err(Error::OutsideBall);
    }
    let kmax = k_terms(q, s.v)?;
    let c1 = c_vk(s.v, q, 1)?;
    let cpow: Vec<Quaternion> =
        std::iter::successors(Some(Quaternion::ONE), |p| Some(*p * c1)).take(kmax + 1).collect();
    let w = signed_factorial_weights(kmax);
    let n_max = s.order() + kmax;
    let mut qn = Quaternion::ONE;
    let mut terms = Vec::new();
    for n in 0..=n_max {
        for k in n.saturating_sub(s.order())..=n.min(kmax) {
            terms.push(qn * cpow[k] * s.coeffs[n - k] * w[k]);
        }
        qn *= q;
    }
    Ok(pairwise_sum(&terms))
}

/// Coefficient convolution `cₙ = Σ_{m≤n} a_m b_{n−m}`, truncated at `min(N_f, N_g)`.
pub fn star_v(f: &VSeries, g: &VSeries) -> Result<VSeries> {
    if f.v != g.v {
        return Err(Error::WeightMismatch);
    }
    let n = f.order().min(g.order());
    let coeffs = (0..=n)
        .into_par_iter()
        .map(|k| (0..=k).fold(Quaternion::ZERO, |acc, m| acc + f.coeffs[m] * g.coeffs[k - m]))
        .collect();
    Ok(VSeries::new(f.v, coeffs))
}

/// `aₙ = (1/2π) ∮_{|ζ|=r} ζ^{−n−1} dζ_i e^{⟨ζ,v⟩} f(ζ)`, `dζ_i = −dζ i`, on `nodes`
/// trapezoid points of the slice `ℂ(i)`.
pub fn series_fit(f: &Field, v: Quaternion, i: Quaternion, r: f64, order: usize, nodes: usize) -> Result<VSeries> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutsideBall);
    }
    let spec = ContourSpec::new(0.0, r, i, nodes)?;
    let samples: Vec<(Quaternion, Quaternion, Quaternion)> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let node = spec.node(k);
            let g = f.eval(node.zeta)? * exp_checked(node.zeta.dot(v))?;
            if !g.is_finite() {
                return Err(Error::NonFiniteIntegrand);
            }
            Ok((node.zeta, -(node.dzeta * i), g))
        })
        .collect::<Result<_>>()?;
    let scale = 1.0 / nodes as f64;
    let coeffs = (0..=order)
        .into_par_iter()
        .map(|n| {
            let terms: Vec<Quaternion> = samples
                .iter()
                .map(|&(z, dzi, g)| {
                    let zinv = z.conj() / z.norm_sq();
                    zinv.powi(n as u32 + 1) * dzi * g
                })
                .collect();
            // (1/2π)·(2π/N)
            pairwise_sum(&terms) * scale
        })
        .collect();
    Ok(VSeries::new(v, coeffs))
}
