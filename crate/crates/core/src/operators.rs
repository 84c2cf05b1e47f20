//! Finite-difference operators: `ψG`, `ψG_r`, their v-perturbations, and the slice
//! Cauchy–Riemann residual.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::Field;
use crate::quat::{Quaternion, StructuralSet};
use crate::slice::{in_slice, slice_decompose, DomainSpec, SlicePoint};

/// Default central-difference step.
pub const DEFAULT_H: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FdScheme {
    #[default]
    Central,
    /// `(4 D(h/2) − D(h)) / 3`
    Richardson,
}

/// Value and first partials along `e0..e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub value: Quaternion,
    pub partials: [Quaternion; 4],
}

impl Jet1 {
    /// Derivatives along `ψ_k` by the chain rule.
    pub fn along(&self, psi: &StructuralSet) -> [Quaternion; 4] {
        std::array::from_fn(|k| {
            let d = psi.psi(k).to_array();
            (0..4).map(|m| self.partials[m] * d[m]).sum()
        })
    }
}

fn central(f: &Field, x: Quaternion, h: f64) -> Result<[Quaternion; 4]> {
    let mut out = [Quaternion::ZERO; 4];
    for (k, o) in out.iter_mut().enumerate() {
        let e = Quaternion::basis(k) * h;
        *o = (f.eval(x + e)? - f.eval(x - e)?) / (2.0 * h);
    }
    Ok(out)
}

pub fn jet(f: &Field, x: Quaternion, h: f64) -> Result<Jet1> {
    jet_with(f, x, h, FdScheme::Central)
}

pub fn jet_with(f: &Field, x: Quaternion, h: f64, scheme: FdScheme) -> Result<Jet1> {
    let partials = match scheme {
        FdScheme::Central => central(f, x, h)?,
        FdScheme::Richardson => {
            let coarse = central(f, x, h)?;
            let fine = central(f, x, h / 2.0)?;
            std::array::from_fn(|k| (fine[k] * 4.0 - coarse[k]) / 3.0)
        }
    };
    Ok(Jet1 { value: f.eval(x)?, partials })
}

/// `(𝐱/2)(𝐱v + v𝐱)`; equals `−v0‖𝐱‖² − 𝐱⟨𝐱,𝐯⟩`.
pub fn perturbation(psi: &StructuralSet, v: Quaternion, x: Quaternion) -> Quaternion {
    let xv = psi.vec_part(x);
    xv * 0.5 * (xv * v + v * xv)
}

/// `ψG` applied to a jet: `‖𝐱‖²ψ0∂0f + 𝐱 Σ x_k ∂_k f`.
pub fn g_from_jet(psi: &StructuralSet, x: Quaternion, j: &Jet1) -> Quaternion {
    let c = psi.coords(x);
    let xv = psi.vec_part(x);
    let d = j.along(psi);
    let sum: Quaternion = (1..4).map(|k| d[k] * c[k]).sum();
    psi.psi(0) * d[0] * xv.norm_sq() + xv * sum
}

/// `ψG_r` applied to a jet: `‖𝐱‖²ψ0∂0f + Σ x_k (∂_k f) 𝐱`.
pub fn gr_from_jet(psi: &StructuralSet, x: Quaternion, j: &Jet1) -> Quaternion {
    let c = psi.coords(x);
    let xv = psi.vec_part(x);
    let d = j.along(psi);
    let sum: Quaternion = (1..4).map(|k| d[k] * c[k]).sum();
    d[0] * psi.psi(0) * xv.norm_sq() + sum * xv
}

/// `ψG_v f(x) = ψG f(x) − (𝐱/2)(𝐱v + v𝐱) f(x)`.
pub fn gv_apply(psi: &StructuralSet, v: Quaternion, f: &Field, x: Quaternion, h: f64) -> Result<Quaternion> {
    let j = jet(f, x, h)?;
    Ok(gv_from_jet(psi, v, x, &j))
}

pub fn gv_from_jet(psi: &StructuralSet, v: Quaternion, x: Quaternion, j: &Jet1) -> Quaternion {
    g_from_jet(psi, x, j) - perturbation(psi, v, x) * j.value
}

/// `ψG_{r,v} f(x) = ψG_r f(x) − f(x)(𝐱/2)(𝐱v + v𝐱)`.
pub fn grv_apply(psi: &StructuralSet, v: Quaternion, f: &Field, x: Quaternion, h: f64) -> Result<Quaternion> {
    let j = jet(f, x, h)?;
    Ok(grv_from_jet(psi, v, x, &j))
}

pub fn grv_from_jet(psi: &StructuralSet, v: Quaternion, x: Quaternion, j: &Jet1) -> Quaternion {
    gr_from_jet(psi, x, j) - j.value * perturbation(psi, v, x)
}

/// `ψG`, the `v = 0` case of [`gv_apply`].
pub fn g_apply(psi: &StructuralSet, f: &Field, x: Quaternion, h: f64) -> Result<Quaternion> {
    gv_apply(psi, Quaternion::ZERO, f, x, h)
}

pub fn gr_apply(psi: &StructuralSet, f: &Field, x: Quaternion, h: f64) -> Result<Quaternion> {
    grv_apply(psi, Quaternion::ZERO, f, x, h)
}

/// `½(∂x + i∂y) f + ¼(v − ivi) f` at `x + iy`, with in-slice central differences.
pub fn cr_v_residual(f: &Field, p: &SlicePoint, v: Quaternion, h: f64) -> Result<Quaternion> {
    let (x, y, i) = (p.x, p.y, p.i);
    let dx = (f.eval(in_slice(x + h, y, i))? - f.eval(in_slice(x - h, y, i))?) / (2.0 * h);
    let dy = (f.eval(in_slice(x, y + h, i))? - f.eval(in_slice(x, y - h, i))?) / (2.0 * h);
    let value = f.eval(in_slice(x, y, i))?;
    let shift = (v - i * v * i) * 0.25;
    Ok((dx + i * dy) * 0.5 + shift * value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

/// Thresholds separating members from non-members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityThresholds {
    pub member: f64,
    pub non_member: f64,
}

impl Default for RegularityThresholds {
    fn default() -> Self {
        Self { member: 1e-6, non_member: 1e-2 }
    }
}

impl RegularityThresholds {
    pub fn classify(&self, max: f64) -> Verdict {
        if max < self.member {
            Verdict::Member
        } else if max > self.non_member {
            Verdict::NonMember
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub samples: usize,
    pub seed: u64,
    pub max_cr: f64,
    pub max_gv: f64,
    pub cr_verdict: Verdict,
    pub gv_verdict: Verdict,
    /// Sample points with the larger of the two residual norms there.
    pub points: Vec<([f64; 4], f64, f64)>,
}

impl RegularityReport {
    pub fn agree(&self) -> bool {
        self.cr_verdict == self.gv_verdict && self.cr_verdict != Verdict::Inconclusive
    }
}

/// Max of `‖cr_v_residual‖` over slice points and of `‖G_v f‖` over the same sampled
/// quaternions. Points with `‖𝐪‖` below 5% of the domain radius are skipped so the slice
/// unit is well defined.
pub fn v_regularity_report(
    f: &Field,
    v: Quaternion,
    domain: &DomainSpec,
    samples: usize,
    seed: u64,
    thresholds: RegularityThresholds,
) -> Result<RegularityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_vec = 0.05 * domain.outer_radius();
    let pts: Vec<Quaternion> = (0..samples).map(|_| domain.sample_off_axis(&mut rng, min_vec)).collect();
    let psi = StructuralSet::STANDARD;
    let rows: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&q| {
            let p = slice_decompose(q)?;
            let cr = cr_v_residual(f, &p, v, DEFAULT_H)?.norm();
            let gv = gv_apply(&psi, v, f, q, DEFAULT_H)?.norm();
            Ok((cr, gv))
        })
        .collect::<Result<_>>()?;
    let max_cr = rows.iter().fold(0.0f64, |m, r| m.max(r.0));
    let max_gv = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    Ok(RegularityReport {
        samples,
        seed,
        max_cr,
        max_gv,
        cr_verdict: thresholds.classify(max_cr),
        gv_verdict: thresholds.classify(max_gv),
        points: pts.iter().zip(&rows).map(|(q, r)| (q.to_array(), r.0, r.1)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{witness_catalog, FieldSpec};
    use proptest::prelude::*;

    fn psi_st() -> StructuralSet {
        StructuralSet::STANDARD
    }

    fn x0() -> Quaternion {
        Quaternion::new(0.3, -0.7, 0.4, 0.9)
    }

    #[test]
    fn jet_examples() {
        let c = Field::constant(Quaternion::new(1.0, 2.0, 3.0, 4.0));
        assert!(jet(&c, x0(), DEFAULT_H).unwrap().partials.iter().all(|p| p.norm() == 0.0));
        let id = FieldSpec::Identity.build();
        let j = jet(&id, x0(), DEFAULT_H).unwrap();
        for k in 0..4 {
            assert!(j.partials[k].max_abs_diff(Quaternion::basis(k)) < 1e-9);
        }
        // d/dq0 q² = 2q; d/dq1 q² = e1 q + q e1 = −2 at q = e1.
        let sq = FieldSpec::Monomial { n: 2, a: Quaternion::ONE }.build();
        let j = jet(&sq, Quaternion::E1, DEFAULT_H).unwrap();
        assert!(j.partials[0].max_abs_diff(Quaternion::E1 * 2.0) < 1e-8);
        assert!(j.partials[1].max_abs_diff(Quaternion::real(-2.0)) < 1e-8);
    }

    #[test]
    fn richardson_is_at_least_as_good() {
        let f = FieldSpec::Monomial { n: 3, a: Quaternion::ONE }.build();
        let x = x0();
        // ∂0 q³ = 3q² for the real direction.
        let exact = x * x * 3.0;
        let c = jet_with(&f, x, 1e-3, FdScheme::Central).unwrap().partials[0];
        let r = jet_with(&f, x, 1e-3, FdScheme::Richardson).unwrap().partials[0];
        assert!(r.max_abs_diff(exact) < c.max_abs_diff(exact));
    }

    #[test]
    fn gv_examples() {
        let id = FieldSpec::Identity.build();
        assert!(gv_apply(&psi_st(), Quaternion::ZERO, &id, x0(), DEFAULT_H).unwrap().norm() < 1e-8);
        let c = Field::constant(Quaternion::new(1.0, -1.0, 0.5, 2.0));
        assert_eq!(
            gv_apply(&psi_st(), Quaternion::ZERO, &c, Quaternion::real(0.7), DEFAULT_H).unwrap(),
            Quaternion::ZERO
        );
        let damp = FieldSpec::Const { c: Quaternion::ONE }.damped(Quaternion::E1).build();
        assert!(gv_apply(&psi_st(), Quaternion::E1, &damp, x0(), DEFAULT_H).unwrap().norm() < 1e-7);
    }

    #[test]
    fn grv_examples() {
        let c = Field::constant(Quaternion::new(1.0, -1.0, 0.5, 2.0));
        assert_eq!(
            grv_apply(&psi_st(), Quaternion::ZERO, &c, Quaternion::real(0.7), DEFAULT_H).unwrap(),
            Quaternion::ZERO
        );
        let id = FieldSpec::Identity.build();
        assert!(grv_apply(&psi_st(), Quaternion::ZERO, &id, x0(), DEFAULT_H).unwrap().norm() < 1e-8);
        let damp = FieldSpec::Const { c: Quaternion::ONE }.damped(Quaternion::E2).build();
        assert!(grv_apply(&psi_st(), Quaternion::E2, &damp, x0(), DEFAULT_H).unwrap().norm() < 1e-7);
    }

    #[test]
    fn perturbation_closed_form() {
        let v = Quaternion::new(0.4, -1.2, 0.3, 0.8);
        let x = x0();
        let xv = x.vec();
        let closed = -(Quaternion::real(v.q0 * xv.norm_sq()) + xv * xv.dot(v.vec()));
        assert!(perturbation(&psi_st(), v, x).max_abs_diff(closed) < 1e-15);
    }

    #[test]
    fn cr_examples() {
        let p = SlicePoint::new(0.2, 0.6, Quaternion::E1).unwrap();
        let id = FieldSpec::Identity.build();
        assert!(cr_v_residual(&id, &p, Quaternion::ZERO, DEFAULT_H).unwrap().norm() < 1e-9);
        let cj = FieldSpec::Conj.build();
        assert!(cr_v_residual(&cj, &p, Quaternion::ZERO, DEFAULT_H).unwrap().max_abs_diff(Quaternion::ONE) < 1e-8);
        // e^{−(v1/2) z̄} with v1 in the slice of e1.
        let v1 = Quaternion::new(0.3, 0.5, 0.0, 0.0);
        let f = Field::new("exp", move |q| (v1 * q.conj() * -0.5).exp());
        assert!(cr_v_residual(&f, &p, v1, DEFAULT_H).unwrap().norm() < 1e-7);
    }

    #[test]
    fn regularity_examples() {
        let ball = DomainSpec::ball(Quaternion::ZERO, 0.9);
        let th = RegularityThresholds::default();
        let m = FieldSpec::Monomial { n: 2, a: Quaternion::ONE }.damped(Quaternion::E1).build();
        let r = v_regularity_report(&m, Quaternion::E1, &ball, 200, 1, th).unwrap();
        assert!(r.max_cr < 1e-6 && r.max_gv < 1e-6, "{r:?}");
        let cj = FieldSpec::Conj.build();
        let r = v_regularity_report(&cj, Quaternion::ZERO, &ball, 200, 1, th).unwrap();
        assert!(r.max_cr > 0.5 && r.max_gv > 0.5);
        let c = Field::constant(Quaternion::new(0.2, 0.1, 0.0, -0.3));
        let r = v_regularity_report(&c, Quaternion::ZERO, &ball, 200, 1, th).unwrap();
        assert!(r.max_cr < 1e-9 && r.max_gv < 1e-9);
    }

    #[test]
    fn catalog_verdicts_agree() {
        let ball = DomainSpec::ball(Quaternion::ZERO, 0.9);
        let v = Quaternion::new(0.2, 0.5, -0.3, 0.4);
        for w in witness_catalog(v) {
            let r = v_regularity_report(&w.spec.build(), v, &ball, 100, 3, Default::default()).unwrap();
            assert!(r.agree(), "{}: {r:?}", w.name);
            assert_eq!(r.cr_verdict == Verdict::Member, w.member, "{}", w.name);
        }
    }

    #[test]
    fn rotated_psi_g_matches_standard() {
        // G is invariant under a proper rotation of the imaginary units.
        let u = Quaternion::new(0.5, 0.5, -0.5, 0.5);
        let e = |k| u * Quaternion::basis(k) * u.conj();
        let psi = StructuralSet::new([Quaternion::ONE, e(1), e(2), e(3)]).unwrap();
        let f = FieldSpec::Monomial { n: 3, a: Quaternion::E2 }.build();
        let a = g_apply(&psi, &f, x0(), DEFAULT_H).unwrap();
        let b = g_apply(&psi_st(), &f, x0(), DEFAULT_H).unwrap();
        assert!(a.max_abs_diff(b) < 1e-12);
    }

    fn arb_q(r: f64) -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-r..r).prop_map(Quaternion::from)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn g_exp_identity(seed in any::<u64>(), v in arb_q(1.0), x in arb_q(1.5)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = FieldSpec::random_polynomial(&mut rng, 3, 4);
            let f = spec.build();
            let weighted = f.exp_weighted(v, 1.0);
            let scale = (-x.dot(v)).exp();
            let lhs = gv_apply(&psi_st(), v, &f, x, DEFAULT_H).unwrap();
            let rhs = g_apply(&psi_st(), &weighted, x, DEFAULT_H).unwrap() * scale;
            prop_assert!(lhs.max_abs_diff(rhs) < 5e-6);
            let lhs = grv_apply(&psi_st(), v, &f, x, DEFAULT_H).unwrap();
            let rhs = gr_apply(&psi_st(), &weighted, x, DEFAULT_H).unwrap() * scale;
            prop_assert!(lhs.max_abs_diff(rhs) < 5e-6);
        }

        // ⟨z,v⟩ = ⟨z,v1⟩ for z in ℂ(i) and v = v1 + v2 j.
        #[test]
        fn slice_inner_product_sees_only_v1(x in -2.0f64..2.0, y in -2.0f64..2.0, v in arb_q(3.0)) {
            let i = Quaternion::E1;
            let z = in_slice(x, y, i);
            let v1 = Quaternion::new(v.q0, v.q1, 0.0, 0.0);
            prop_assert!((z.dot(v) - z.dot(v1)).abs() <= 1e-14 * (1.0 + z.dot(v).abs()));
        }

        #[test]
        fn damped_monomials_are_regular(n in 0u32..=4, a in arb_q(0.5), v in arb_q(1.0), seed in any::<u64>()) {
            let f = FieldSpec::Monomial { n, a }.damped(v).build();
            let ball = DomainSpec::ball(Quaternion::ZERO, 0.9);
            let r = v_regularity_report(&f, v, &ball, 20, seed, Default::default()).unwrap();
            prop_assert!(r.max_cr < 1e-6 && r.max_gv < 1e-6);
        }
    }
}
