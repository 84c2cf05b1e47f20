//! Conformal covariance of `G_u` under Möbius maps.
//!
//! With `y = T(x)`, `w = u + v` and `A_T = c̄`:
//! `G_u[e^{⟨·,v⟩} c̄ (f∘T)](x) = E_T(y) (G f(y) − Γ_T(y) f(y))`, where
//! `E_T(y) = e^{⟨T⁻¹(y),v⟩} N (y − ac⁻¹)⁻²` and `Γ_T(y) = (y − ac⁻¹)² N⁻¹ L (X w + w X) c̄`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{exp_checked, Field};
use crate::moebius::MoebiusMap;
use crate::operators::{g_apply, gv_apply};
use crate::quat::{Quaternion, StructuralSet};

/// Reading of the `X`, `L` pair inside `Γ_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaBracket {
    /// `X = (ℓ𝐲c − 𝐦)⁻¹ − 𝐩`, `L = X/2`.
    Statement,
    /// `X` as above, `L = ½(ℓ𝐲c − 𝐦)⁻¹ − 𝐩`.
    Proof,
    /// `X = vec(T⁻¹(y))`, `L = X/2`.
    PreimageVectorPart,
}

impl GammaBracket {
    pub const ALL: [Self; 3] = [Self::Statement, Self::Proof, Self::PreimageVectorPart];
}

/// The prefactor `N` in `E_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceNormalization {
    /// `N = (‖c‖/‖ℓ‖) c̄`.
    Printed,
    /// `N = −ℓ⁻¹`, which is `(ad − bc)/c` for real maps.
    MapJacobian,
}

impl CovarianceNormalization {
    pub const ALL: [Self; 2] = [Self::Printed, Self::MapJacobian];
}

fn normalization(t: &MoebiusMap, n: CovarianceNormalization) -> Result<Quaternion> {
    Ok(match n {
        CovarianceNormalization::Printed => t.c().conj() * (t.c().norm() / t.ell().norm()),
        CovarianceNormalization::MapJacobian => -t.ell().inverse()?,
    })
}

/// `E_T(y)`.
pub fn e_factor(t: &MoebiusMap, v: Quaternion, y: Quaternion, n: CovarianceNormalization) -> Result<Quaternion> {
    let ym = y - t.pole_image();
    let pre = t.apply_inverse(y)?;
    Ok(normalization(t, n)? * (ym * ym).inverse()? * exp_checked(pre.dot(v))?)
}

/// `Γ_T(y)` for the given weights.
pub fn gamma_factor(
    t: &MoebiusMap,
    u: Quaternion,
    v: Quaternion,
    y: Quaternion,
    bracket: GammaBracket,
    n: CovarianceNormalization,
) -> Result<Quaternion> {
    let w = u + v;
    let inner = (t.ell() * y.vec() * t.c() - t.m().vec()).inverse()?;
    let (x, l) = match bracket {
        GammaBracket::Statement => {
            let x = inner - t.p().vec();
            (x, x * 0.5)
        }
        GammaBracket::Proof => (inner - t.p().vec(), inner * 0.5 - t.p().vec()),
        GammaBracket::PreimageVectorPart => {
            let x = t.apply_inverse(y)?.vec();
            (x, x * 0.5)
        }
    };
    let ym = y - t.pole_image();
    Ok(ym * ym * normalization(t, n)?.inverse()? * l * (x * w + w * x) * t.c().conj())
}

/// `q ↦ e^{⟨q,v⟩} c̄ f(T(q))`.
pub fn transport(t: &MoebiusMap, v: Quaternion, f: &Field) -> Field {
    let (t, f2) = (*t, f.clone());
    Field::try_new(format!("W_T[{}]", f.name()), move |q| {
        Ok(t.c().conj() * f2.eval(t.apply(q)?)? * exp_checked(q.dot(v))?)
    })
}

/// Inverse of [`transport`]: `y ↦ e^{−⟨T⁻¹y,v⟩} c̄⁻¹ h(T⁻¹ y)`.
pub fn inverse_transport(t: &MoebiusMap, v: Quaternion, h: &Field) -> Field {
    let (t, h2) = (*t, h.clone());
    Field::try_new(format!("W_T^-1[{}]", h.name()), move |y| {
        let x = t.apply_inverse(y)?;
        Ok(t.c().conj().inverse()? * h2.eval(x)? * exp_checked(-x.dot(v))?)
    })
}

/// `G_Γ f(y) = G f(y) − Γ_T(y) f(y)`.
#[allow(clippy::too_many_arguments)]
pub fn g_gamma_apply(
    t: &MoebiusMap,
    u: Quaternion,
    v: Quaternion,
    f: &Field,
    y: Quaternion,
    h: f64,
    bracket: GammaBracket,
    n: CovarianceNormalization,
) -> Result<Quaternion> {
    let psi = StructuralSet::STANDARD;
    Ok(g_apply(&psi, f, y, h)? - gamma_factor(t, u, v, y, bracket, n)? * f.eval(y)?)
}

/// Both sides of the covariance identity at `x`.
#[allow(clippy::too_many_arguments)]
pub fn covariance_sides(
    t: &MoebiusMap,
    u: Quaternion,
    v: Quaternion,
    f: &Field,
    x: Quaternion,
    h: f64,
    bracket: GammaBracket,
    n: CovarianceNormalization,
) -> Result<(Quaternion, Quaternion)> {
    let psi = StructuralSet::STANDARD;
    let lhs = gv_apply(&psi, u, &transport(t, v, f), x, h)?;
    let y = t.apply(x)?;
    let rhs = e_factor(t, v, y, n)? * g_gamma_apply(t, u, v, f, y, h, bracket, n)?;
    Ok((lhs, rhs))
}

/// `lhs − rhs` of the covariance identity at `x`.
#[allow(clippy::too_many_arguments)]
pub fn covariance_residual(
    t: &MoebiusMap,
    u: Quaternion,
    v: Quaternion,
    f: &Field,
    x: Quaternion,
    h: f64,
    bracket: GammaBracket,
    n: CovarianceNormalization,
) -> Result<Quaternion> {
    let (l, r) = covariance_sides(t, u, v, f, x, h, bracket, n)?;
    Ok(l - r)
}

/// For `v = −u`: the left side against the unperturbed
/// `e^{−⟨x,u⟩} N (y − ac⁻¹)⁻² G f(y)`.
pub fn covariance_classical_residual(
    t: &MoebiusMap,
    u: Quaternion,
    f: &Field,
    x: Quaternion,
    h: f64,
    n: CovarianceNormalization,
) -> Result<Quaternion> {
    let psi = StructuralSet::STANDARD;
    let lhs = gv_apply(&psi, u, &transport(t, -u, f), x, h)?;
    let y = t.apply(x)?;
    let ym = y - t.pole_image();
    let rhs = normalization(t, n)? * (ym * ym).inverse()? * g_apply(&psi, f, y, h)? * exp_checked(-x.dot(u))?;
    Ok(lhs - rhs)
}

/// Real maps exercised by the suite.
pub fn test_maps() -> Vec<MoebiusMap> {
    [(0.0, 1.0, 1.0, 0.0), (1.0, 2.0, 1.0, 1.0), (2.0, 1.0, 3.0, 5.0), (1.0, -1.0, 2.0, 0.5)]
        .into_iter()
        .map(|(a, b, c, d)| MoebiusMap::real(a, b, c, d).expect("valid test map"))
        .collect()
}

/// `(u, v)` weight pairs exercised by the suite; the first has `v = −u`.
pub fn test_weights() -> Vec<(Quaternion, Quaternion)> {
    vec![
        (Quaternion::E1, -Quaternion::E1),
        (Quaternion::E1, Quaternion::E2),
        (Quaternion::new(0.3, 0.2, 0.0, -0.5), Quaternion::new(0.1, 0.0, 0.4, 0.0)),
    ]
}

/// Base point for the covariance checks.
pub const TEST_POINT: Quaternion = Quaternion::new(0.3, 0.5, -0.4, 0.7);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::operators::RegularityThresholds;
    use crate::operators::Verdict;
    use crate::operators::{v_regularity_report, DEFAULT_H};
    use crate::slice::DomainSpec;

    type Q = Quaternion;
    const SEL: (GammaBracket, CovarianceNormalization) =
        (GammaBracket::PreimageVectorPart, CovarianceNormalization::MapJacobian);

    fn poly() -> Field {
        crate::theorems::reference_f().build()
    }

    #[test]
    fn identity_holds_for_all_maps_and_weights() {
        let f = poly();
        for t in test_maps() {
            for (u, v) in test_weights() {
                let r = covariance_residual(&t, u, v, &f, TEST_POINT, DEFAULT_H, SEL.0, SEL.1).unwrap();
                assert!(r.norm() < 5e-6, "{:?} {u} {v}: {}", t.coefficients()[0], r.norm());
            }
        }
    }

    #[test]
    fn unperturbed_examples() {
        // u = v = 0, T = x⁻¹, f = q
        let t = MoebiusMap::real(0.0, 1.0, 1.0, 0.0).unwrap();
        let r = covariance_residual(
            &t,
            Q::ZERO,
            Q::ZERO,
            &FieldSpec::Identity.build(),
            TEST_POINT,
            DEFAULT_H,
            SEL.0,
            SEL.1,
        );
        assert!(r.unwrap().norm() < 5e-6);
        for t in test_maps() {
            let (u, _) = test_weights()[0];
            let c = covariance_classical_residual(&t, u, &poly(), TEST_POINT, DEFAULT_H, SEL.1).unwrap();
            assert!(c.norm() < 5e-6);
            // Γ vanishes when u + v = 0.
            let g = gamma_factor(&t, u, -u, t.apply(TEST_POINT).unwrap(), GammaBracket::Statement, SEL.1).unwrap();
            assert_eq!(g, Q::ZERO);
        }
    }

    #[test]
    fn printed_forms_fail_on_generic_weights() {
        let f = FieldSpec::Monomial { n: 2, a: Q::ONE }.build();
        let t = MoebiusMap::real(2.0, 1.0, 3.0, 5.0).unwrap();
        for b in [GammaBracket::Statement, GammaBracket::Proof] {
            let r = covariance_residual(&t, Q::E1, Q::E2, &f, TEST_POINT, DEFAULT_H, b, SEL.1).unwrap();
            assert!(r.norm() > 1e-3, "{b:?}");
        }
        // q² is slice regular, so G f = 0 and the normalization only shows on a generic field.
        let r = covariance_residual(
            &t,
            Q::E1,
            -Q::E1,
            &poly(),
            TEST_POINT,
            DEFAULT_H,
            SEL.0,
            CovarianceNormalization::Printed,
        );
        assert!(r.unwrap().norm() > 1e-3);
    }

    #[test]
    fn membership_transports() {
        let t = MoebiusMap::real(1.0, 2.0, 1.0, 1.0).unwrap();
        let (u, v) = (Q::new(0.3, 0.2, 0.0, -0.5), Q::new(0.1, 0.0, 0.4, 0.0));
        let member = FieldSpec::Monomial { n: 2, a: Q::ONE }.damped(u).build();
        let f = inverse_transport(&t, v, &member);
        let y = t.apply(TEST_POINT).unwrap();
        assert!(g_gamma_apply(&t, u, v, &f, y, DEFAULT_H, SEL.0, SEL.1).unwrap().norm() < 1e-6);
        let dom = DomainSpec::ball(Q::new(0.3, 0.5, -0.4, 0.7), 0.3);
        let rep = v_regularity_report(&transport(&t, v, &f), u, &dom, 20, 3, RegularityThresholds::default()).unwrap();
        assert_eq!(rep.gv_verdict, Verdict::Member);
        let g = poly();
        assert!(g_gamma_apply(&t, u, v, &g, y, DEFAULT_H, SEL.0, SEL.1).unwrap().norm() > 1e-2);
        let rep = v_regularity_report(&transport(&t, v, &g), u, &dom, 20, 3, RegularityThresholds::default()).unwrap();
        assert_eq!(rep.gv_verdict, Verdict::NonMember);
    }
}
