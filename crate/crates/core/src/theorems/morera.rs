//! Morera-type membership test for SR_v.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::operators::Verdict;
use crate::quadrature::ContourSpec;
use crate::quat::Quaternion;
use crate::slice::DomainSpec;

use super::cauchy::slice_theorem_integral;
use super::{DifferentialSide, ExpSign};

pub const FAMILY_SIZE: usize = 20;

/// `FAMILY_SIZE` circles with real centers inside a ball centered on the real axis.
///
/// Slice units are spread over the sphere (so most slices are neither parallel nor
/// orthogonal to any fixed `v`), and centers are shifted off the ball center so circles
/// do not all share one center.
pub fn contour_family(domain: &DomainSpec, nodes: usize) -> Result<Vec<ContourSpec>> {
    let (c0, r) = match *domain {
        DomainSpec::Ball { center, radius } if center.vec_norm() == 0.0 => (center.q0, radius),
        DomainSpec::AnnularSlice { .. } | DomainSpec::Ball { .. } => {
            return Err(Error::InvalidSpec("Morera family needs a ball centered on the real axis".into()))
        }
    };
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..FAMILY_SIZE)
        .map(|k| {
            // Fibonacci sphere
            let z = 1.0 - (2.0 * k as f64 + 1.0) / FAMILY_SIZE as f64;
            let s = (1.0 - z * z).sqrt();
            let (sp, cp) = (golden * k as f64).sin_cos();
            let i = Quaternion::vector(s * cp, s * sp, z);
            let i = i / i.norm();
            let center = c0 + r * (0.15 + 0.1 * (k % 3) as f64);
            ContourSpec::new(center, 0.45 * r, i, nodes)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoreraReport {
    /// `‖∮‖` per contour.
    pub integrals: Vec<f64>,
    pub max: f64,
    pub verdict: Verdict,
}

/// Max over `family` of `‖∮ dζ_i e^{±⟨ζ,v⟩} h(ζ)‖`; member below `member_tol`, non-member
/// above `non_member_tol`.
pub fn morera_membership(
    h: &Field,
    v: Quaternion,
    family: &[ContourSpec],
    sign: ExpSign,
    side: DifferentialSide,
    member_tol: f64,
    non_member_tol: f64,
) -> Result<MoreraReport> {
    let integrals =
        family.iter().map(|c| Ok(slice_theorem_integral(h, v, c, sign, side)?.norm())).collect::<Result<Vec<f64>>>()?;
    let max = integrals.iter().fold(0.0f64, |m, &x| m.max(x));
    let verdict = if max < member_tol {
        Verdict::Member
    } else if max > non_member_tol {
        Verdict::NonMember
    } else {
        Verdict::Inconclusive
    };
    Ok(MoreraReport { integrals, max, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{witness_catalog, FieldSpec};

    type Q = Quaternion;

    fn family() -> Vec<ContourSpec> {
        contour_family(&DomainSpec::ball(Q::ZERO, 1.0), 256).unwrap()
    }

    #[test]
    fn examples() {
        let sq = FieldSpec::Monomial { n: 2, a: Q::ONE }.build();
        let r = morera_membership(&sq, Q::ZERO, &family(), ExpSign::Plus, DifferentialSide::Left, 1e-10, 1e-2).unwrap();
        assert_eq!(r.verdict, Verdict::Member);
        let conj = FieldSpec::Conj.build();
        let r =
            morera_membership(&conj, Q::ZERO, &family(), ExpSign::Plus, DifferentialSide::Left, 1e-10, 1e-2).unwrap();
        assert_eq!(r.verdict, Verdict::NonMember);
        // 2π r² with r = 0.45
        assert!((r.max - 2.0 * std::f64::consts::PI * 0.45 * 0.45).abs() < 1e-10);
        let f = FieldSpec::Identity.damped(Q::E1).build();
        let r = morera_membership(&f, Q::E1, &family(), ExpSign::Plus, DifferentialSide::Left, 1e-10, 1e-2).unwrap();
        assert_eq!(r.verdict, Verdict::Member);
    }

    #[test]
    fn family_shape() {
        let f = family();
        assert_eq!(f.len(), FAMILY_SIZE);
        assert!(f.iter().all(|c| c.center != 0.0 && c.center.abs() + c.radius < 1.0));
        assert!(contour_family(&DomainSpec::ball(Q::E1, 1.0), 64).is_err());
    }

    #[test]
    fn catalog_duality() {
        let v = Q::new(0.3, 0.5, -0.2, 0.4);
        for w in witness_catalog(v) {
            let r = morera_membership(&w.spec.build(), v, &family(), ExpSign::Plus, DifferentialSide::Left, 1e-8, 1e-2)
                .unwrap();
            let expect = if w.member { Verdict::Member } else { Verdict::NonMember };
            assert_eq!(r.verdict, expect, "{}: {}", w.name, r.max);
        }
    }

    #[test]
    fn other_readings_reject_members() {
        let v = Q::new(0.3, 0.5, -0.2, 0.4);
        let qa = FieldSpec::Monomial { n: 1, a: crate::field::WITNESS_A }.damped(v).build();
        let minus = morera_membership(&qa, v, &family(), ExpSign::Minus, DifferentialSide::Left, 1e-8, 1e-2).unwrap();
        assert!(minus.max > 1e-2);
        let right = morera_membership(&qa, v, &family(), ExpSign::Plus, DifferentialSide::Right, 1e-8, 1e-2).unwrap();
        assert!(right.max > 1e-2);
    }
}
