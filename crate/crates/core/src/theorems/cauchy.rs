//! Slice Cauchy integral formula and theorem for SR_v.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{exp_checked, Field};
use crate::quadrature::{contour_sum, ContourSpec};
use crate::quat::Quaternion;

use super::{DifferentialSide, ExpSign};

/// `(1/2π) ∮ e^{⟨ζ−q,v⟩} (ζ−q)⁻¹ dζ_i f(ζ)` with `dζ_i = −dζ i` over the circle of `spec`.
pub fn cauchy_slice_eval(f: &Field, v: Quaternion, q: Quaternion, spec: &ContourSpec) -> Result<Quaternion> {
    if !spec.encloses(q) {
        return Err(Error::QNotInDisc);
    }
    let i = spec.i;
    let s = contour_sum(
        |n| {
            let d = n.zeta - q;
            Ok(d.inverse()? * (-(n.dzeta * i)) * f.eval(n.zeta)? * exp_checked(d.dot(v))?)
        },
        spec,
    )?;
    Ok(s / (2.0 * PI))
}

/// `∮ e^{s⟨ζ,v⟩} f(ζ)` against `dζ_i` placed on the given side.
pub fn slice_theorem_integral(
    f: &Field,
    v: Quaternion,
    spec: &ContourSpec,
    sign: ExpSign,
    side: DifferentialSide,
) -> Result<Quaternion> {
    let i = spec.i;
    contour_sum(
        |n| {
            let dzi = -(n.dzeta * i);
            let h = f.eval(n.zeta)? * exp_checked(sign.sign() * n.zeta.dot(v))?;
            Ok(match side {
                DifferentialSide::Left => dzi * h,
                DifferentialSide::Right => h * dzi,
            })
        },
        spec,
    )
}

/// `∮ dζ_i e^{⟨ζ,v⟩} f(ζ)`; near zero for members of SR_v.
pub fn cauchy_slice_theorem_residual(f: &Field, v: Quaternion, spec: &ContourSpec) -> Result<Quaternion> {
    slice_theorem_integral(f, v, spec, ExpSign::Plus, DifferentialSide::Left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{witness_catalog, FieldSpec};
    use crate::slice::in_slice;

    type Q = Quaternion;

    fn unit(i: Q) -> ContourSpec {
        ContourSpec::new(0.0, 1.0, i, 256).unwrap()
    }

    #[test]
    fn formula_examples() {
        let c = Q::new(0.3, -1.0, 2.0, 0.5);
        let q = Q::new(0.3, 0.4, 0.0, 0.0);
        let r = cauchy_slice_eval(&Field::constant(c), Q::ZERO, q, &unit(Q::E1)).unwrap();
        assert!(r.max_abs_diff(c) < 1e-12);
        let sq = FieldSpec::Monomial { n: 2, a: Q::ONE }.build();
        assert!(cauchy_slice_eval(&sq, Q::ZERO, q, &unit(Q::E1)).unwrap().max_abs_diff(q * q) < 1e-10);
        let f = FieldSpec::Identity.damped(Q::E1).build();
        let r = cauchy_slice_eval(&f, Q::E1, q, &unit(Q::E1)).unwrap();
        assert!(r.max_abs_diff(f.eval(q).unwrap()) < 1e-9);
    }

    #[test]
    fn point_outside_disc_is_refused() {
        let s = unit(Q::E1);
        assert_eq!(cauchy_slice_eval(&Field::zero(), Q::ZERO, Q::E1 * 1.5, &s), Err(Error::QNotInDisc));
        assert_eq!(cauchy_slice_eval(&Field::zero(), Q::ZERO, Q::new(0.1, 0.0, 0.2, 0.0), &s), Err(Error::QNotInDisc));
    }

    #[test]
    fn theorem_examples() {
        let c =
            cauchy_slice_theorem_residual(&Field::constant(Q::new(1.0, 2.0, 3.0, 4.0)), Q::ZERO, &unit(Q::E1)).unwrap();
        assert!(c.norm() < 1e-13);
        let cube = FieldSpec::Monomial { n: 3, a: Q::ONE }.build();
        assert!(cauchy_slice_theorem_residual(&cube, Q::ZERO, &unit(Q::E2)).unwrap().norm() < 1e-11);
        let conj = FieldSpec::Conj.build();
        let r = cauchy_slice_theorem_residual(&conj, Q::ZERO, &unit(Q::E2)).unwrap();
        assert!((r.norm() - 2.0 * PI).abs() < 1e-10, "{r}");
    }

    #[test]
    fn members_reproduce_off_center_on_tilted_slices() {
        let v = Q::new(0.3, -0.4, 0.6, 0.2);
        let i = Q::vector(2.0, -1.0, 2.0) / 3.0;
        let spec = ContourSpec::new(0.2, 1.0, i, 256).unwrap();
        for w in witness_catalog(v).into_iter().filter(|w| w.member) {
            let f = w.spec.build();
            for q in [in_slice(0.4, 0.3, i), in_slice(-0.3, -0.5, i), in_slice(0.2, 0.0, i)] {
                let e = cauchy_slice_eval(&f, v, q, &spec).unwrap().max_abs_diff(f.eval(q).unwrap());
                assert!(e < 1e-9, "{} at {q}: {e}", w.name);
            }
            assert!(cauchy_slice_theorem_residual(&f, v, &spec).unwrap().norm() < 1e-12, "{}", w.name);
        }
    }
}
