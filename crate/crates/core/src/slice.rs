//! Slice coordinates `q = x + 𝐢 y` and domain descriptors.

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// `x + 𝐢 y` with `y > 0` and `𝐢` a unit imaginary quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint {
    pub x: f64,
    pub y: f64,
    pub i: Quaternion,
}

/// Check that `i` is a unit imaginary quaternion, so `i² = −1`.
pub fn check_unit_imaginary(i: Quaternion) -> Result<()> {
    if i.q0.abs() > 1e-12 || (i.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidSlicePoint("slice unit must be a unit imaginary quaternion"));
    }
    Ok(())
}

impl SlicePoint {
    pub fn new(x: f64, y: f64, i: Quaternion) -> Result<Self> {
        check_unit_imaginary(i)?;
        if !(y > 0.0) {
            return Err(Error::InvalidSlicePoint("y must be positive"));
        }
        Ok(Self { x, y, i })
    }

    pub fn compose(&self) -> Quaternion {
        slice_compose(self)
    }
}

/// Branch `y > 0`, `𝐢 = 𝐪/‖𝐪‖`.
pub fn slice_decompose(q: Quaternion) -> Result<SlicePoint> {
    let y = q.vec_norm();
    if y == 0.0 {
        return Err(Error::RealAxisPoint);
    }
    Ok(SlicePoint { x: q.q0, y, i: q.vec() / y })
}

pub fn slice_compose(p: &SlicePoint) -> Quaternion {
    Quaternion::real(p.x) + p.i * p.y
}

/// `x + i y` for any real `y` (no branch restriction).
pub fn in_slice(x: f64, y: f64, i: Quaternion) -> Quaternion {
    Quaternion::real(x) + i * y
}

/// A bounded domain in ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSpec {
    Ball {
        center: Quaternion,
        radius: f64,
    },
    /// `{q : inner < ‖q − center‖ < outer}` with a real center; every slice trace is a planar annulus.
    AnnularSlice {
        center: f64,
        inner: f64,
        outer: f64,
    },
}

impl DomainSpec {
    pub fn ball(center: Quaternion, radius: f64) -> Self {
        DomainSpec::Ball { center, radius }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::Ball { center, radius } => {
                if !(radius > 0.0) || !center.is_finite() {
                    return Err(Error::DomainViolation("ball radius must be positive".into()));
                }
            }
            DomainSpec::AnnularSlice { inner, outer, .. } => {
                if !(inner >= 0.0 && outer > inner) {
                    return Err(Error::DomainViolation("annulus needs 0 <= inner < outer".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        match *self {
            DomainSpec::Ball { center, radius } => (q - center).norm() < radius,
            DomainSpec::AnnularSlice { center, inner, outer } => {
                let r = (q - Quaternion::real(center)).norm();
                inner < r && r < outer
            }
        }
    }

    /// Invariant under rotations of the imaginary units.
    pub fn axially_symmetric(&self) -> bool {
        match *self {
            DomainSpec::Ball { center, .. } => center.vec_norm() == 0.0,
            DomainSpec::AnnularSlice { .. } => true,
        }
    }

    /// The closure does not meet ℝ.
    pub fn avoids_real_axis(&self) -> bool {
        match *self {
            DomainSpec::Ball { center, radius } => center.vec_norm() > radius,
            DomainSpec::AnnularSlice { .. } => false,
        }
    }

    pub fn center(&self) -> Quaternion {
        match *self {
            DomainSpec::Ball { center, .. } => center,
            DomainSpec::AnnularSlice { center, .. } => Quaternion::real(center),
        }
    }

    pub fn outer_radius(&self) -> f64 {
        match *self {
            DomainSpec::Ball { radius, .. } => radius,
            DomainSpec::AnnularSlice { outer, .. } => outer,
        }
    }

    /// Uniform sample by rejection from the bounding cube.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Quaternion {
        let c = self.center();
        let r = self.outer_radius();
        loop {
            let d: [f64; 4] = std::array::from_fn(|_| rng.random_range(-r..r));
            let q = c + Quaternion::from(d);
            if self.contains(q) {
                return q;
            }
        }
    }

    /// Uniform sample restricted to points with `‖𝐪‖ ≥ min_vec`.
    pub fn sample_off_axis<R: Rng>(&self, rng: &mut R, min_vec: f64) -> Quaternion {
        loop {
            let q = self.sample(rng);
            if q.vec_norm() >= min_vec {
                return q;
            }
        }
    }
}

/// Uniformly distributed unit imaginary quaternion.
pub fn random_unit_imaginary<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let v =
            Quaternion::vector(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn decompose_examples() {
        let p = slice_decompose(Quaternion::new(1.0, 2.0, 0.0, 0.0)).unwrap();
        assert_eq!((p.x, p.y, p.i), (1.0, 2.0, Quaternion::E1));
        assert_eq!(slice_decompose(Quaternion::real(3.0)), Err(Error::RealAxisPoint));
        let p = slice_decompose(Quaternion::new(1.0, 1.0, 1.0, 0.0)).unwrap();
        let s = 2f64.sqrt();
        assert!((p.y - s).abs() < 1e-15);
        assert!(p.i.max_abs_diff(Quaternion::vector(1.0 / s, 1.0 / s, 0.0)) < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let q = SlicePoint::new(1.0, 2.0, Quaternion::E1).unwrap().compose();
        assert_eq!(q, Quaternion::new(1.0, 2.0, 0.0, 0.0));
        assert_eq!(SlicePoint::new(0.0, 1.0, Quaternion::E3).unwrap().compose(), Quaternion::E3);
        let s = 2f64.sqrt();
        let i = Quaternion::vector(1.0, 1.0, 0.0) / s;
        let q = SlicePoint::new(1.0, s, i).unwrap().compose();
        assert!(q.max_abs_diff(Quaternion::new(1.0, 1.0, 1.0, 0.0)) < 1e-15);
        assert!(SlicePoint::new(0.0, -1.0, Quaternion::E1).is_err());
        assert!(SlicePoint::new(0.0, 1.0, Quaternion::ONE).is_err());
    }

    #[test]
    fn domain_flags() {
        let b = DomainSpec::ball(Quaternion::E1 * 2.0, 1.0);
        assert!(b.avoids_real_axis());
        assert!(!b.axially_symmetric());
        let c = DomainSpec::ball(Quaternion::ZERO, 0.9);
        assert!(!c.avoids_real_axis());
        assert!(c.axially_symmetric());
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, r#"{"kind":"ball","center":[0.0,2.0,0.0,0.0],"radius":1.0}"#);
        let back: DomainSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn samples_stay_inside() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let d = DomainSpec::AnnularSlice { center: 0.5, inner: 0.2, outer: 0.8 };
        for _ in 0..200 {
            assert!(d.contains(d.sample(&mut rng)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn decompose_round_trip(c in prop::array::uniform4(-10.0f64..10.0)) {
            let q = Quaternion::from(c);
            prop_assume!(q.vec_norm() > 1e-6);
            let p = slice_decompose(q).unwrap();
            prop_assert!((p.i * p.i).max_abs_diff(Quaternion::real(-1.0)) < 1e-12);
            prop_assert!(slice_compose(&p).max_abs_diff(q) <= 1e-13 * (1.0 + q.norm()));
        }
    }
}
