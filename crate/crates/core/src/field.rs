//! Field handles `q ↦ f(q)` and the built-in witness catalog.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Exponents beyond this magnitude are refused instead of overflowing.
pub const MAX_EXPONENT: f64 = 500.0;

/// `e^{s}` for a precomputed exponent, refusing `|s| > 500`.
pub fn exp_checked(s: f64) -> Result<f64> {
    if !(s.abs() <= MAX_EXPONENT) {
        return Err(Error::OverflowRisk { exponent: s.abs() });
    }
    Ok(s.exp())
}

/// `e^{⟨q, v⟩}`.
pub fn exp_weight(q: Quaternion, v: Quaternion) -> Result<f64> {
    exp_checked(q.dot(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    C1,
    CInf,
}

/// Axis-aligned box outside of which a field refuses to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafeBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl SafeBox {
    pub fn cube(center: Quaternion, half: f64) -> Self {
        let c = center.to_array();
        Self { lo: c.map(|x| x - half), hi: c.map(|x| x + half) }
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        let c = q.to_array();
        (0..4).all(|k| self.lo[k] <= c[k] && c[k] <= self.hi[k])
    }
}

type EvalFn = dyn Fn(Quaternion) -> Result<Quaternion> + Send + Sync;

/// A deterministic, shareable evaluator `ℍ → ℍ`.
#[derive(Clone)]
pub struct Field {
    name: String,
    eval: Arc<EvalFn>,
    smoothness: Smoothness,
    safe_box: Option<SafeBox>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("name", &self.name)
            .field("smoothness", &self.smoothness)
            .field("safe_box", &self.safe_box)
            .finish()
    }
}

impl Field {
    pub fn new(name: impl Into<String>, f: impl Fn(Quaternion) -> Quaternion + Send + Sync + 'static) -> Self {
        Self::try_new(name, move |q| Ok(f(q)))
    }

    pub fn try_new(
        name: impl Into<String>,
        f: impl Fn(Quaternion) -> Result<Quaternion> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), eval: Arc::new(f), smoothness: Smoothness::CInf, safe_box: None }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Quaternion::ZERO)
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::new(format!("const{c}"), move |_| c)
    }

    pub fn with_safe_box(mut self, b: SafeBox) -> Self {
        self.safe_box = Some(b);
        self
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.smoothness = s;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn safe_box(&self) -> Option<SafeBox> {
        self.safe_box
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        if let Some(b) = &self.safe_box {
            if !b.contains(q) {
                return Err(Error::OutOfDomain { point: q.to_array() });
            }
        }
        (self.eval)(q)
    }

    /// `q ↦ e^{sign·⟨q,v⟩} f(q)`.
    pub fn exp_weighted(&self, v: Quaternion, sign: f64) -> Self {
        let inner = self.clone();
        let mut out = Self::try_new(format!("exp({sign:+}<q,{v}>)*{}", self.name), move |q| {
            Ok(inner.eval(q)? * exp_checked(sign * q.dot(v))?)
        });
        out.safe_box = self.safe_box;
        out.smoothness = self.smoothness;
        out
    }

    /// `q ↦ a·f(q)`.
    pub fn left_mul(&self, a: Quaternion) -> Self {
        let inner = self.clone();
        let mut out = Self::try_new(format!("{a}*{}", self.name), move |q| Ok(a * inner.eval(q)?));
        out.safe_box = self.safe_box;
        out.smoothness = self.smoothness;
        out
    }
}

/// A monomial term `coef · q0^p0 q1^p1 q2^p2 q3^p3` of a real polynomial component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub powers: [u32; 4],
}

impl Term {
    fn eval(&self, c: &[f64; 4]) -> f64 {
        (0..4).fold(self.coef, |acc, k| acc * c[k].powi(self.powers[k] as i32))
    }
}

/// Serializable description of a catalog field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Zero,
    Const {
        c: Quaternion,
    },
    Identity,
    /// `qⁿ a`
    Monomial {
        n: u32,
        a: Quaternion,
    },
    Conj,
    /// `q ↦ q0`
    RealPart,
    /// `q ↦ ‖q‖²`
    NormSquared,
    /// Each quaternion component is a real polynomial in `q0..q3`.
    Polynomial {
        components: [Vec<Term>; 4],
    },
    /// `e^{sign·⟨q,v⟩} f(q)` with `sign = ±1`.
    ExpWeighted {
        v: Quaternion,
        sign: f64,
        inner: Box<FieldSpec>,
    },
}

impl FieldSpec {
    pub fn build(&self) -> Field {
        match self {
            FieldSpec::Zero => Field::zero(),
            FieldSpec::Const { c } => Field::constant(*c),
            FieldSpec::Identity => Field::new("q", |q| q),
            FieldSpec::Monomial { n, a } => {
                let (n, a) = (*n, *a);
                Field::new(format!("q^{n}*{a}"), move |q| q.powi(n) * a)
            }
            FieldSpec::Conj => Field::new("conj(q)", |q| q.conj()),
            FieldSpec::RealPart => Field::new("q0", |q| Quaternion::real(q.q0)),
            FieldSpec::NormSquared => Field::new("|q|^2", |q| Quaternion::real(q.norm_sq())),
            FieldSpec::Polynomial { components } => {
                let comps = components.clone();
                Field::new("poly", move |q| {
                    let c = q.to_array();
                    Quaternion::from(std::array::from_fn::<f64, 4, _>(|k| comps[k].iter().map(|t| t.eval(&c)).sum()))
                })
            }
            FieldSpec::ExpWeighted { v, sign, inner } => inner.build().exp_weighted(*v, *sign),
        }
    }

    /// `e^{−⟨·,v⟩}·self`, the standard way to build members of SR_v.
    pub fn damped(self, v: Quaternion) -> Self {
        FieldSpec::ExpWeighted { v, sign: -1.0, inner: Box::new(self) }
    }

    /// Parse a catalog name: `const`, `identity`, `conj`, `real-part`, `norm-squared`,
    /// `monomial(n)`, or a JSON object.
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::UnknownField(e.to_string()));
        }
        match s {
            "zero" => Ok(FieldSpec::Zero),
            "const" => Ok(FieldSpec::Const { c: Quaternion::ONE }),
            "identity" => Ok(FieldSpec::Identity),
            "conj" => Ok(FieldSpec::Conj),
            "real-part" => Ok(FieldSpec::RealPart),
            "norm-squared" => Ok(FieldSpec::NormSquared),
            _ => {
                let n = s
                    .strip_prefix("monomial(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.trim().parse::<u32>().ok())
                    .ok_or_else(|| Error::UnknownField(s.to_string()))?;
                Ok(FieldSpec::Monomial { n, a: Quaternion::ONE })
            }
        }
    }

    /// Random polynomial components of total degree ≤ `deg` with coefficients in `[-1, 1]`.
    pub fn random_polynomial<R: Rng>(rng: &mut R, deg: u32, terms: usize) -> Self {
        let components = std::array::from_fn(|_| {
            (0..terms)
                .map(|_| {
                    let mut powers = [0u32; 4];
                    let total = rng.random_range(0..=deg);
                    for _ in 0..total {
                        powers[rng.random_range(0..4usize)] += 1;
                    }
                    Term { coef: rng.random_range(-1.0..1.0), powers }
                })
                .collect()
        });
        FieldSpec::Polynomial { components }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Zero => "zero".into(),
            FieldSpec::Const { .. } => "const".into(),
            FieldSpec::Identity => "identity".into(),
            FieldSpec::Monomial { n, a } if *a == Quaternion::ONE => format!("q^{n}"),
            FieldSpec::Monomial { n, .. } => format!("q^{n}*a"),
            FieldSpec::Conj => "conj".into(),
            FieldSpec::RealPart => "real-part".into(),
            FieldSpec::NormSquared => "norm-squared".into(),
            FieldSpec::Polynomial { .. } => "polynomial".into(),
            FieldSpec::ExpWeighted { sign, inner, .. } => {
                format!("exp{}<q,v>*{}", if *sign < 0.0 { "-" } else { "+" }, inner.label())
            }
        }
    }
}

/// A catalog entry with its expected membership in SR_v.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub spec: FieldSpec,
    pub member: bool,
}

/// The fixed off-slice coefficient used by the `q·a` member.
pub const WITNESS_A: Quaternion = Quaternion::new(0.5, -0.3, 0.7, 0.2);
/// The constant used by the `const` member.
pub const WITNESS_C: Quaternion = Quaternion::new(0.8, 0.1, -0.4, 0.6);

/// Members `e^{−⟨·,v⟩}×{c, q, q², q³, q·a}` and non-members `{conj, q0, ‖q‖²}`.
pub fn witness_catalog(v: Quaternion) -> Vec<Witness> {
    let members = [
        ("const", FieldSpec::Const { c: WITNESS_C }),
        ("q", FieldSpec::Identity),
        ("q^2", FieldSpec::Monomial { n: 2, a: Quaternion::ONE }),
        ("q^3", FieldSpec::Monomial { n: 3, a: Quaternion::ONE }),
        ("q*a", FieldSpec::Monomial { n: 1, a: WITNESS_A }),
    ];
    let non_members = [("conj", FieldSpec::Conj), ("q0", FieldSpec::RealPart), ("|q|^2", FieldSpec::NormSquared)];
    let wrap = |s: FieldSpec| if v == Quaternion::ZERO { s } else { s.damped(v) };
    members
        .into_iter()
        .map(|(n, s)| Witness { name: n.into(), spec: wrap(s), member: true })
        .chain(non_members.into_iter().map(|(n, s)| Witness { name: n.into(), spec: s, member: false }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_refused() {
        let f = FieldSpec::Const { c: Quaternion::ONE }.damped(Quaternion::E1 * 1000.0).build();
        assert!(matches!(f.eval(Quaternion::E1), Err(Error::OverflowRisk { .. })));
        assert!(f.eval(Quaternion::E1 * 0.1).is_ok());
    }

    #[test]
    fn safe_box_is_enforced() {
        let f = Field::new("q", |q| q).with_safe_box(SafeBox::cube(Quaternion::ZERO, 1.0));
        assert!(f.eval(Quaternion::E1 * 0.5).is_ok());
        assert!(matches!(f.eval(Quaternion::E1 * 2.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn parse_names() {
        assert_eq!(FieldSpec::parse("identity").unwrap(), FieldSpec::Identity);
        assert_eq!(FieldSpec::parse("monomial(3)").unwrap(), FieldSpec::Monomial { n: 3, a: Quaternion::ONE });
        assert!(FieldSpec::parse("bogus").is_err());
        let j = r#"{"kind":"exp-weighted","v":[0,1,0,0],"sign":-1.0,"inner":{"kind":"identity"}}"#;
        let s = FieldSpec::parse(j).unwrap();
        let q = Quaternion::new(0.1, 0.2, 0.3, 0.4);
        let expect = q * (-0.2f64).exp();
        assert!(s.build().eval(q).unwrap().max_abs_diff(expect) < 1e-15);
    }

    #[test]
    fn catalog_shape() {
        let c = witness_catalog(Quaternion::E1);
        assert_eq!(c.iter().filter(|w| w.member).count(), 5);
        assert_eq!(c.iter().filter(|w| !w.member).count(), 3);
    }

    #[test]
    fn eval_is_deterministic() {
        let f = FieldSpec::Monomial { n: 3, a: WITNESS_A }.damped(Quaternion::E2).build();
        let q = Quaternion::new(0.3, -0.2, 0.5, 0.1);
        assert_eq!(f.eval(q).unwrap().to_array(), f.eval(q).unwrap().to_array());
    }
}
