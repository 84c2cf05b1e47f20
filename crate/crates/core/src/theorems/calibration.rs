//! Oracle-driven selection of formula readings.
//!
//! Three independent joint searches:
//! kernel bracket × orientation × assembly against Borel–Pompeiu reproduction,
//! Γ bracket × normalization against the covariance identity, and
//! exponent sign × differential side against Morera on catalog members.
//! Each dimension records the selected residual and the best residual among candidates
//! that differ from the selection in that dimension.

use serde::{Deserialize, Serialize};

use crate::field::{witness_catalog, Field};
use crate::kernels::KernelBracket;
use crate::operators::DEFAULT_H;
use crate::quat::{Quaternion, StructuralSet};
use crate::slice::DomainSpec;

use super::bp::{borel_pompeiu_eval, bp_error, expected, side_of, BpAssembly, BpQuadrature, BpSetup};
use super::covariance::{
    covariance_residual, test_maps, test_weights, CovarianceNormalization, GammaBracket, TEST_POINT,
};
use super::morera::{contour_family, morera_membership};
use super::{reference_f, reference_g, DifferentialSide, ExpSign, Orientation, Variants};

/// Selected residual must beat every alternative by this factor.
pub const REQUIRED_RATIO: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRecord {
    pub dimension: String,
    pub selected: String,
    pub selected_residual: f64,
    pub best_alternative: String,
    pub alternative_residual: f64,
    pub ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub variants: Variants,
    pub dimensions: Vec<DimensionRecord>,
    pub candidates: Vec<Candidate>,
    pub pass: bool,
}

fn name<T: Serialize>(t: &T) -> String {
    match serde_json::to_value(t) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

type Projection<K> = (&'static str, fn(&K) -> String);

/// Argmin over `scored`, plus one record per dimension.
fn select<K: Copy>(scored: &[(K, f64)], dims: &[Projection<K>]) -> (K, Vec<DimensionRecord>) {
    let best = scored.iter().min_by(|a, b| a.1.total_cmp(&b.1)).copied().expect("non-empty candidate set");
    let records = dims
        .iter()
        .map(|(dim, proj)| {
            let sel = proj(&best.0);
            let alt = scored.iter().filter(|c| proj(&c.0) != sel).min_by(|a, b| a.1.total_cmp(&b.1));
            let (alt_label, alt_res) = alt.map_or(("-".to_string(), f64::INFINITY), |c| (proj(&c.0), c.1));
            let ratio = if best.1 > 0.0 { alt_res / best.1 } else { f64::INFINITY };
            DimensionRecord {
                dimension: dim.to_string(),
                selected: sel,
                selected_residual: best.1,
                best_alternative: alt_label,
                alternative_residual: alt_res,
                ratio,
                passed: ratio >= REQUIRED_RATIO,
            }
        })
        .collect();
    (best.0, records)
}

fn score(r: crate::error::Result<f64>) -> f64 {
    match r {
        Ok(x) if x.is_finite() => x,
        _ => f64::INFINITY,
    }
}

type BpKey = (KernelBracket, Orientation, BpAssembly);

fn bp_candidates() -> Vec<(BpKey, f64)> {
    let psi = StructuralSet::STANDARD;
    let domain = DomainSpec::ball(Quaternion::E1 * 2.0, 1.0);
    let (f, g) = (reference_f().build(), reference_g().build());
    let (v, u) = (Quaternion::new(0.2, -0.3, 0.1, 0.4), Quaternion::new(-0.1, 0.2, 0.5, -0.3));
    let points = [Quaternion::new(0.1, 2.2, 0.3, -0.2), Quaternion::new(0.0, 3.5, 0.2, 0.0)];
    let quadrature =
        BpQuadrature { boundary: [16, 16, 32], angular: [12, 12, 24], radial: 12, eps: BpQuadrature::DEFAULT_EPS };
    let mut out = Vec::new();
    for bracket in KernelBracket::ALL {
        for orientation in Orientation::ALL {
            for assembly in BpAssembly::ALL {
                let setup = BpSetup { quadrature, bracket, orientation, assembly };
                let r = points.iter().try_fold(0.0f64, |m, &x| {
                    let lhs = borel_pompeiu_eval(&psi, v, u, &f, &g, x, &domain, &setup)?;
                    Ok(m.max(bp_error(lhs, expected(&f, &g, x, &domain)?, side_of(&domain, x)?)))
                });
                out.push(((bracket, orientation, assembly), score(r)));
            }
        }
    }
    out
}

type CovKey = (GammaBracket, CovarianceNormalization);

fn covariance_candidates() -> Vec<(CovKey, f64)> {
    let f = reference_f().build();
    let mut out = Vec::new();
    for gamma in GammaBracket::ALL {
        for norm in CovarianceNormalization::ALL {
            let r = test_maps().iter().try_fold(0.0f64, |m, t| {
                test_weights().iter().try_fold(m, |m, &(u, v)| {
                    Ok(m.max(covariance_residual(t, u, v, &f, TEST_POINT, DEFAULT_H, gamma, norm)?.norm()))
                })
            });
            out.push(((gamma, norm), score(r)));
        }
    }
    out
}

type MoreraKey = (ExpSign, DifferentialSide);

/// Weight used by the Morera calibration; generic so no slice is orthogonal to it by accident.
pub const MORERA_WEIGHT: Quaternion = Quaternion::new(0.3, 0.5, -0.2, 0.4);

fn morera_candidates() -> Vec<(MoreraKey, f64)> {
    let family = contour_family(&DomainSpec::ball(Quaternion::ZERO, 1.0), 256).expect("valid family");
    let members: Vec<Field> =
        witness_catalog(MORERA_WEIGHT).into_iter().filter(|w| w.member).map(|w| w.spec.build()).collect();
    let mut out = Vec::new();
    for sign in ExpSign::ALL {
        for side in DifferentialSide::ALL {
            let r = members.iter().try_fold(0.0f64, |m, h| {
                Ok(m.max(morera_membership(h, MORERA_WEIGHT, &family, sign, side, 0.0, f64::INFINITY)?.max))
            });
            out.push(((sign, side), score(r)));
        }
    }
    out
}

fn labelled<K>(scored: &[(K, f64)], label: impl Fn(&K) -> String) -> Vec<Candidate> {
    scored.iter().map(|(k, r)| Candidate { label: label(k), residual: *r }).collect()
}

/// Run all three searches.
pub fn calibrate() -> Calibration {
    let (bp, cov, mor) = {
        let (bp, (cov, mor)) = rayon::join(bp_candidates, || rayon::join(covariance_candidates, morera_candidates));
        (bp, cov, mor)
    };
    let (bp_sel, mut dims) = select(
        &bp,
        &[
            ("kernel-bracket", |k: &BpKey| name(&k.0)),
            ("orientation", |k: &BpKey| name(&k.1)),
            ("bp-assembly", |k: &BpKey| name(&k.2)),
        ],
    );
    let (cov_sel, d) = select(
        &cov,
        &[("gamma-bracket", |k: &CovKey| name(&k.0)), ("covariance-normalization", |k: &CovKey| name(&k.1))],
    );
    dims.extend(d);
    let (mor_sel, d) =
        select(&mor, &[("morera-sign", |k: &MoreraKey| name(&k.0)), ("differential-side", |k: &MoreraKey| name(&k.1))]);
    dims.extend(d);

    let variants = Variants {
        kernel_bracket: bp_sel.0,
        orientation: bp_sel.1,
        bp_assembly: bp_sel.2,
        gamma_bracket: cov_sel.0,
        covariance_normalization: cov_sel.1,
        morera_sign: mor_sel.0,
        differential_side: mor_sel.1,
    };
    let candidates = labelled(&bp, |k| format!("bp:{}/{}/{}", name(&k.0), name(&k.1), name(&k.2)))
        .into_iter()
        .chain(labelled(&cov, |k| format!("covariance:{}/{}", name(&k.0), name(&k.1))))
        .chain(labelled(&mor, |k| format!("morera:{}/{}", name(&k.0), name(&k.1))))
        .collect();
    let pass = dims.iter().all(|d| d.passed);
    Calibration { variants, dimensions: dims, candidates, pass }
}
