//! Verification targets over the witness catalog.
//!
//! Every target draws its random inputs from its own ChaCha8 stream of the configured seed,
//! evaluates cases in parallel and collects them in case order, so reports are identical
//! for any worker count.

use std::str::FromStr;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::field::{exp_checked, witness_catalog, Field, FieldSpec, Witness, WITNESS_A, WITNESS_C};
use crate::operators::{
    cr_v_residual, g_apply, gr_apply, grv_apply, gv_apply, v_regularity_report, RegularityThresholds, DEFAULT_H,
};
use crate::quadrature::{ContourSpec, Resolution};
use crate::quat::{Quaternion, StructuralSet};
use crate::series::{
    series_eval, series_eval_resummed, series_fit, star_v, VSeries, DEFAULT_FIT_RADIUS, DEFAULT_ORDER,
};
use crate::slice::{in_slice, random_unit_imaginary, DomainSpec, SlicePoint};
use crate::theorems::bp::{
    borel_pompeiu_eval, bp_error, cauchy_global_eval, expected, side_of, BpQuadrature, BpSetup, Side,
};
use crate::theorems::cauchy::{cauchy_slice_eval, slice_theorem_integral};
use crate::theorems::covariance::{
    covariance_classical_residual, covariance_residual, g_gamma_apply, inverse_transport, test_maps, test_weights,
    transport, TEST_POINT,
};
use crate::theorems::morera::{contour_family, morera_membership};
use crate::theorems::representation::{join_value, pq_roundtrip, representation_v, splitting_v};
use crate::theorems::{
    reference_f, reference_g, Convergence, ConvergenceKind, Residual, SuiteReport, Variants, VerificationReport,
};

type Q = Quaternion;

/// Generic weight used where a single `v` is needed.
pub const SUITE_WEIGHT: Q = Q::new(0.3, -0.4, 0.6, 0.2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Bp,
    CauchyGlobal,
    CauchySlice,
    Representation,
    Splitting,
    Covariance,
    Morera,
    Series,
    GExp,
    Regularity,
}

impl Target {
    pub const ALL: [Self; 10] = [
        Self::Bp,
        Self::CauchyGlobal,
        Self::CauchySlice,
        Self::Representation,
        Self::Splitting,
        Self::Covariance,
        Self::Morera,
        Self::Series,
        Self::GExp,
        Self::Regularity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Bp => "bp",
            Target::CauchyGlobal => "cauchy-global",
            Target::CauchySlice => "cauchy-slice",
            Target::Representation => "representation",
            Target::Splitting => "splitting",
            Target::Covariance => "covariance",
            Target::Morera => "morera",
            Target::Series => "series",
            Target::GExp => "g-exp",
            Target::Regularity => "regularity",
        }
    }

    fn stream(self) -> u64 {
        Self::ALL.iter().position(|&t| t == self).expect("listed") as u64
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::ConfigParse(format!("unknown verify target {s:?}")))
    }
}

/// Which evaluation points the Borel–Pompeiu style targets use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointSet {
    Interior,
    Exterior,
    #[default]
    All,
}

impl PointSet {
    fn keeps(self, side: Side) -> bool {
        matches!(
            (self, side),
            (PointSet::All, _) | (PointSet::Interior, Side::Interior) | (PointSet::Exterior, Side::Exterior)
        )
    }
}

impl FromStr for PointSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(Self::Interior),
            "exterior" => Ok(Self::Exterior),
            "all" => Ok(Self::All),
            _ => Err(Error::ConfigParse(format!("unknown point set {s:?}"))),
        }
    }
}

fn rng_for(seed: u64, target: Target) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(target.stream());
    r
}

fn members(v: Q) -> Vec<Witness> {
    witness_catalog(v).into_iter().filter(|w| w.member).collect()
}

fn resolution_json(cfg: &SuiteConfig, r: &Resolution) -> Value {
    json!({ "level": cfg.resolution, "coarse": r, "fine": r.doubled() })
}

fn step_json(h: f64) -> Value {
    json!({ "h": h, "h-refined": h / 2.0 })
}

fn fd_convergence(cfg: &SuiteConfig, delta: f64) -> Convergence {
    Convergence::new(ConvergenceKind::StepHalving, delta, cfg.tolerances.finite_difference)
}

/// Run one target.
pub fn run_target(cfg: &SuiteConfig, target: Target, points: PointSet) -> Result<VerificationReport> {
    let variants = cfg.require_variants()?;
    let report = match target {
        Target::Bp => bp_target(cfg, variants, points, false)?,
        Target::CauchyGlobal => bp_target(cfg, variants, points, true)?,
        Target::CauchySlice => cauchy_slice_target(cfg, variants)?,
        Target::Representation => representation_target(cfg)?,
        Target::Splitting => splitting_target(cfg)?,
        Target::Covariance => covariance_target(cfg, variants)?,
        Target::Morera => morera_target(cfg, variants)?,
        Target::Series => series_target(cfg)?,
        Target::GExp => g_exp_target(cfg)?,
        Target::Regularity => regularity_target(cfg)?,
    };
    Ok(report.with_variants(variants).finish())
}

/// Run several targets in parallel and merge by identity.
pub fn run_targets(cfg: &SuiteConfig, identity: &str, targets: &[Target], points: PointSet) -> Result<SuiteReport> {
    cfg.require_variants()?;
    let reports = targets.par_iter().map(|&t| run_target(cfg, t, points)).collect::<Result<Vec<_>>>()?;
    let params =
        json!({ "targets": targets.iter().map(|t| t.name()).collect::<Vec<_>>(), "tolerances": cfg.tolerances });
    Ok(SuiteReport::merge(identity, params, cfg.seed, reports))
}

pub fn run_all(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_targets(cfg, "all", &Target::ALL, PointSet::All)
}

// ---------------------------------------------------------------- Borel–Pompeiu

/// The Borel–Pompeiu domain: a unit ball whose closure stays √3 away from the real axis.
pub fn bp_domain() -> DomainSpec {
    DomainSpec::ball(Q::E1 * 2.0, 1.0)
}

pub const BP_INTERIOR: [Q; 5] = [
    Q::new(0.1, 2.2, 0.3, -0.2),
    Q::new(0.2, 1.7, -0.3, 0.4),
    Q::new(-0.3, 2.0, 0.5, 0.1),
    Q::new(0.0, 2.4, -0.2, -0.4),
    Q::new(0.35, 1.9, 0.1, 0.3),
];

pub const BP_EXTERIOR: [Q; 3] = [Q::new(0.0, 3.5, 0.2, 0.0), Q::new(0.5, 2.0, 1.4, 0.3), Q::new(-1.2, 1.2, -0.6, 0.5)];

/// A `(f, g, v, u)` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BpCase {
    pub label: &'static str,
    pub f: FieldSpec,
    pub g: FieldSpec,
    pub v: Q,
    pub u: Q,
}

const CASE_V: Q = Q::new(0.3, 0.2, -0.5, 0.1);
const CASE_U: Q = Q::new(-0.2, 0.4, 0.1, 0.3);

/// Three general C¹ configurations for the full formula.
pub fn bp_cases() -> Vec<BpCase> {
    vec![
        BpCase { label: "reference-unweighted", f: reference_f(), g: reference_g(), v: Q::ZERO, u: Q::ZERO },
        BpCase { label: "reference-weighted", f: reference_f(), g: reference_g(), v: Q::E1, u: Q::E2 },
        BpCase {
            label: "catalog-mixed",
            f: FieldSpec::Monomial { n: 1, a: WITNESS_A }.damped(CASE_V),
            g: FieldSpec::Conj,
            v: CASE_V,
            u: CASE_U,
        },
    ]
}

/// Kernel members for the Cauchy form: `f ∈ Ker G_v`, `g ∈ Ker G_{r,u}`.
pub fn cauchy_global_cases() -> Vec<BpCase> {
    vec![
        BpCase {
            label: "const-e1",
            f: FieldSpec::Const { c: WITNESS_C }.damped(Q::E1),
            g: FieldSpec::Zero,
            v: Q::E1,
            u: Q::ZERO,
        },
        BpCase {
            label: "members-weighted",
            f: FieldSpec::Monomial { n: 1, a: WITNESS_A }.damped(CASE_V),
            g: FieldSpec::Monomial { n: 2, a: Q::ONE }.damped(CASE_U),
            v: CASE_V,
            u: CASE_U,
        },
    ]
}

struct BpRow {
    id: String,
    x: Q,
    err: f64,
    doubling: f64,
    eps: f64,
}

fn bp_target(cfg: &SuiteConfig, variants: Variants, points: PointSet, cauchy: bool) -> Result<VerificationReport> {
    let psi = StructuralSet::STANDARD;
    let domain = bp_domain();
    let res = cfg.node_counts();
    let quadrature = BpQuadrature::from_resolution(&res);
    let setup = BpSetup {
        quadrature,
        bracket: variants.kernel_bracket,
        orientation: variants.orientation,
        assembly: variants.bp_assembly,
    };
    let cases = if cauchy { cauchy_global_cases() } else { bp_cases() };
    let labelled: Vec<(Side, usize, Q)> = BP_INTERIOR
        .iter()
        .enumerate()
        .map(|(k, &x)| (Side::Interior, k, x))
        .chain(BP_EXTERIOR.iter().enumerate().map(|(k, &x)| (Side::Exterior, k, x)))
        .filter(|(s, _, _)| points.keeps(*s))
        .collect();
    let jobs: Vec<(&BpCase, Side, usize, Q)> =
        cases.iter().flat_map(|c| labelled.iter().map(move |&(s, k, x)| (c, s, k, x))).collect();
    let tol = cfg.tolerances;

    let rows = jobs
        .par_iter()
        .map(|&(case, side, k, x)| {
            let (f, g) = (case.f.build(), case.g.build());
            let eval = |s: &BpSetup| {
                if cauchy {
                    cauchy_global_eval(&psi, case.v, case.u, &f, &g, x, &domain, s)
                } else {
                    borel_pompeiu_eval(&psi, case.v, case.u, &f, &g, x, &domain, s)
                }
            };
            let coarse = eval(&setup)?;
            let fine = eval(&BpSetup { quadrature: quadrature.doubled(), ..setup })?;
            let half_eps = match side {
                Side::Interior => eval(&BpSetup { quadrature: quadrature.with_eps(quadrature.eps / 2.0), ..setup })?,
                Side::Exterior => coarse,
            };
            let want = expected(&f, &g, x, &domain)?;
            debug_assert_eq!(side_of(&domain, x)?, side);
            let side_name = if side == Side::Interior { "interior" } else { "exterior" };
            Ok(BpRow {
                id: format!("{}/{side_name}-{k}", case.label),
                x,
                err: bp_error(coarse, want, side),
                doubling: (fine - coarse).norm(),
                eps: (half_eps - coarse).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let name = if cauchy { Target::CauchyGlobal } else { Target::Bp }.name();
    let mut rep = VerificationReport::discretized(name, cfg.seed);
    for r in &rows {
        rep.push(Residual::below(r.id.clone(), r.x.to_array(), r.err, tol.quadrature));
        rep.push(Residual::below(format!("eps-sensitivity/{}", r.id), r.x.to_array(), r.eps, tol.quadrature_doubling));
    }
    if cauchy {
        // The Cauchy form presumes kernel membership; confirm it at the evaluation points.
        for case in &cases {
            let (f, g) = (case.f.build(), case.g.build());
            for &(_, k, x) in &labelled {
                let gv = gv_apply(&psi, case.v, &f, x, DEFAULT_H)?.norm();
                let gr = grv_apply(&psi, case.u, &g, x, DEFAULT_H)?.norm();
                rep.push(Residual::below(format!("kernel/{}/{k}", case.label), x.to_array(), gv.max(gr), tol.member));
            }
        }
    }
    let delta = rows.iter().fold(0.0f64, |m, r| m.max(r.doubling));
    let params = json!({
        "domain": domain,
        "cases": cases.iter().map(|c| json!({"label": c.label, "f": c.f, "g": c.g, "v": c.v, "u": c.u})).collect::<Vec<_>>(),
        "points": format!("{points:?}").to_lowercase(),
        "eps": quadrature.eps,
        "relative-error": "interior: |lhs - (f+g)| / (1 + |f+g|); exterior: |lhs|",
    });
    Ok(rep.with_params(params).with_resolutions(resolution_json(cfg, &res)).with_convergence(Convergence::new(
        ConvergenceKind::Doubling,
        delta,
        tol.quadrature_doubling,
    )))
}

// ---------------------------------------------------------------- slice Cauchy

/// `count` points uniformly in the disc of radius `r` of random slices.
fn slice_points<R: Rng>(rng: &mut R, count: usize, r: f64) -> Vec<(Q, Q)> {
    (0..count)
        .map(|_| {
            let i = random_unit_imaginary(rng);
            let rho = r * rng.random::<f64>().sqrt();
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            (in_slice(rho * th.cos(), rho * th.sin(), i), i)
        })
        .collect()
}

fn cauchy_slice_target(cfg: &SuiteConfig, variants: Variants) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let n_final = cfg.node_counts().contour;
    let mut rng = rng_for(cfg.seed, Target::CauchySlice);
    let pts = slice_points(&mut rng, 10, 0.6);
    let v = SUITE_WEIGHT;
    let ladder: Vec<usize> =
        std::iter::successors(Some(32usize), |n| Some(n * 2)).take_while(|&n| n <= n_final).collect();
    let mut rep = VerificationReport::discretized(Target::CauchySlice.name(), cfg.seed);
    let mut delta = 0.0f64;
    let mut decay_table = serde_json::Map::new();

    for w in members(v) {
        let f = w.spec.build();
        let per_point = pts
            .par_iter()
            .map(|&(q, i)| {
                let spec = ContourSpec::new(0.0, 1.0, i, n_final)?;
                let exact = f.eval(q)?;
                let errs = ladder
                    .iter()
                    .map(|&n| Ok(cauchy_slice_eval(&f, v, q, &spec.with_nodes(n))?.max_abs_diff(exact)))
                    .collect::<Result<Vec<f64>>>()?;
                let coarse = cauchy_slice_eval(&f, v, q, &spec)?;
                let fine = cauchy_slice_eval(&f, v, q, &spec.with_nodes(2 * n_final))?;
                let thm =
                    slice_theorem_integral(&f, v, &spec, variants.morera_sign, variants.differential_side)?.norm();
                Ok((errs, (fine - coarse).norm(), thm))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut worst_ratio = 0.0f64;
        let mut worst_point = pts[0].0;
        for (k, ((errs, d, thm), &(q, _))) in per_point.iter().zip(&pts).enumerate() {
            rep.push(Residual::below(
                format!("formula/{}/{k}", w.name),
                q.to_array(),
                *errs.last().unwrap_or(&f64::NAN),
                tol.contour,
            ));
            rep.push(Residual::below(format!("theorem/{}/{k}", w.name), q.to_array(), *thm, tol.contour));
            delta = delta.max(*d);
            for pair in errs.windows(2) {
                // Below the roundoff floor there is nothing left to decay.
                let ratio = if pair[0] > 1e-12 { pair[1] / pair[0] } else { 0.0 };
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst_point = q;
                }
            }
        }
        rep.push(Residual::below(format!("decay/{}", w.name), worst_point.to_array(), worst_ratio, 0.5));
        let max_by_n: Vec<f64> =
            (0..ladder.len()).map(|j| per_point.iter().fold(0.0f64, |m, p| m.max(p.0[j]))).collect();
        decay_table.insert(w.name.clone(), json!(max_by_n));
    }

    // At v = 0 the formula separates the catalog exactly as G does.
    for w in witness_catalog(Q::ZERO) {
        let f = w.spec.build();
        let worst = pts.iter().take(5).try_fold(0.0f64, |m, &(q, i)| {
            let spec = ContourSpec::new(0.0, 1.0, i, n_final)?;
            Ok::<f64, Error>(m.max(cauchy_slice_eval(&f, Q::ZERO, q, &spec)?.max_abs_diff(f.eval(q)?)))
        })?;
        let r = if w.member {
            Residual::below(format!("v0/{}", w.name), [0.0; 4], worst, tol.contour)
        } else {
            Residual::above(format!("v0/{}", w.name), [0.0; 4], worst, tol.non_member)
        };
        rep.push(r);
    }

    let params = json!({ "v": v, "contour": {"center": 0.0, "radius": 1.0}, "nodes": ladder, "max-error-by-nodes": decay_table,
                         "decay": "each doubling of N at least halves the error above 1e-12" });
    Ok(rep
        .with_params(params)
        .with_resolutions(json!({ "level": cfg.resolution, "contour": n_final, "refined": 2 * n_final }))
        .with_convergence(Convergence::new(ConvergenceKind::Doubling, delta, tol.contour)))
}

// ---------------------------------------------------------------- representation

fn orthogonal_unit<R: Rng>(rng: &mut R, i: Q) -> Q {
    loop {
        let r = random_unit_imaginary(rng);
        let j = r - i * r.dot(i);
        if j.norm() > 0.1 {
            return j / j.norm();
        }
    }
}

fn representation_target(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let mut rng = rng_for(cfg.seed, Target::Representation);
    let v = SUITE_WEIGHT;
    let tuples: Vec<(Q, Q, f64, f64)> = (0..50)
        .map(|_| {
            let (i, iq) = (random_unit_imaginary(&mut rng), random_unit_imaginary(&mut rng));
            (i, iq, rng.random_range(-0.5..0.5), rng.random_range(0.05..0.6))
        })
        .collect();
    let ball = DomainSpec::ball(Q::ZERO, 0.9);
    let samples: Vec<Q> = (0..100).map(|_| ball.sample_off_axis(&mut rng, 0.05)).collect();
    let pairs: Vec<(Q, Q)> = members(v)
        .iter()
        .map(|_| {
            let i = random_unit_imaginary(&mut rng);
            (i, orthogonal_unit(&mut rng, i))
        })
        .collect();

    let mut rep = VerificationReport::exact(Target::Representation.name(), cfg.seed);
    for (w, &(i, j)) in members(v).iter().zip(&pairs) {
        let f = w.spec.build();
        for (k, &(i, iq, x, y)) in tuples.iter().enumerate() {
            let target = in_slice(x, y, iq);
            let a = representation_v(&f, v, x, y, i, iq)?;
            rep.push(Residual::below(
                format!("formula/{}/{k}", w.name),
                target.to_array(),
                a.max_abs_diff(f.eval(target)?),
                tol.representation,
            ));
            let b = representation_v(&f, v, x, -y, i, -iq)?;
            let c = representation_v(&f, v, x, y, -i, iq)?;
            rep.push(Residual::below(
                format!("swap/{}/{k}", w.name),
                target.to_array(),
                a.max_abs_diff(b).max(a.max_abs_diff(c)),
                tol.algebraic,
            ));
        }
        let (pq, qp) = pq_roundtrip(&f, v, i, j, &samples)?;
        rep.push(Residual::below(format!("pq/{}", w.name), i.to_array(), pq, tol.representation));
        rep.push(Residual::below(format!("qp/{}", w.name), i.to_array(), qp, tol.representation));
    }
    let params = json!({ "v": v, "tuples": tuples.len(), "round-trip-samples": samples.len(), "slice-pairs": pairs });
    Ok(rep.with_params(params))
}

// ---------------------------------------------------------------- splitting

fn splitting_target(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let mut rng = rng_for(cfg.seed, Target::Splitting);
    let v = SUITE_WEIGHT;
    let mut rep = VerificationReport::discretized(Target::Splitting.name(), cfg.seed);
    let mut delta = 0.0f64;
    let mut pairs = Vec::new();
    for w in members(v) {
        let f = w.spec.build();
        let i = random_unit_imaginary(&mut rng);
        let j = orthogonal_unit(&mut rng, i);
        pairs.push((i, j));
        let (big_f, big_g) = splitting_v(&f, i, j)?;
        for k in 0..20 {
            let (x, y) = (rng.random_range(-0.6..0.6), rng.random_range(0.05..0.6));
            let p = SlicePoint::new(x, y, i)?;
            let z = p.compose();
            for (part, h) in [("F", &big_f), ("G", &big_g)] {
                let r = cr_v_residual(h, &p, v, DEFAULT_H)?;
                let r2 = cr_v_residual(h, &p, v, DEFAULT_H / 2.0)?;
                delta = delta.max((r - r2).norm());
                rep.push(Residual::below(format!("vekua-{part}/{}/{k}", w.name), z.to_array(), r.norm(), tol.member));
            }
            let joined = join_value(big_f.eval(z)?, big_g.eval(z)?, j);
            rep.push(Residual::below(
                format!("join/{}/{k}", w.name),
                z.to_array(),
                joined.max_abs_diff(f.eval(z)?),
                tol.algebraic,
            ));
        }
    }
    Ok(rep
        .with_params(json!({ "v": v, "slice-pairs": pairs, "points-per-member": 20 }))
        .with_resolutions(step_json(DEFAULT_H))
        .with_convergence(fd_convergence(cfg, delta)))
}

// ---------------------------------------------------------------- covariance

fn covariance_target(cfg: &SuiteConfig, variants: Variants) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let (gb, nb) = (variants.gamma_bracket, variants.covariance_normalization);
    let f = reference_f().build();
    let x = TEST_POINT;
    let maps = test_maps();
    let weights = test_weights();
    let mut rep = VerificationReport::discretized(Target::Covariance.name(), cfg.seed);
    let mut delta = 0.0f64;
    for (m, t) in maps.iter().enumerate() {
        for (k, &(u, v)) in weights.iter().enumerate() {
            let r = covariance_residual(t, u, v, &f, x, DEFAULT_H, gb, nb)?;
            let r2 = covariance_residual(t, u, v, &f, x, DEFAULT_H / 2.0, gb, nb)?;
            delta = delta.max((r - r2).norm());
            rep.push(Residual::below(format!("identity/T{m}/w{k}"), x.to_array(), r.norm(), tol.finite_difference));
            if (u + v).norm() == 0.0 {
                let c = covariance_classical_residual(t, u, &f, x, DEFAULT_H, nb)?;
                rep.push(Residual::below(
                    format!("unperturbed/T{m}/w{k}"),
                    x.to_array(),
                    c.norm(),
                    tol.finite_difference,
                ));
            }
        }
    }

    // Transport of membership: W_T⁻¹ of a G_u member is killed by G_Γ, and back.
    let (t, (u, v)) = (maps[1], weights[2]);
    let y = t.apply(x)?;
    let dom = DomainSpec::ball(x, 0.3);
    let thresholds = RegularityThresholds { member: tol.member, non_member: tol.non_member };
    let member = FieldSpec::Monomial { n: 2, a: Q::ONE }.damped(u).build();
    let pulled = inverse_transport(&t, v, &member);
    rep.push(Residual::below(
        "transport/g-gamma-member",
        y.to_array(),
        g_gamma_apply(&t, u, v, &pulled, y, DEFAULT_H, gb, nb)?.norm(),
        tol.member,
    ));
    let back = v_regularity_report(&transport(&t, v, &pulled), u, &dom, 20, cfg.seed, thresholds)?;
    rep.push(Residual::below("transport/regular-member", x.to_array(), back.max_gv.max(back.max_cr), tol.member));
    rep.push(Residual::above(
        "transport/g-gamma-non-member",
        y.to_array(),
        g_gamma_apply(&t, u, v, &f, y, DEFAULT_H, gb, nb)?.norm(),
        tol.non_member,
    ));
    let back = v_regularity_report(&transport(&t, v, &f), u, &dom, 20, cfg.seed, thresholds)?;
    rep.push(Residual::above(
        "transport/regular-non-member",
        x.to_array(),
        back.max_gv.min(back.max_cr),
        tol.non_member,
    ));

    let params = json!({
        "f": reference_f(),
        "x": x,
        "maps": maps.iter().map(|t| t.coefficients()).collect::<Vec<_>>(),
        "weights": weights,
    });
    Ok(rep.with_params(params).with_resolutions(step_json(DEFAULT_H)).with_convergence(fd_convergence(cfg, delta)))
}

// ---------------------------------------------------------------- Morera

fn morera_target(cfg: &SuiteConfig, variants: Variants) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let n = cfg.node_counts().contour;
    let domain = DomainSpec::ball(Q::ZERO, 1.0);
    let family = contour_family(&domain, n)?;
    let fine: Vec<ContourSpec> = family.iter().map(|c| c.with_nodes(2 * n)).collect();
    let weights = [Q::ZERO, Q::E1, SUITE_WEIGHT];
    let cases: Vec<(usize, Q, Witness)> =
        weights.iter().enumerate().flat_map(|(k, &v)| witness_catalog(v).into_iter().map(move |w| (k, v, w))).collect();
    let (sign, side) = (variants.morera_sign, variants.differential_side);
    let rows = cases
        .par_iter()
        .map(|(k, v, w)| {
            let h = w.spec.build();
            let a = morera_membership(&h, *v, &family, sign, side, tol.morera_member, tol.non_member)?;
            let b = morera_membership(&h, *v, &fine, sign, side, tol.morera_member, tol.non_member)?;
            let d = a.integrals.iter().zip(&b.integrals).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            Ok((*k, *v, w.clone(), a.max, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = VerificationReport::discretized(Target::Morera.name(), cfg.seed);
    let mut delta = 0.0f64;
    for (k, v, w, max, d) in rows {
        delta = delta.max(d);
        let id = format!("w{k}/{}", w.name);
        rep.push(if w.member {
            Residual::below(id, v.to_array(), max, tol.morera_member)
        } else {
            Residual::above(id, v.to_array(), max, tol.non_member)
        });
    }
    let params = json!({
        "weights": weights,
        "domain": domain,
        "contours": family.iter().map(|c| json!({"center": c.center, "radius": c.radius, "i": c.i})).collect::<Vec<_>>(),
        "sign": sign,
        "differential-side": side,
    });
    Ok(rep
        .with_params(params)
        .with_resolutions(json!({ "level": cfg.resolution, "contour": n, "refined": 2 * n }))
        .with_convergence(Convergence::new(ConvergenceKind::Doubling, delta, tol.contour)))
}

// ---------------------------------------------------------------- series

/// `(Σ qⁿaₙ) * (Σ qⁿbₙ)` by accumulating every `a_i b_j` into degree `i + j`.
pub fn classical_star_product(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::ZERO; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += *ai * *bj;
        }
    }
    out
}

fn series_target(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let n = cfg.node_counts().contour;
    let mut rng = rng_for(cfg.seed, Target::Series);
    let v = SUITE_WEIGHT;
    let mut rep = VerificationReport::discretized(Target::Series.name(), cfg.seed);
    let mut delta = 0.0f64;
    let ball = DomainSpec::ball(Q::ZERO, 0.35);
    for w in members(v) {
        let f = w.spec.build();
        let i = random_unit_imaginary(&mut rng);
        let s = series_fit(&f, v, i, DEFAULT_FIT_RADIUS, DEFAULT_ORDER, n)?;
        let s2 = series_fit(&f, v, i, DEFAULT_FIT_RADIUS, DEFAULT_ORDER, 2 * n)?;
        delta = s.coeffs.iter().zip(&s2.coeffs).fold(delta, |m, (a, b)| m.max(a.max_abs_diff(*b)));
        for k in 0..20 {
            let q = ball.sample_off_axis(&mut rng, 1e-3);
            let direct = series_eval(&s, q)?;
            rep.push(Residual::below(
                format!("round-trip/{}/{k}", w.name),
                q.to_array(),
                direct.max_abs_diff(f.eval(q)?),
                tol.series_round_trip,
            ));
            let resummed = series_eval_resummed(&s, q)?;
            rep.push(Residual::below(
                format!("forms/{}/{k}", w.name),
                q.to_array(),
                direct.max_abs_diff(resummed),
                tol.algebraic,
            ));
        }
    }
    // *_0 against the classical product, coefficient by coefficient.
    for k in 0..5 {
        let mut draw = |len: usize| -> Vec<Q> {
            let mut c: Vec<Q> = (0..len)
                .map(|_| Q::from(std::array::from_fn::<f64, 4, _>(|_| rng.random_range(-3i32..=3) as f64)))
                .collect();
            c.resize(2 * len - 1, Q::ZERO);
            c
        };
        let (a, b) = (draw(5), draw(5));
        let star = star_v(&VSeries::new(Q::ZERO, a.clone()), &VSeries::new(Q::ZERO, b.clone()))?;
        let classical = classical_star_product(&a[..5], &b[..5]);
        let diff = star.coeffs.iter().zip(&classical).fold(0.0f64, |m, (x, y)| m.max(x.max_abs_diff(*y)));
        let same_len = star.coeffs.len() == classical.len();
        rep.push(Residual::below(
            format!("star0/{k}"),
            [0.0; 4],
            if same_len { diff } else { f64::INFINITY },
            f64::MIN_POSITIVE,
        ));
    }
    let params = json!({ "v": v, "order": DEFAULT_ORDER, "fit-radius": DEFAULT_FIT_RADIUS, "eval-radius": 0.35 });
    Ok(rep
        .with_params(params)
        .with_resolutions(json!({ "level": cfg.resolution, "contour": n, "refined": 2 * n }))
        .with_convergence(Convergence::new(ConvergenceKind::Doubling, delta, tol.contour)))
}

// ---------------------------------------------------------------- G-Exp and regularity

/// `‖G_v f − e^{−⟨x,v⟩} G[e^{⟨·,v⟩} f]‖` and its right-sided analogue.
pub fn g_exp_residuals(f: &Field, v: Q, x: Q, h: f64) -> Result<(Q, Q)> {
    let psi = StructuralSet::STANDARD;
    let lifted = f.exp_weighted(v, 1.0);
    let back = exp_checked(-x.dot(v))?;
    let left = gv_apply(&psi, v, f, x, h)? - g_apply(&psi, &lifted, x, h)? * back;
    let right = grv_apply(&psi, v, f, x, h)? - gr_apply(&psi, &lifted, x, h)? * back;
    Ok((left, right))
}

fn g_exp_target(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let mut rng = rng_for(cfg.seed, Target::GExp);
    let cases: Vec<(FieldSpec, Q, Q)> = (0..100)
        .map(|_| {
            let f = FieldSpec::random_polynomial(&mut rng, 3, 4);
            let mut q = || Q::from(std::array::from_fn::<f64, 4, _>(|_| rng.random_range(-1.0..1.0)));
            let v = q();
            (f, v, q())
        })
        .collect();
    let rows = cases
        .par_iter()
        .map(|(spec, v, x)| {
            let f = spec.build();
            let (l, r) = g_exp_residuals(&f, *v, *x, DEFAULT_H)?;
            let (l2, r2) = g_exp_residuals(&f, *v, *x, DEFAULT_H / 2.0)?;
            Ok((*x, l.norm(), r.norm(), (l - l2).norm().max((r - r2).norm())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = VerificationReport::discretized(Target::GExp.name(), cfg.seed);
    let mut delta = 0.0f64;
    for (k, (x, l, r, d)) in rows.into_iter().enumerate() {
        rep.push(Residual::below(format!("left/{k}"), x.to_array(), l, tol.finite_difference));
        rep.push(Residual::below(format!("right/{k}"), x.to_array(), r, tol.finite_difference));
        delta = delta.max(d);
    }
    Ok(rep
        .with_params(json!({ "cases": 100, "field": "random cubic polynomial components", "v-range": [-1.0, 1.0], "x-range": [-1.0, 1.0] }))
        .with_resolutions(step_json(DEFAULT_H))
        .with_convergence(fd_convergence(cfg, delta)))
}

/// Domain for the regularity verdicts; kept off the real axis at its center.
pub fn regularity_domain() -> DomainSpec {
    DomainSpec::ball(Q::new(0.2, 0.3, -0.1, 0.2), 1.0)
}

fn regularity_target(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let tol = cfg.tolerances;
    let v = SUITE_WEIGHT;
    let domain = regularity_domain();
    let thresholds = RegularityThresholds { member: tol.member, non_member: tol.non_member };
    let mut rep = VerificationReport::discretized(Target::Regularity.name(), cfg.seed);
    let mut delta = 0.0f64;
    let mut rng = rng_for(cfg.seed, Target::Regularity);
    let probes: Vec<Q> = (0..10).map(|_| domain.sample_off_axis(&mut rng, 0.05)).collect();
    let psi = StructuralSet::STANDARD;
    let mut verdicts = serde_json::Map::new();
    for w in witness_catalog(v) {
        let f = w.spec.build();
        let r = v_regularity_report(&f, v, &domain, 200, cfg.seed, thresholds)?;
        let agree = r.agree();
        let worst = |pick: fn(&([f64; 4], f64, f64)) -> f64| {
            r.points.iter().max_by(|a, b| pick(a).total_cmp(&pick(b))).map_or([0.0; 4], |p| p.0)
        };
        let (cr_pt, gv_pt) = (worst(|p| p.1), worst(|p| p.2));
        if w.member {
            rep.push(Residual::below(format!("cr/{}", w.name), cr_pt, r.max_cr, tol.member));
            rep.push(Residual::below(format!("gv/{}", w.name), gv_pt, r.max_gv, tol.member));
        } else {
            rep.push(Residual::above(format!("cr/{}", w.name), cr_pt, r.max_cr, tol.non_member));
            rep.push(Residual::above(format!("gv/{}", w.name), gv_pt, r.max_gv, tol.non_member));
        }
        rep.push(Residual::below(format!("agree/{}", w.name), [0.0; 4], if agree { 0.0 } else { 1.0 }, 0.5));
        verdicts.insert(w.name.clone(), json!({ "cr": r.cr_verdict, "gv": r.gv_verdict }));
        for &q in &probes {
            let p = crate::slice::slice_decompose(q)?;
            let d_cr = (cr_v_residual(&f, &p, v, DEFAULT_H)? - cr_v_residual(&f, &p, v, DEFAULT_H / 2.0)?).norm();
            let d_gv = (gv_apply(&psi, v, &f, q, DEFAULT_H)? - gv_apply(&psi, v, &f, q, DEFAULT_H / 2.0)?).norm();
            delta = delta.max(d_cr).max(d_gv);
        }
    }
    Ok(rep
        .with_params(json!({ "v": v, "domain": domain, "samples": 200, "verdicts": verdicts }))
        .with_resolutions(step_json(DEFAULT_H))
        .with_convergence(fd_convergence(cfg, delta)))
}
