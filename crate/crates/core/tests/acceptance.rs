//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Runs at the default resolution. Variants come from a fresh calibration rather than
//! the compiled-in constant, so the whole chain is exercised.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use srlab_core::suite::{run_target, PointSet, Target};
use srlab_core::theorems::calibration::{calibrate, REQUIRED_RATIO};
use srlab_core::{SuiteConfig, VerificationReport};

const BP_BUDGET: Duration = Duration::from_secs(300);

struct Line {
    criterion: u8,
    ok: bool,
    detail: String,
}

fn report(cfg: &SuiteConfig, t: Target) -> VerificationReport {
    run_target(cfg, t, PointSet::All).unwrap_or_else(|e| panic!("{}: {e}", t.name()))
}

/// All residuals under `prefixes` pass, and there is at least one.
fn rows_ok(r: &VerificationReport, prefixes: &[&str]) -> bool {
    let rows: Vec<_> = r.residuals.iter().filter(|x| prefixes.iter().any(|p| x.test_id.starts_with(p))).collect();
    !rows.is_empty() && rows.iter().all(|x| x.ok())
}

fn first_failures(r: &VerificationReport) -> String {
    let f: Vec<String> = r.failures().take(3).map(|x| format!("{}={:.2e}", x.test_id, x.norm)).collect();
    if f.is_empty() {
        String::new()
    } else {
        format!(" [failing: {}]", f.join(", "))
    }
}

fn bp(cfg: &SuiteConfig) -> Line {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let start = Instant::now();
    let r = pool.install(|| report(cfg, Target::Bp));
    let elapsed = start.elapsed();
    let interior =
        r.residuals.iter().filter(|x| x.test_id.contains("/interior-") && !x.test_id.starts_with("eps")).count();
    let exterior =
        r.residuals.iter().filter(|x| x.test_id.contains("/exterior-") && !x.test_id.starts_with("eps")).count();
    let cases_ok = r.residuals.iter().filter(|x| !x.test_id.starts_with("eps")).all(|x| x.ok() && x.tolerance == 2e-2);
    let doubling = r.convergence.map_or(f64::INFINITY, |c| c.delta);
    let ok = r.pass && cases_ok && interior == 15 && exterior == 9 && doubling < 5e-3 && elapsed < BP_BUDGET;
    let worst_in = r.residuals.iter().filter(|x| x.test_id.contains("/interior-")).fold(0.0f64, |m, x| m.max(x.norm));
    let worst_out = r.residuals.iter().filter(|x| x.test_id.contains("/exterior-")).fold(0.0f64, |m, x| m.max(x.norm));
    Line {
        criterion: 1,
        ok,
        detail: format!(
            "Borel-Pompeiu: interior rel {worst_in:.2e} ({interior} rows), exterior abs {worst_out:.2e} ({exterior} rows) < 2e-2; \
             doubling {doubling:.2e} < 5e-3; single-core {:.1}s < 300s{}",
            elapsed.as_secs_f64(),
            first_failures(&r)
        ),
    }
}

fn cauchy_slice(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::CauchySlice);
    let n = cfg.node_counts().contour;
    let ok = n == 256 && rows_ok(&r, &["formula/"]) && rows_ok(&r, &["decay/"]) && r.pass;
    Line {
        criterion: 2,
        ok,
        detail: format!(
            "slice Cauchy formula: max error {:.2e} < 1e-9 at N={n}; worst error ratio per doubling {:.1e} < 0.5{}",
            r.max_norm("formula/"),
            r.max_norm("decay/"),
            first_failures(&r)
        ),
    }
}

fn g_exp(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::GExp);
    let count = r.residuals.len();
    let ok = r.pass && count == 200 && rows_ok(&r, &["left/", "right/"]);
    Line {
        criterion: 3,
        ok,
        detail: format!(
            "exponential conjugation of G: left {:.2e}, right {:.2e} < 5e-6 over 100 cases{}",
            r.max_norm("left/"),
            r.max_norm("right/"),
            first_failures(&r)
        ),
    }
}

fn regularity(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::Regularity);
    let members = r.residuals.iter().filter(|x| x.test_id.starts_with("cr/") && x.tolerance == 1e-6).count();
    let non = r.residuals.iter().filter(|x| x.test_id.starts_with("cr/") && x.tolerance == 1e-2).count();
    let ok = r.pass && members == 5 && non == 3;
    let member_max = r
        .residuals
        .iter()
        .filter(|x| (x.test_id.starts_with("cr/") || x.test_id.starts_with("gv/")) && x.tolerance == 1e-6)
        .fold(0.0f64, |m, x| m.max(x.norm));
    let non_min = r
        .residuals
        .iter()
        .filter(|x| (x.test_id.starts_with("cr/") || x.test_id.starts_with("gv/")) && x.tolerance == 1e-2)
        .fold(f64::INFINITY, |m, x| m.min(x.norm));
    Line {
        criterion: 4,
        ok,
        detail: format!(
            "kernel/slice equivalence: {members} members max {member_max:.2e} < 1e-6, {non} non-members min {non_min:.2e} > 1e-2{}",
            first_failures(&r)
        ),
    }
}

fn representation(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::Representation);
    let s = report(cfg, Target::Splitting);
    let ok = r.pass && s.pass && rows_ok(&r, &["formula/", "pq/", "qp/"]) && rows_ok(&s, &["vekua-F/", "vekua-G/"]);
    Line {
        criterion: 5,
        ok,
        detail: format!(
            "representation {:.2e} < 1e-9; P∘Q {:.2e}, Q∘P {:.2e} < 1e-9; split Vekua {:.2e} < 1e-6{}{}",
            r.max_norm("formula/"),
            r.max_norm("pq/"),
            r.max_norm("qp/"),
            s.max_norm("vekua-F/").max(s.max_norm("vekua-G/")),
            first_failures(&r),
            first_failures(&s)
        ),
    }
}

fn covariance(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::Covariance);
    let identities = r.residuals.iter().filter(|x| x.test_id.starts_with("identity/")).count();
    let unperturbed = r.residuals.iter().filter(|x| x.test_id.starts_with("unperturbed/")).count();
    let ok = r.pass && identities >= 9 && unperturbed >= 3 && rows_ok(&r, &["identity/", "unperturbed/"]);
    Line {
        criterion: 6,
        ok,
        detail: format!(
            "conformal covariance: {:.2e} < 5e-6 over {identities} (map, weight) pairs; v=-u vs unperturbed {:.2e} < 5e-6{}",
            r.max_norm("identity/"),
            r.max_norm("unperturbed/"),
            first_failures(&r)
        ),
    }
}

fn series(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::Series);
    let ok = r.pass && rows_ok(&r, &["round-trip/", "forms/", "star0/"]) && r.max_norm("star0/") == 0.0;
    Line {
        criterion: 7,
        ok,
        detail: format!(
            "series: round trip {:.2e} < 1e-8; forms {:.2e} < 1e-12; *_0 vs classical {:.1e} (exact){}",
            r.max_norm("round-trip/"),
            r.max_norm("forms/"),
            r.max_norm("star0/"),
            first_failures(&r)
        ),
    }
}

fn morera(cfg: &SuiteConfig) -> Line {
    let r = report(cfg, Target::Morera);
    let member_max = r.residuals.iter().filter(|x| x.tolerance == 1e-8).fold(0.0f64, |m, x| m.max(x.norm));
    let non_min = r.residuals.iter().filter(|x| x.tolerance == 1e-2).fold(f64::INFINITY, |m, x| m.min(x.norm));
    Line {
        criterion: 8,
        ok: r.pass,
        detail: format!(
            "Morera over 20 contours: members max {member_max:.2e} < 1e-8, non-members min {non_min:.2e} > 1e-2{}",
            first_failures(&r)
        ),
    }
}

fn main() -> ExitCode {
    let a = calibrate();
    let b = calibrate();
    let worst = a.dimensions.iter().fold(f64::INFINITY, |m, d| m.min(d.ratio));
    let mut lines = vec![Line {
        criterion: 9,
        ok: a == b && a.pass && a.dimensions.iter().all(|d| d.ratio >= REQUIRED_RATIO),
        detail: format!(
            "calibration deterministic ({}), {} dimensions, weakest ratio {worst:.2e} >= 1e2",
            if a == b { "identical" } else { "differs" },
            a.dimensions.len()
        ),
    }];
    let cfg = SuiteConfig { variants: Some(a.variants), ..SuiteConfig::default() };

    lines.push(bp(&cfg));
    lines.extend([cauchy_slice, g_exp, regularity, representation, covariance, series, morera].map(|f| f(&cfg)));
    lines.sort_by_key(|l| l.criterion);

    for l in &lines {
        println!("{} criterion {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.criterion, l.detail);
    }
    if lines.iter().all(|l| l.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
