//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --release --test acceptance`.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use common::psi_deriv_double_series;
use pqgamma::campaigns::{
    affine_campaign, cm_psi_prime, cm_ratio, lcm_h, lcm_root, limit_table, logconvex_gamma,
    near_one_series_control, random_affine_sample, random_ratio_spec, random_two_point_spec,
    young_bracket, Corner,
};
use pqgamma::error::Result;
use pqgamma::gammafam::{log_gamma_p, log_gamma_pq, log_gamma_q};
use pqgamma::monocheck::{
    check_cm, check_lcm, check_log_convex, GridSpec, Verdict, Witness, DEFAULT_TOL_SCALE,
};
use pqgamma::paperfuncs::{
    h_beta, validate_ratio_spec, RatioViolation, RootVariant, SignLemma, H_BETA_SWITCH_RADIUS,
};
use pqgamma::psifam::{psi_p, psi_pq, psi_pq_deriv};
use pqgamma::qcore::{q_bracket, PQParams, SeriesControl};

const SEED: u64 = 42;
const GRID_P: [u32; 3] = [1, 3, 10];
const GRID_Q: [f64; 3] = [0.3, 0.5, 0.8];

type Outcome = Result<(bool, String)>;

fn pq(p: u32, q: f64) -> PQParams {
    PQParams::new(p, q).expect("valid parameters")
}

fn identities() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(SEED);
    let xs: Vec<f64> = (0..100).map(|_| rng.random_range(1e-9..10.0)).collect();
    let mut worst = 0.0f64;
    for p in [1u32, 2, 5, 10, 50] {
        for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let params = pq(p, q);
            let pf = f64::from(p);
            let at_one = log_gamma_pq(1.0, params)?;
            let expect = (q_bracket(pf, q)? / q_bracket(pf + 1.0, q)?).ln();
            worst = worst.max((at_one - expect).exp_m1().abs());
            for &x in &xs {
                let step = log_gamma_pq(x + 1.0, params)? - log_gamma_pq(x, params)?;
                let ratio = (q_bracket(pf, q)? * q_bracket(x, q)? / q_bracket(x + pf + 1.0, q)?).ln();
                worst = worst.max((step - ratio).exp_m1().abs());
            }
        }
    }
    Ok((worst <= 1e-12, format!("max relative error {worst:.2e} (limit 1e-12)")))
}

fn derivative_consistency() -> Outcome {
    let ctl = SeriesControl::default();
    let xs: Vec<f64> = (0..=38).map(|i| 0.5 + 0.25 * f64::from(i)).collect();
    let (mut e0, mut e1, mut e2) = (0.0f64, 0.0f64, 0.0f64);
    for p in GRID_P {
        for q in GRID_Q {
            let params = pq(p, q);
            let lg = |x: f64| log_gamma_pq(x, params);
            let psi = |x: f64| psi_pq(x, params);
            for &x in &xs {
                let h = 1e-5;
                let fd = (lg(x + h)? - lg(x - h)?) / (2.0 * h);
                let v = psi(x)?;
                e0 = e0.max((fd - v).abs() / v.abs());
                let d1 = psi_pq_deriv(x, params, 1, ctl)?;
                let fd1 = (psi(x + h)? - psi(x - h)?) / (2.0 * h);
                e1 = e1.max((fd1 - d1).abs() / d1.abs());
                let h2 = 1e-3;
                let d2 = psi_pq_deriv(x, params, 2, ctl)?;
                let fd2 = (psi(x + h2)? - 2.0 * psi(x)? + psi(x - h2)?) / (h2 * h2);
                e2 = e2.max((fd2 - d2).abs() / d2.abs());
            }
        }
    }
    let ok = e0 <= 1e-6 && e1 <= 1e-5 && e2 <= 1e-5;
    Ok((ok, format!("psi {e0:.1e} (1e-6), psi' {e1:.1e}, psi'' {e2:.1e} (1e-5)")))
}

fn oracle_equivalence() -> Outcome {
    let ctl = SeriesControl::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in 1..=5u32 {
        for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for x in [0.2, 0.5, 1.0, 2.5, 5.0, 9.0] {
                for n in 1..=3u32 {
                    let got = psi_pq_deriv(x, pq(p, q), n, ctl)?;
                    let brute = psi_deriv_double_series(x, p, q, n);
                    worst = worst.max((got - brute).abs() / brute.abs());
                    count += 1;
                }
            }
        }
    }
    Ok((worst <= 1e-12, format!("{count} cases, max relative difference {worst:.2e} (1e-12)")))
}

fn log_convexity() -> Outcome {
    let grid = GridSpec::new(0.5, 8.0)?.with_seed(SEED);
    let r = logconvex_gamma(pq(4, 0.6), &grid)?;
    let triples = grid.points * grid.points;
    Ok((
        r.passed() && r.min_slack >= -1e-12,
        format!("{triples} triples, min slack {:.2e} (>= -1e-12)", r.min_slack),
    ))
}

fn young_bracket_inequality() -> Outcome {
    let r = young_bracket(4096, 10.0, SEED, 1e-14);
    Ok((
        r.verdict == Verdict::Pass,
        format!("4096 samples, min slack {:.2e} (>= -1e-14)", r.min_slack),
    ))
}

fn cm_psi_prime_grid() -> Outcome {
    let grid = GridSpec::new(0.5, 6.0)?.with_max_order(6)?;
    let mut passed = 0;
    let mut worst = f64::INFINITY;
    for p in GRID_P {
        for q in GRID_Q {
            let r = cm_psi_prime(pq(p, q), &grid, DEFAULT_TOL_SCALE)?;
            passed += usize::from(r.passed());
            worst = worst.min(r.min_slack + r.tolerance_used);
        }
    }
    Ok((passed == 9, format!("{passed}/9 (p,q) pass; least margin {worst:.2e}")))
}

fn cm_ratio_campaign() -> Outcome {
    let grid = GridSpec::new(0.5, 6.0)?;
    let mut rng = Pcg64::seed_from_u64(SEED);
    let mut passed = 0;
    for _ in 0..20 {
        let spec = random_ratio_spec(&mut rng, 4);
        passed += usize::from(cm_ratio(&spec, pq(3, 0.5), &grid, DEFAULT_TOL_SCALE)?.passed());
    }
    let violation = validate_ratio_spec(&[1.0, 2.0], &[0.5, 5.0])?;
    let names_k1 = matches!(violation, Err(RatioViolation::PartialSum { k: 1, .. }))
        && violation.as_ref().unwrap_err().to_string().contains("k=1");
    Ok((
        passed == 20 && names_k1,
        format!("{passed}/20 specs pass; bad spec rejected at k=1: {names_k1}"),
    ))
}

fn lcm_root_matrix() -> Outcome {
    let grid = GridSpec::new(0.5, 6.0)?;
    let mut all = true;
    let mut rows = Vec::new();
    for p in GRID_P {
        for q in GRID_Q {
            let mut any = false;
            let mut cells = Vec::new();
            for v in RootVariant::ALL {
                let r = lcm_root(pq(p, q), v, &grid, DEFAULT_TOL_SCALE)?;
                any |= r.passed();
                cells.push(format!("{}={}", v.name(), if r.passed() { "pass" } else { "fail" }));
            }
            all &= any;
            rows.push(format!("      p={p:<2} q={q}: {}", cells.join(" ")));
        }
    }
    Ok((all, format!("outcome matrix:\n{}", rows.join("\n"))))
}

fn lcm_h_campaign() -> Outcome {
    let grid = GridSpec::new(0.5, 6.0)?;
    let mut rng = Pcg64::seed_from_u64(SEED);
    let params = pq(3, 0.5);
    let mut passed = 0;
    let mut jump = 0.0f64;
    let mut curvature = 0.0f64;
    for _ in 0..10 {
        let spec = random_two_point_spec(&mut rng);
        passed += usize::from(lcm_h(&spec, params, &grid, DEFAULT_TOL_SCALE)?.passed());
        let b = spec.beta();
        let h = |x: f64| h_beta(x, &spec, params);
        let at = h(b)?;
        // no jump where the evaluation switches branches
        for side in [-1.0, 1.0] {
            let inner = h(b + side * H_BETA_SWITCH_RADIUS * (1.0 - 1e-9))?;
            let outer = h(b + side * H_BETA_SWITCH_RADIUS * (1.0 + 1e-9))?;
            jump = jump.max((outer - inner).abs() / at);
        }
        // symmetric approach from 1e-4 cancels the slope, leaving the curvature
        let eps = 1e-4;
        curvature = curvature.max(((h(b + eps)? + h(b - eps)?) / 2.0 - at).abs() / at);
    }
    let ok = passed == 10 && jump <= 1e-6 && curvature <= 1e-6;
    Ok((ok, format!("{passed}/10 specs pass; switch jump {jump:.1e}, symmetric 1e-4 deviation {curvature:.1e} (1e-6)")))
}

fn affine_inequalities() -> Outcome {
    let mut rng = Pcg64::seed_from_u64(SEED);
    let samples: Vec<_> = (0..1000).map(|_| random_affine_sample(&mut rng)).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for lemma in [SignLemma::L42, SignLemma::L43] {
        let r = affine_campaign(&samples, lemma, 33, 1e-10, SEED)?;
        ok &= r.failed == 0 && r.qualified >= 50 && r.min_slack >= -1e-10;
        parts.push(format!(
            "{lemma:?}: {} qualified, {} skipped, {} failed, min slack {:.1e}",
            r.qualified, r.skipped, r.failed, r.min_slack
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn diagrams() -> Outcome {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let euler = 0.577_215_664_901_532_9;
    let mut monotone = true;
    let edges: [(Corner, f64, Vec<f64>, Option<f64>); 8] = [
        (Corner::PToQ, 0.5, vec![10.0, 100.0, 1000.0, 10_000.0], Some(0.99)),
        (Corner::QToP, 0.5, vec![0.9, 0.99, 0.999, 0.9999], Some(10.0)),
        (Corner::PGamma, 0.5, vec![10.0, 100.0, 1000.0, 10_000.0], None),
        (Corner::QGamma, 0.5, vec![0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-6], None),
        (Corner::PsiPToQ, 1.0, vec![10.0, 100.0, 1000.0, 10_000.0], Some(0.9)),
        (Corner::PsiQToP, 1.0, vec![0.9, 0.99, 0.999, 0.9999], Some(10.0)),
        (Corner::PsiPPsi, 1.0, vec![10.0, 100.0, 1e4, 1e6], None),
        (Corner::PsiQPsi, 1.0, vec![0.9, 0.99, 0.999, 0.9999], None),
    ];
    let mut bad = Vec::new();
    for (corner, x, ladder, fixed) in &edges {
        let t = limit_table(*corner, *x, ladder, *fixed)?;
        if !t.monotone {
            bad.push(corner.name());
        }
        monotone &= t.monotone;
    }
    let gp = (log_gamma_p(0.5, 10_000)?.exp() - sqrt_pi).abs() / sqrt_pi;
    let q = 1.0 - 1e-6;
    let gq = (log_gamma_q(0.5, q, near_one_series_control(q))?.exp() - sqrt_pi).abs() / sqrt_pi;
    let pp = (psi_p(1.0, 1_000_000)? + euler).abs();
    let t = limit_table(Corner::PToQ, 2.0, &[100.0, 10_000.0], Some(0.99))?;
    let (g100, g1e4) = (t.rows[0].gap, t.rows[1].gap);
    let ok = monotone && gp <= 1e-3 && gq <= 1e-4 && pp <= 1e-5 && g1e4 * 10.0 <= g100;
    Ok((
        ok,
        format!(
            "8 edges monotone: {monotone}{}; Gamma_p {gp:.1e} (1e-3), Gamma_q {gq:.1e} (1e-4), psi_p {pp:.1e} (1e-5), p-to-q gaps {g100:.1e} -> {g1e4:.1e}",
            if bad.is_empty() { String::new() } else { format!(" (not: {})", bad.join(", ")) }
        ),
    ))
}

fn negative_controls() -> Outcome {
    let grid = GridSpec::new(0.5, 6.0)?;
    let identity = |x: f64| -> Result<f64> { Ok(x) };
    let cm = check_cm(identity, &grid, DEFAULT_TOL_SCALE)?;
    let cm_ok = !cm.passed() && matches!(cm.witness, Some(Witness::Difference { order: 1, .. }));
    let lc_ok = !check_log_convex(identity, &grid)?.passed();
    let lcm = check_lcm(|x: f64| Ok(x.exp()), &grid, DEFAULT_TOL_SCALE)?;
    let lcm_ok = !lcm.passed() && matches!(lcm.witness, Some(Witness::Difference { order: 1, .. }));
    Ok((
        cm_ok && lc_ok && lcm_ok,
        format!("cm(x) rejected at n=1: {cm_ok}; log-convex(x) rejected: {lc_ok}; lcm(e^x) rejected at n=1: {lcm_ok}"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("identity suite", identities),
        ("derivative consistency", derivative_consistency),
        ("double-series oracle", oracle_equivalence),
        ("log-convexity campaign", log_convexity),
        ("bracket inequality", young_bracket_inequality),
        ("cm of psi'", cm_psi_prime_grid),
        ("cm of shift ratio G", cm_ratio_campaign),
        ("lcm of root function", lcm_root_matrix),
        ("lcm of h_beta", lcm_h_campaign),
        ("affine double inequality", affine_inequalities),
        ("limit diagrams", diagrams),
        ("negative controls", negative_controls),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!(
            "{} {:>2} {name:<26} [{:.2}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria pass in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
