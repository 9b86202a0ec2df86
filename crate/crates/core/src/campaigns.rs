//! Ready-made verification campaigns pairing the functions in
//! [`crate::paperfuncs`], [`crate::gammafam`] and [`crate::psifam`] with the
//! engine in [`crate::monocheck`].
//!
//! Every campaign is deterministic for a given grid and seed.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use crate::error::Result;
use crate::gammafam::{log_gamma_classical, log_gamma_p, log_gamma_pq, log_gamma_q};
use crate::monocheck::{
    check_cm, check_decreasing, check_lcm, check_lcm_log, check_log_convex_log, GridSpec,
    MonotonicityReport, Verdict,
};
use crate::paperfuncs::{
    h_beta, lemma_sign_check, log_f1, log_f_root, log_g_pq, AffineInequalitySpec, RatioSpec,
    RootVariant, SignLemma, TwoPointSpec,
};
use crate::psifam::{psi_classical, psi_p, psi_pq, psi_pq_deriv, psi_q};
use crate::qcore::{bracket_ln, PQParams, SeriesControl};

/// Series control used inside difference campaigns. High-order differences
/// amplify truncation noise by up to `2^n`, so the series are summed to
/// full working precision.
pub fn campaign_series_control() -> SeriesControl {
    SeriesControl {
        rel_tol: 1e-17,
        max_terms: 1_000_000,
    }
}

/// `Gamma_{p,q}` is log-convex.
pub fn logconvex_gamma(params: PQParams, grid: &GridSpec) -> Result<MonotonicityReport> {
    check_log_convex_log(|x| log_gamma_pq(x, params), grid)
}

/// `psi'_{p,q}` is completely monotonic.
pub fn cm_psi_prime(params: PQParams, grid: &GridSpec, tol_scale: f64) -> Result<MonotonicityReport> {
    let ctl = campaign_series_control();
    check_cm(|x| psi_pq_deriv(x, params, 1, ctl), grid, tol_scale)
}

/// `G_{p,q}` is completely monotonic for a validated shift spec.
pub fn cm_ratio(
    spec: &RatioSpec,
    params: PQParams,
    grid: &GridSpec,
    tol_scale: f64,
) -> Result<MonotonicityReport> {
    check_cm(|x| log_g_pq(x, spec, params).map(f64::exp), grid, tol_scale)
}

/// Logarithmic complete monotonicity of the root function.
pub fn lcm_root(
    params: PQParams,
    variant: RootVariant,
    grid: &GridSpec,
    tol_scale: f64,
) -> Result<MonotonicityReport> {
    check_lcm_log(|x| log_f_root(x, params, variant), grid, tol_scale)
}

/// Logarithmic complete monotonicity of `h_{beta,p,q}`.
pub fn lcm_h(
    spec: &TwoPointSpec,
    params: PQParams,
    grid: &GridSpec,
    tol_scale: f64,
) -> Result<MonotonicityReport> {
    check_lcm(|x| h_beta(x, spec, params), grid, tol_scale)
}

/// Draws a random shift spec with `n <= max_len` entries in `(0, 5]`
/// satisfying ordering and partial-sum domination.
///
/// `b` is sorted, then `a` is drawn entrywise below `b` and sorted, which
/// gives `a_(i) <= b_(i)` and hence every partial-sum inequality.
pub fn random_ratio_spec(rng: &mut impl Rng, max_len: usize) -> RatioSpec {
    let n = rng.random_range(1..=max_len.max(1));
    let mut b: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..=5.0)).collect();
    b.sort_by(f64::total_cmp);
    let mut a: Vec<f64> = b.iter().map(|&bi| rng.random_range(0.01..=bi)).collect();
    a.sort_by(f64::total_cmp);
    RatioSpec::new(a, b).expect("constructed spec satisfies the ratio hypotheses")
}

/// Draws `s > t` and `beta` with `beta + t` bounded away from zero.
pub fn random_two_point_spec(rng: &mut impl Rng) -> TwoPointSpec {
    let t = rng.random_range(0.2..=2.0);
    let s = t + rng.random_range(0.1..=2.0);
    let beta = rng.random_range(0.0..=1.5);
    TwoPointSpec::new(s, t, beta).expect("s > t > 0 and beta >= 0")
}

/// Outcome of the bracket inequality
/// `[1+x]_q^alpha [1+y]_q^(1-alpha) <= [1 + alpha x + (1-alpha) y]_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketReport {
    pub verdict: Verdict,
    pub min_slack: f64,
    pub witness: [f64; 4],
    pub tolerance_used: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Samples `(x, y, alpha, q)` uniformly from `(0, hi]^2 x (0,1) x (0,1)`
/// and records `rhs - lhs` of the bracket inequality.
pub fn young_bracket(samples: usize, hi: f64, seed: u64, tolerance: f64) -> BracketReport {
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut worst = (f64::INFINITY, [0.0; 4]);
    for _ in 0..samples {
        let x = rng.random_range(0.0..=hi);
        let y = rng.random_range(0.0..=hi);
        let alpha: f64 = rng.random_range(0.0..1.0);
        let q: f64 = rng.random_range(1e-3..1.0 - 1e-3);
        let ln_q = q.ln();
        let beta = 1.0 - alpha;
        let lhs = bracket_ln(1.0 + x, ln_q).powf(alpha) * bracket_ln(1.0 + y, ln_q).powf(beta);
        let rhs = bracket_ln(1.0 + alpha * x + beta * y, ln_q);
        let slack = rhs - lhs;
        if slack < worst.0 {
            worst = (slack, [x, y, alpha, q]);
        }
    }
    BracketReport {
        verdict: if worst.0 >= -tolerance { Verdict::Pass } else { Verdict::Fail },
        min_slack: worst.0,
        witness: worst.1,
        tolerance_used: tolerance,
        samples,
        seed,
    }
}

/// One sampled instance of the affine inequality family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineSample {
    pub spec: AffineInequalitySpec,
    pub p: u32,
    pub q: f64,
}

/// Draws `(a,...,f)` and `(p, q)` for the affine campaign.
pub fn random_affine_sample(rng: &mut impl Rng) -> AffineSample {
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..=hi);
    let spec = AffineInequalitySpec::new(
        u(0.05, 3.0),
        u(0.05, 2.0),
        u(0.1, 3.0),
        u(0.05, 3.0),
        u(0.05, 2.0),
        u(0.1, 3.0),
    );
    let q = u(0.2, 0.95);
    let p = rng.random_range(1..=8);
    AffineSample { spec, p, q }
}

/// Summary of the affine inequality campaign for one lemma.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineReport {
    pub lemma: SignLemma,
    pub verdict: Verdict,
    pub samples: usize,
    pub qualified: usize,
    pub skipped: usize,
    pub failed: usize,
    /// Worst of: monotone-decrease slack and both sides of the double
    /// inequality at interior grid points, all in log domain.
    pub min_slack: f64,
    pub worst: Option<AffineSample>,
    pub tolerance_used: f64,
    pub seed: u64,
}

/// Tests decrease of `f1` and `f1(1) <= f1(x) <= f1(0)` on the grid of
/// `[0, 1]` for each sample whose lemma hypotheses hold at every grid point.
/// Samples failing a hypothesis anywhere are skipped, not failed.
pub fn affine_campaign(
    samples: &[AffineSample],
    lemma: SignLemma,
    points: usize,
    tolerance: f64,
    seed: u64,
) -> Result<AffineReport> {
    let grid = GridSpec::new(0.0, 1.0)?.with_points(points.max(2))?;
    let xs = grid.abscissae();
    let mut report = AffineReport {
        lemma,
        verdict: Verdict::Pass,
        samples: samples.len(),
        qualified: 0,
        skipped: 0,
        failed: 0,
        min_slack: f64::INFINITY,
        worst: None,
        tolerance_used: tolerance,
        seed,
    };
    'sample: for s in samples {
        let params = PQParams::new(s.p, s.q)?;
        for &x in &xs {
            let (u, v) = s.spec.arguments(x);
            if !(u > 0.0 && v > 0.0) {
                report.skipped += 1;
                continue 'sample;
            }
            let check = lemma_sign_check(&s.spec, params, x, lemma)?;
            if !check.hypotheses_hold {
                report.skipped += 1;
                continue 'sample;
            }
        }
        report.qualified += 1;
        let log_f = |x: f64| log_f1(x, &s.spec, params);
        let dec = check_decreasing(log_f, &grid)?;
        let (at0, at1) = (log_f(0.0)?, log_f(1.0)?);
        let mut slack = dec.min_slack;
        for &x in &xs[1..xs.len() - 1] {
            let v = log_f(x)?;
            slack = slack.min(at0 - v).min(v - at1);
        }
        if slack < -tolerance {
            report.failed += 1;
        }
        if slack < report.min_slack {
            report.min_slack = slack;
            report.worst = Some(*s);
        }
    }
    if report.failed > 0 {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

/// The corners of the limit diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corner {
    /// `Gamma_{p,q} -> Gamma_q` as `p -> inf`.
    PToQ,
    /// `Gamma_{p,q} -> Gamma_p` as `q -> 1`.
    QToP,
    /// `Gamma_p -> Gamma` as `p -> inf`.
    PGamma,
    /// `Gamma_q -> Gamma` as `q -> 1`.
    QGamma,
    /// `psi_{p,q} -> psi_q` as `p -> inf`.
    PsiPToQ,
    /// `psi_{p,q} -> psi_p` as `q -> 1`.
    PsiQToP,
    /// `psi_p -> psi` as `p -> inf`.
    PsiPPsi,
    /// `psi_q -> psi` as `q -> 1`.
    PsiQPsi,
}

impl Corner {
    pub fn name(self) -> &'static str {
        match self {
            Self::PToQ => "p-to-q",
            Self::QToP => "q-to-p",
            Self::PGamma => "p-gamma",
            Self::QGamma => "q-gamma",
            Self::PsiPToQ => "psi-p-to-q",
            Self::PsiQToP => "psi-q-to-p",
            Self::PsiPPsi => "psi-p-psi",
            Self::PsiQPsi => "psi-q-psi",
        }
    }

    /// Whether the ladder runs over `p` (otherwise over `q`).
    pub fn ladder_in_p(self) -> bool {
        matches!(self, Self::PToQ | Self::PGamma | Self::PsiPToQ | Self::PsiPPsi)
    }

    /// Gamma edges report relative gaps, psi edges absolute gaps.
    pub fn relative_gap(self) -> bool {
        matches!(self, Self::PToQ | Self::QToP | Self::PGamma | Self::QGamma)
    }

    /// The four psi edges.
    pub const PSI: [Corner; 4] = [Corner::PsiPToQ, Corner::PsiQToP, Corner::PsiPPsi, Corner::PsiQPsi];
}

/// Absolute floor under which gap increases count as rounding noise.
pub const GAP_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub parameter: f64,
    pub approximant: f64,
    pub target: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable {
    pub corner: Corner,
    pub x: f64,
    /// The parameter held fixed on edges that have one (`q` for `p-to-q`,
    /// `p` for `q-to-p`).
    pub fixed: Option<f64>,
    pub rows: Vec<LimitRow>,
    /// Gaps are nonincreasing along the ladder up to [`GAP_NOISE_FLOOR`].
    pub monotone: bool,
}

/// Series control for q near 1, where products and series need roughly
/// `35 / |ln q|` terms.
pub fn near_one_series_control(q: f64) -> SeriesControl {
    let need = (40.0 / q.ln().abs()).ceil();
    let cap = if need.is_finite() { need.max(1e6).min(4e8) as usize } else { 400_000_000 };
    SeriesControl {
        rel_tol: 1e-14,
        max_terms: cap,
    }
}

/// Evaluates one edge of a diagram at `x` along `ladder`.
///
/// `fixed` is `q` for the `p -> inf` edges with a q-dependence and `p` for
/// the `q -> 1` edges with a p-dependence.
pub fn limit_table(corner: Corner, x: f64, ladder: &[f64], fixed: Option<f64>) -> Result<LimitTable> {
    use crate::error::Error;
    let need_fixed = || {
        fixed.ok_or_else(|| {
            Error::Domain(format!("corner {} needs a fixed parameter", corner.name()))
        })
    };
    let as_p = |v: f64| -> Result<u64> {
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(v as u64)
        } else {
            Err(Error::Domain(format!("ladder value {v} is not a positive integer p")))
        }
    };
    let as_p32 = |v: f64| -> Result<u32> {
        let p = as_p(v)?;
        u32::try_from(p).map_err(|_| Error::Domain(format!("p = {p} is too large")))
    };
    let mut rows = Vec::with_capacity(ladder.len());
    for &k in ladder {
        let (approx, target) = match corner {
            Corner::PToQ => {
                let q = need_fixed()?;
                let ctl = near_one_series_control(q);
                (log_gamma_pq(x, PQParams::new(as_p32(k)?, q)?)?, log_gamma_q(x, q, ctl)?)
            }
            Corner::QToP => {
                let p = as_p32(need_fixed()?)?;
                (log_gamma_pq(x, PQParams::new(p, k)?)?, log_gamma_p(x, u64::from(p))?)
            }
            Corner::PGamma => (log_gamma_p(x, as_p(k)?)?, log_gamma_classical(x)?),
            Corner::QGamma => (log_gamma_q(x, k, near_one_series_control(k))?, log_gamma_classical(x)?),
            Corner::PsiPToQ => {
                let q = need_fixed()?;
                (psi_pq(x, PQParams::new(as_p32(k)?, q)?)?, psi_q(x, q, near_one_series_control(q))?)
            }
            Corner::PsiQToP => {
                let p = as_p32(need_fixed()?)?;
                (psi_pq(x, PQParams::new(p, k)?)?, psi_p(x, u64::from(p))?)
            }
            Corner::PsiPPsi => (psi_p(x, as_p(k)?)?, psi_classical(x)?),
            Corner::PsiQPsi => (psi_q(x, k, near_one_series_control(k))?, psi_classical(x)?),
        };
        let (approximant, target_value, gap) = if corner.relative_gap() {
            (approx.exp(), target.exp(), (approx - target).exp_m1().abs())
        } else {
            (approx, target, (approx - target).abs())
        };
        rows.push(LimitRow {
            parameter: k,
            approximant,
            target: target_value,
            gap,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].gap <= w[0].gap + GAP_NOISE_FLOOR);
    Ok(LimitTable {
        corner,
        x,
        fixed,
        rows,
        monotone,
    })
}
