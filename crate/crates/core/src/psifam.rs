//! Psi (digamma) analogues: `psi_{p,q}` and its derivatives, `psi_p`,
//! both branches of `psi_q`, and the classical digamma.
//!
//! The integral representations of `psi_{p,q}` integrate against a discrete
//! measure with masses `-ln q` at the points `t_m = -m ln q`, so every such
//! integral is a series over `m`. Expanding `q^y / (1 - q^y)` geometrically
//! in the finite k-sum gives, for `n >= 1`,
//!
//! ```text
//! psi_{p,q}^{(n)}(x) = (ln q)^{n+1} sum_{m>=1} m^n q^{mx} (1 - q^{m(p+1)}) / (1 - q^m)
//! ```
//!
//! The factor `1 - q^{m(p+1)}` (equivalently `1 - e^{-(p+1)t}`) is what the
//! k-sum over `k = 0..=p` produces; the `1 - e^{-pt}` variant seen in some
//! statements of the integral form drops the last term and does not match
//! the derivative of `ln Gamma_{p,q}`.

use crate::error::{domain, Error, Result};
use crate::gammafam::ASYMPTOTIC_FROM;
use crate::qcore::{ln_bracket_ln, one_minus_exp, PQParams, SeriesControl};
use crate::sum::NeumaierSum;

/// Derivative order of a psi function; `0` is psi itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiDerivOrder(pub u32);

impl From<u32> for PsiDerivOrder {
    fn from(n: u32) -> Self {
        Self(n)
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("x must be a positive finite real, got {x}"))
    }
}

/// `sum_{m>=1} m^n e^{m decay} w(m)` for `decay < 0` and a positive,
/// nonincreasing weight `w`.
///
/// Consecutive terms shrink at least by `rho_m = (1 + 1/m)^n e^{decay}`,
/// which is itself decreasing in `m`, so once `rho_m < 1` the tail is at
/// most `term_m rho_m / (1 - rho_m)`.
fn moment_series(
    n: u32,
    decay: f64,
    weight: impl Fn(f64) -> f64,
    ctl: SeriesControl,
    what: &'static str,
) -> Result<f64> {
    let shrink = decay.exp();
    let mut acc = NeumaierSum::new();
    for m in 1..=ctl.max_terms {
        let mf = m as f64;
        let term = mf.powi(n as i32) * (mf * decay).exp() * weight(mf);
        acc.add(term);
        let rho = (1.0 + 1.0 / mf).powi(n as i32) * shrink;
        if rho < 1.0 && term * rho / (1.0 - rho) <= ctl.rel_tol * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::Truncation {
        what,
        max_terms: ctl.max_terms,
    })
}

/// `psi_{p,q}(x) = ln [p]_q + ln q sum_{k=0}^{p} q^{x+k} / (1 - q^{x+k})`,
/// the logarithmic derivative of `Gamma_{p,q}`.
pub fn psi_pq(x: f64, params: PQParams) -> Result<f64> {
    check_x(x)?;
    let ln_q = params.ln_q();
    let mut acc = NeumaierSum::new();
    for k in 0..=params.p() {
        // q^y / (1 - q^y) = 1 / (q^{-y} - 1)
        acc.add(1.0 / (-(x + f64::from(k)) * ln_q).exp_m1());
    }
    Ok(ln_bracket_ln(f64::from(params.p()), ln_q) + ln_q * acc.value())
}

/// n-th derivative of `psi_{p,q}` (`n >= 1`) from the m-series above.
pub fn psi_pq_deriv(
    x: f64,
    params: PQParams,
    order: impl Into<PsiDerivOrder>,
    ctl: SeriesControl,
) -> Result<f64> {
    check_x(x)?;
    let n = order.into().0;
    if n == 0 {
        return domain("derivative order must be at least 1; use psi_pq for order 0");
    }
    let ln_q = params.ln_q();
    let width = f64::from(params.p()) + 1.0;
    let weight = |m: f64| one_minus_exp(m * width * ln_q) / one_minus_exp(m * ln_q);
    let s = moment_series(n, x * ln_q, weight, ctl, "psi_pq derivative series")?;
    Ok(ln_q.powi(n as i32 + 1) * s)
}

/// `psi_p(x) = ln p - sum_{k=0}^{p} 1/(x+k)`.
pub fn psi_p(x: f64, p: u64) -> Result<f64> {
    check_x(x)?;
    if p == 0 {
        return domain("p must be a positive integer");
    }
    let mut acc = NeumaierSum::new();
    for k in (0..=p).rev() {
        acc.add(1.0 / (x + k as f64));
    }
    Ok((p as f64).ln() - acc.value())
}

fn check_q_branch(q: f64) -> Result<()> {
    if q > 0.0 && q != 1.0 && q.is_finite() {
        Ok(())
    } else {
        domain(format!("q must be positive and different from 1, got {q}"))
    }
}

/// Jackson's `psi_q` for either branch.
///
/// `0 < q < 1`: `-ln(1-q) + ln q sum_{n>=1} q^{nx} / (1 - q^n)`.
/// `q > 1`: `-ln(q-1) + ln q (x - 1/2 - sum_{n>=1} q^{-nx} / (1 - q^{-n}))`.
pub fn psi_q(x: f64, q: f64, ctl: SeriesControl) -> Result<f64> {
    check_x(x)?;
    check_q_branch(q)?;
    let ln_q = q.ln();
    if q < 1.0 {
        let s = moment_series(0, x * ln_q, |m| 1.0 / one_minus_exp(m * ln_q), ctl, "psi_q series")?;
        Ok(-(-q).ln_1p() + ln_q * s)
    } else {
        let ln_r = -ln_q;
        let s = moment_series(0, x * ln_r, |m| 1.0 / one_minus_exp(m * ln_r), ctl, "psi_q series")?;
        Ok(-(q - 1.0).ln() + ln_q * (x - 0.5 - s))
    }
}

/// n-th derivative of `psi_q` (`n >= 1`), obtained term by term from the
/// series of [`psi_q`].
///
/// For `0 < q < 1` this is `(ln q)^{n+1} sum m^n q^{mx} / (1 - q^m)`. For
/// `q > 1` it is `[n = 1] ln q + (-1)^{n+1} (ln q)^{n+1} sum m^n q^{-mx} / (1 - q^{-m})`.
pub fn psi_q_deriv(
    x: f64,
    q: f64,
    order: impl Into<PsiDerivOrder>,
    ctl: SeriesControl,
) -> Result<f64> {
    check_x(x)?;
    check_q_branch(q)?;
    let n = order.into().0;
    if n == 0 {
        return domain("derivative order must be at least 1; use psi_q for order 0");
    }
    let ln_q = q.ln();
    if q < 1.0 {
        let s = moment_series(n, x * ln_q, |m| 1.0 / one_minus_exp(m * ln_q), ctl, "psi_q derivative series")?;
        Ok(ln_q.powi(n as i32 + 1) * s)
    } else {
        let ln_r = -ln_q;
        let s = moment_series(n, x * ln_r, |m| 1.0 / one_minus_exp(m * ln_r), ctl, "psi_q derivative series")?;
        let linear = if n == 1 { ln_q } else { 0.0 };
        Ok(linear - ln_q * ln_r.powi(n as i32) * s)
    }
}

// B_{2k} / (2k), k = 1..8
const DIGAMMA_ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Classical digamma `psi(x)` for `x > 0`: upward recurrence past 10, then
/// `ln z - 1/(2z) - sum B_{2k} / (2k z^{2k})`.
pub fn psi_classical(x: f64) -> Result<f64> {
    check_x(x)?;
    let mut z = x;
    let mut shift = NeumaierSum::new();
    while z < ASYMPTOTIC_FROM {
        shift.add(1.0 / z);
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    for c in DIGAMMA_ASYMPTOTIC.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv2;
    Ok(z.ln() - 0.5 / z - series - shift.value())
}
