//! q-arithmetic primitives: q-brackets, q-factorials and infinite
//! q-Pochhammer products.
//!
//! Everything here is evaluated through `ln q` with `expm1`/`ln_1p` so that
//! q close to 1 keeps its digits: `[n]_q = (1 - q^n)/(1 - q)` is formed as
//! `expm1(n ln q) / expm1(ln q)`, never by subtracting from one.

use crate::error::{domain, Error, Result};
use crate::sum::NeumaierSum;

/// Deformation parameters shared by every (p,q) function: an integer
/// number of factors `p >= 1` and a base `q` strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQParams {
    p: u32,
    q: f64,
    ln_q: f64,
}

impl PQParams {
    pub fn new(p: u32, q: f64) -> Result<Self> {
        if p == 0 {
            return domain("p must be a positive integer");
        }
        check_q(q)?;
        Ok(Self { p, q, ln_q: q.ln() })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }
}

/// Truncation policy for infinite series and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Stop once the bound on the neglected tail drops below
    /// `rel_tol * |partial sum|`.
    pub rel_tol: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return domain(format!("rel_tol must be positive, got {rel_tol}"));
        }
        if max_terms == 0 {
            return domain("max_terms must be at least 1");
        }
        Ok(Self { rel_tol, max_terms })
    }

    /// Same tolerance with a different term cap.
    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self { max_terms, ..self }
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        domain(format!("q must lie in (0, 1), got {q}"))
    }
}

/// `1 - e^y` for `y <= 0`, accurate at both ends.
#[inline]
pub(crate) fn one_minus_exp(y: f64) -> f64 {
    -y.exp_m1()
}

/// `ln(1 - e^y)` for `y < 0`.
#[inline]
pub(crate) fn ln_one_minus_exp(y: f64) -> f64 {
    // ln_1p is exact-ish once e^y is small; expm1 keeps the digits near y = 0.
    if y < -std::f64::consts::LN_2 {
        (-y.exp()).ln_1p()
    } else {
        (-y.exp_m1()).ln()
    }
}

/// `[n]_q` from `ln q`.
#[inline]
pub(crate) fn bracket_ln(n: f64, ln_q: f64) -> f64 {
    (n * ln_q).exp_m1() / ln_q.exp_m1()
}

/// `ln [n]_q` from `ln q`, `n > 0`.
#[inline]
pub(crate) fn ln_bracket_ln(n: f64, ln_q: f64) -> f64 {
    ln_one_minus_exp(n * ln_q) - ln_one_minus_exp(ln_q)
}

/// The q-bracket `[n]_q = (1 - q^n)/(1 - q)`; tends to `n` as `q -> 1`.
pub fn q_bracket(n: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if !(n >= 0.0) {
        return domain(format!("q-bracket needs n >= 0, got {n}"));
    }
    Ok(bracket_ln(n, q.ln()))
}

/// `ln [p]_q! = sum_{k=1}^{p} ln [k]_q`.
pub fn log_q_factorial(p: u32, q: f64) -> Result<f64> {
    check_q(q)?;
    if p == 0 {
        return domain("q-factorial needs p >= 1");
    }
    Ok(log_q_factorial_ln(p, q.ln()))
}

pub(crate) fn log_q_factorial_ln(p: u32, ln_q: f64) -> f64 {
    let ln_den = ln_one_minus_exp(ln_q);
    let mut acc = NeumaierSum::new();
    // ln [1]_q is exactly zero
    for k in 2..=p {
        acc.add(ln_one_minus_exp(f64::from(k) * ln_q) - ln_den);
    }
    acc.value()
}

/// `ln (a; q)_inf = sum_{j>=0} ln(1 - a q^j)` for `0 <= a < 1`.
///
/// Terms are summed until `a q^{J+1} / ((1-q)(1 - a q^{J+1}))`, a bound on
/// the neglected tail, falls below `rel_tol * |partial sum|`.
pub fn log_q_pochhammer_inf(a: f64, q: f64, ctl: SeriesControl) -> Result<f64> {
    check_q(q)?;
    if !(0.0..1.0).contains(&a) {
        return domain(format!("q-Pochhammer needs 0 <= a < 1, got {a}"));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    log_pochhammer_ln(a.ln(), q.ln(), ctl)
}

/// `ln (a; q)_inf` with `a = e^{ln_a}`, `q = e^{ln_q}`, `ln_a <= 0 > ln_q`.
///
/// Taking `ln a` lets callers pass `a = q^x` exactly as `x ln q`.
pub(crate) fn log_pochhammer_ln(ln_a: f64, ln_q: f64, ctl: SeriesControl) -> Result<f64> {
    let one_minus_q = one_minus_exp(ln_q);
    let mut acc = NeumaierSum::new();
    let mut exponent = ln_a;
    for j in 0..ctl.max_terms {
        acc.add(ln_one_minus_exp(exponent));
        exponent = ln_a + (j + 1) as f64 * ln_q;
        let next = exponent.exp();
        let tail = next / (one_minus_q * (1.0 - next));
        if tail < ctl.rel_tol * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::Truncation {
        what: "q-Pochhammer product",
        max_terms: ctl.max_terms,
    })
}
