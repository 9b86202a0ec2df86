//! The four corners of the gamma diagram:
//!
//! ```text
//!   Gamma_{p,q}  --p->inf-->  Gamma_q
//!      | q->1                   | q->1
//!   Gamma_p      --p->inf-->  Gamma
//! ```
//!
//! Every function returns the natural log of its value. Ratios of these
//! functions overflow quickly, so exponentiation is left to the caller
//! (see [`GammaValue`]).

use crate::error::{domain, Result};
use crate::qcore::{
    ln_bracket_ln, ln_one_minus_exp, log_pochhammer_ln, PQParams, SeriesControl,
};
use crate::sum::NeumaierSum;

/// Log-domain carrier for a gamma-type value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub log_value: f64,
}

impl GammaValue {
    pub fn from_log(log_value: f64) -> Self {
        Self { log_value }
    }

    /// `exp(log_value)`; may overflow to infinity or underflow to zero.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("x must be a positive finite real, got {x}"))
    }
}

/// `ln Gamma_{p,q}(x)` where
/// `Gamma_{p,q}(x) = [p]_q^x [p]_q! / ([x]_q [x+1]_q ... [x+p]_q)`.
///
/// The k-th numerator and denominator brackets share the factor `1/(1-q)`,
/// so they are paired as `ln(1-q^k) - ln(1-q^{x+k})`, which tends to zero
/// for large k instead of accumulating two large sums.
pub fn log_gamma_pq(x: f64, params: PQParams) -> Result<f64> {
    check_x(x)?;
    let ln_q = params.ln_q();
    let p = params.p();
    let mut acc = NeumaierSum::new();
    acc.add(x * ln_bracket_ln(f64::from(p), ln_q));
    acc.add(-ln_bracket_ln(x, ln_q));
    for k in 1..=p {
        let k = f64::from(k);
        acc.add(ln_one_minus_exp(k * ln_q) - ln_one_minus_exp((x + k) * ln_q));
    }
    Ok(acc.value())
}

/// `ln Gamma_{p,q}(u + d) - ln Gamma_{p,q}(u)` without cancellation.
///
/// Each bracket ratio is `(1 - q^{u+k+d}) / (1 - q^{u+k}) = 1 + q^{u+k} (1 - q^d) / (1 - q^{u+k})`,
/// so the increment keeps full relative precision as `d -> 0`.
pub(crate) fn log_gamma_pq_increment(u: f64, d: f64, params: PQParams) -> Result<f64> {
    check_x(u)?;
    check_x(u + d)?;
    let ln_q = params.ln_q();
    let one_minus_qd = -(d * ln_q).exp_m1();
    let mut acc = NeumaierSum::new();
    acc.add(d * ln_bracket_ln(f64::from(params.p()), ln_q));
    for k in 0..=params.p() {
        let y = (u + f64::from(k)) * ln_q;
        acc.add(-(y.exp() * one_minus_qd / -y.exp_m1()).ln_1p());
    }
    Ok(acc.value())
}

/// `ln Gamma_p(x)`, Euler's truncation `p! p^x / (x (x+1) ... (x+p))`.
pub fn log_gamma_p(x: f64, p: u64) -> Result<f64> {
    check_x(x)?;
    if p == 0 {
        return domain("p must be a positive integer");
    }
    // ln k - ln(x+k) = -ln(1 + x/k)
    let mut acc = NeumaierSum::new();
    acc.add(x * (p as f64).ln());
    acc.add(-x.ln());
    for k in 1..=p {
        acc.add(-(x / k as f64).ln_1p());
    }
    Ok(acc.value())
}

/// `ln Gamma_q(x)` for either branch of Jackson's q-gamma (`q != 1`).
///
/// For `0 < q < 1` this is `ln[(q;q)_inf / (q^x;q)_inf] + (1-x) ln(1-q)`;
/// for `q > 1` the products run in `1/q` and pick up `(x(x-1)/2) ln q`.
/// Near `q = 1` the products need on the order of `30 / |ln q|` factors, so
/// `ctl.max_terms` must be raised accordingly.
pub fn log_gamma_q(x: f64, q: f64, ctl: SeriesControl) -> Result<f64> {
    check_x(x)?;
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return domain(format!("q must be positive and different from 1, got {q}"));
    }
    if q < 1.0 {
        let ln_q = q.ln();
        let num = log_pochhammer_ln(ln_q, ln_q, ctl)?;
        let den = log_pochhammer_ln(x * ln_q, ln_q, ctl)?;
        Ok(num - den + (1.0 - x) * (-q).ln_1p())
    } else {
        let ln_q = q.ln();
        let ln_r = -ln_q;
        let num = log_pochhammer_ln(ln_r, ln_r, ctl)?;
        let den = log_pochhammer_ln(x * ln_r, ln_r, ctl)?;
        Ok(num - den + (1.0 - x) * (q - 1.0).ln() + 0.5 * x * (x - 1.0) * ln_q)
    }
}

/// Shift target for the asymptotic expansions.
pub(crate) const ASYMPTOTIC_FROM: f64 = 10.0;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Classical `ln Gamma(x)` for `x > 0`.
///
/// Shifts `x` upward past 10 with the recurrence and sums the Stirling
/// series there. Used as the trusted corner of the diagram.
pub fn log_gamma_classical(x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < ASYMPTOTIC_FROM {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    let half_ln_2pi = 0.918_938_533_204_672_8;
    Ok((z - 0.5) * z.ln() - z + half_ln_2pi + series - prod.ln())
}
