//! Functions built from `Gamma_{p,q}` whose monotonicity properties the
//! verification campaigns exercise, with validators for their hypotheses.
//!
//! All of them are evaluated in log domain first; the plain-value
//! accessors exponentiate at the end.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gammafam::{log_gamma_pq, log_gamma_pq_increment};
use crate::psifam::psi_pq;
use crate::qcore::{ln_bracket_ln, PQParams};
use crate::sum::NeumaierSum;

/// Shift vectors `a`, `b` of the ratio product
/// `G(x) = prod_i Gamma_{p,q}(x + a_i) / Gamma_{p,q}(x + b_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSpec {
    a: Vec<f64>,
    b: Vec<f64>,
}

/// First hypothesis that a candidate [`RatioSpec`] breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioViolation {
    Empty,
    NonPositive { vector: char, index: usize, value: f64 },
    NotNondecreasing { vector: char, index: usize },
    PartialSum { k: usize, sum_a: f64, sum_b: f64 },
}

impl fmt::Display for RatioViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // indices are reported 1-based
        match *self {
            Self::Empty => write!(f, "shift vectors are empty"),
            Self::NonPositive { vector, index, value } => {
                write!(f, "{vector}_{} = {value} is not positive", index + 1)
            }
            Self::NotNondecreasing { vector, index } => {
                write!(f, "{vector} is not nondecreasing at index {}", index + 1)
            }
            Self::PartialSum { k, sum_a, sum_b } => write!(
                f,
                "partial-sum domination fails at k={k}: sum a = {sum_a} > sum b = {sum_b}"
            ),
        }
    }
}

/// Checks ordering, positivity and partial-sum domination
/// `sum_{i<=k} a_i <= sum_{i<=k} b_i` for every `k`.
///
/// A length mismatch is an error rather than a violation.
pub fn validate_ratio_spec(a: &[f64], b: &[f64]) -> Result<std::result::Result<(), RatioViolation>> {
    if a.len() != b.len() {
        return Err(Error::InvalidSpec(format!(
            "shift vectors differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Ok(Err(RatioViolation::Empty));
    }
    for (name, v) in [('a', a), ('b', b)] {
        if let Some(index) = v.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return Ok(Err(RatioViolation::NonPositive {
                vector: name,
                index,
                value: v[index],
            }));
        }
        if let Some(i) = v.windows(2).position(|w| w[1] < w[0]) {
            return Ok(Err(RatioViolation::NotNondecreasing {
                vector: name,
                index: i + 1,
            }));
        }
    }
    let (mut sum_a, mut sum_b) = (0.0, 0.0);
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        sum_a += x;
        sum_b += y;
        if sum_a > sum_b {
            return Ok(Err(RatioViolation::PartialSum { k: k + 1, sum_a, sum_b }));
        }
    }
    Ok(Ok(()))
}

impl RatioSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        match validate_ratio_spec(&a, &b)? {
            Ok(()) => Ok(Self { a, b }),
            Err(v) => Err(Error::InvalidSpec(v.to_string())),
        }
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// `ln G_{p,q}(x) = sum_i [ln Gamma_{p,q}(x + a_i) - ln Gamma_{p,q}(x + b_i)]`.
pub fn log_g_pq(x: f64, spec: &RatioSpec, params: PQParams) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("x must be positive, got {x}"));
    }
    let mut acc = NeumaierSum::new();
    for (a, b) in spec.a.iter().zip(&spec.b) {
        acc.add(log_gamma_pq(x + a, params)?);
        acc.add(-log_gamma_pq(x + b, params)?);
    }
    Ok(acc.value())
}

/// Which form of the root function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootVariant {
    /// `([p]_q / [p+1]_q * Gamma_{p,q}(x))^{-1/x}`.
    AsDefined,
    /// `Gamma_{p,q}(x+1)^{-1/x}`, the function the monotonicity argument
    /// actually differentiates.
    AsProved,
}

impl RootVariant {
    pub const ALL: [RootVariant; 2] = [RootVariant::AsDefined, RootVariant::AsProved];

    pub fn name(self) -> &'static str {
        match self {
            Self::AsDefined => "as_defined",
            Self::AsProved => "as_proved",
        }
    }
}

/// `ln f(x)` for the root function of [`RootVariant`].
pub fn log_f_root(x: f64, params: PQParams, variant: RootVariant) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("x must be positive, got {x}"));
    }
    let inner = match variant {
        RootVariant::AsDefined => {
            let p = f64::from(params.p());
            let ln_ratio = ln_bracket_ln(p, params.ln_q()) - ln_bracket_ln(p + 1.0, params.ln_q());
            ln_ratio + log_gamma_pq(x, params)?
        }
        RootVariant::AsProved => log_gamma_pq(x + 1.0, params)?,
    };
    Ok(-inner / x)
}

/// The root function itself, `exp(log_f_root)`.
pub fn f_root(x: f64, params: PQParams, variant: RootVariant) -> Result<f64> {
    log_f_root(x, params, variant).map(f64::exp)
}

/// Two distinct shifts `s`, `t` and a base point `beta >= -min(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointSpec {
    s: f64,
    t: f64,
    beta: f64,
}

impl TwoPointSpec {
    pub fn new(s: f64, t: f64, beta: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite() && beta.is_finite()) {
            return domain("s, t and beta must be finite");
        }
        if s == t {
            return domain(format!("s and t must differ, both are {s}"));
        }
        if beta < -s.min(t) {
            return domain(format!("beta = {beta} must be >= -min(s, t) = {}", -s.min(t)));
        }
        Ok(Self { s, t, beta })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `min(s, t)`; the functions below live on `(-alpha, inf)`.
    pub fn alpha(&self) -> f64 {
        self.s.min(self.t)
    }

    /// Same base point with `s` and `t` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            s: self.t,
            t: self.s,
            beta: self.beta,
        }
    }
}

/// `phi(u) = psi_{p,q}(u + s) - psi_{p,q}(u + t)`, the closed form of
/// `int_t^s psi'_{p,q}(u + v) dv`.
pub fn phi(u: f64, spec: &TwoPointSpec, params: PQParams) -> Result<f64> {
    if !(u + spec.alpha() > 0.0) {
        return domain(format!("phi needs u > -min(s, t) = {}, got {u}", -spec.alpha()));
    }
    Ok(psi_pq(u + spec.s, params)? - psi_pq(u + spec.t, params)?)
}

/// Radius around `beta` inside which `h_beta` switches to the midpoint fill.
pub const H_BETA_SWITCH_RADIUS: f64 = 1e-6;

/// `ln h_{beta,p,q}(x)`.
///
/// Away from `beta` this is the difference quotient
/// `[L(x+s) - L(beta+s) - L(x+t) + L(beta+t)] / (x - beta)` with
/// `L = ln Gamma_{p,q}`; within [`H_BETA_SWITCH_RADIUS`] of `beta` the
/// quotient is replaced by `phi((x + beta)/2)`, which equals it to second
/// order and is exact at `x = beta`.
pub fn log_h_beta(x: f64, spec: &TwoPointSpec, params: PQParams) -> Result<f64> {
    let alpha = spec.alpha();
    if !(x > -alpha) {
        return domain(format!("h_beta needs x > -alpha = {}, got {x}", -alpha));
    }
    if !(spec.beta > -alpha) {
        return domain(format!(
            "h_beta cannot be evaluated with beta = -alpha = {}",
            spec.beta
        ));
    }
    let dx = x - spec.beta;
    if dx.abs() <= H_BETA_SWITCH_RADIUS {
        return phi(0.5 * (x + spec.beta), spec, params);
    }
    let rise_s = log_gamma_pq_increment(spec.beta + spec.s, dx, params)?;
    let rise_t = log_gamma_pq_increment(spec.beta + spec.t, dx, params)?;
    Ok((rise_s - rise_t) / dx)
}

pub fn h_beta(x: f64, spec: &TwoPointSpec, params: PQParams) -> Result<f64> {
    log_h_beta(x, spec, params).map(f64::exp)
}

/// The six reals of `f1(x) = Gamma_{p,q}(a + b x)^c / Gamma_{p,q}(d + e x)^f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineInequalitySpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl AffineInequalitySpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    /// Parses six comma-separated reals `a,b,c,d,e,f`.
    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match *v {
            [a, b, c, d, e, f] => Ok(Self::new(a, b, c, d, e, f)),
            _ => domain(format!("expected six reals a,b,c,d,e,f, got {}", v.len())),
        }
    }

    /// `(a + b x, d + e x)`.
    pub fn arguments(&self, x: f64) -> (f64, f64) {
        (self.a + self.b * x, self.d + self.e * x)
    }

    fn checked_arguments(&self, x: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.arguments(x);
        if !(lo > 0.0) || !(hi > 0.0) {
            return domain(format!(
                "need a + b x > 0 and d + e x > 0 at x = {x}, got {lo} and {hi}"
            ));
        }
        Ok((lo, hi))
    }
}

/// `ln f1(x) = c ln Gamma_{p,q}(a + b x) - f ln Gamma_{p,q}(d + e x)`.
pub fn log_f1(x: f64, spec: &AffineInequalitySpec, params: PQParams) -> Result<f64> {
    let (u, v) = spec.checked_arguments(x)?;
    Ok(spec.c * log_gamma_pq(u, params)? - spec.f * log_gamma_pq(v, params)?)
}

pub fn f1(x: f64, spec: &AffineInequalitySpec, params: PQParams) -> Result<f64> {
    log_f1(x, spec, params).map(f64::exp)
}

/// The three sign lemmas about `psi_{p,q}` at affine arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignLemma {
    /// `a + b x <= d + e x` implies `psi(a + b x) <= psi(d + e x)`.
    L41,
    /// Adds `ef >= bc > 0` and a positive psi value; concludes
    /// `bc psi(a + b x) - ef psi(d + e x) <= 0`.
    L42,
    /// Adds `bc >= ef > 0` and a negative psi value; same conclusion.
    L43,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub hypotheses_hold: bool,
    /// Evaluated regardless of the hypotheses; only meaningful when they hold.
    pub conclusion_holds: bool,
}

/// Evaluates one lemma's hypotheses and conclusion at `x`.
///
/// The constant `c` plays no role in [`SignLemma::L41`].
pub fn lemma_sign_check(
    spec: &AffineInequalitySpec,
    params: PQParams,
    x: f64,
    which: SignLemma,
) -> Result<LemmaCheck> {
    let (u, v) = spec.checked_arguments(x)?;
    let (psi_u, psi_v) = (psi_pq(u, params)?, psi_pq(v, params)?);
    let ordered = u <= v;
    let bc = spec.b * spec.c;
    let ef = spec.e * spec.f;
    let weighted = bc * psi_u - ef * psi_v <= 0.0;
    let check = match which {
        SignLemma::L41 => LemmaCheck {
            hypotheses_hold: ordered,
            conclusion_holds: psi_u - psi_v <= 0.0,
        },
        SignLemma::L42 => LemmaCheck {
            hypotheses_hold: ordered && ef >= bc && bc > 0.0 && (psi_u > 0.0 || psi_v > 0.0),
            conclusion_holds: weighted,
        },
        SignLemma::L43 => LemmaCheck {
            hypotheses_hold: ordered && bc >= ef && ef > 0.0 && (psi_v < 0.0 || psi_u < 0.0),
            conclusion_holds: weighted,
        },
    };
    Ok(check)
}
