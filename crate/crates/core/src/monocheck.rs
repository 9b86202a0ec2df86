//! Numerical verification of complete monotonicity, logarithmic complete
//! monotonicity, log-convexity and monotone decrease.
//!
//! A function is completely monotonic on an interval exactly when every
//! forward difference satisfies `(-1)^n Δ_h^n f(x) >= 0`, so the checks here
//! only need function values: for each step `h` and each base point, a
//! difference table is built by the recursion
//! `Δ^n f(x) = Δ^{n-1} f(x+h) - Δ^{n-1} f(x)` and every entry's sign is
//! tested. Strict sign claims can only be confirmed up to rounding, so a test
//! passes when the signed quantity is at least `-tol`, with
//! `tol = tol_scale * EPSILON * (largest magnitude in the tables)`.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::sum::NeumaierSum;

/// Default multiplier applied to machine epsilon when forming tolerances.
pub const DEFAULT_TOL_SCALE: f64 = 1e3;

/// Highest difference order the engine accepts.
pub const MAX_ORDER_CAP: u32 = 8;

/// Sampling grid for a verification campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    /// Number of base points; log-convexity draws `points^2` triples.
    pub points: usize,
    pub steps: Vec<f64>,
    pub max_order: u32,
    pub seed: u64,
}

impl GridSpec {
    /// Grid on `[lo, hi]` with default points, steps, order and seed.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Self {
            lo,
            hi,
            points: 64,
            steps: vec![1e-2, 1e-1, 0.5],
            max_order: 6,
            seed: 42,
        }
        .validated()
    }

    pub fn with_points(mut self, points: usize) -> Result<Self> {
        self.points = points;
        self.validated()
    }

    pub fn with_steps(mut self, steps: Vec<f64>) -> Result<Self> {
        self.steps = steps;
        self.validated()
    }

    pub fn with_max_order(mut self, max_order: u32) -> Result<Self> {
        self.max_order = max_order;
        self.validated()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validated(self) -> Result<Self> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return domain(format!("grid needs lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.points == 0 {
            return domain("grid needs at least one point");
        }
        if self.steps.is_empty() || self.steps.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return domain("grid steps must be positive");
        }
        if self.max_order > MAX_ORDER_CAP {
            return domain(format!("max_order is capped at {MAX_ORDER_CAP}"));
        }
        Ok(self)
    }

    /// `points` equally spaced abscissae covering `[lo, hi]`.
    pub fn abscissae(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let span = self.hi - self.lo;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.hi
                } else {
                    self.lo + span * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Where the worst test quantity was observed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `(-1)^n Δ_h^n f(x)`.
    Difference { x: f64, order: u32, step: f64 },
    /// Chord test at `alpha x + (1 - alpha) y`.
    Triple { x: f64, y: f64, alpha: f64 },
    /// Consecutive grid points `x_lo < x_hi`.
    Pair { x_lo: f64, x_hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub verdict: Verdict,
    /// Most negative signed test quantity observed (positive when every
    /// test holds with room to spare).
    pub min_slack: f64,
    pub witness: Option<Witness>,
    pub tolerance_used: f64,
    /// Number of function evaluations.
    pub evaluations: usize,
    /// Generator seed, for randomized checks.
    pub seed: Option<u64>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Keeps the worst `(slack, witness)` under a total order so the result
/// does not depend on evaluation order.
struct Worst {
    slack: f64,
    witness: Option<Witness>,
}

impl Worst {
    fn new() -> Self {
        Self {
            slack: f64::INFINITY,
            witness: None,
        }
    }

    fn offer(&mut self, slack: f64, witness: Witness) {
        let better = match slack.total_cmp(&self.slack) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match self.witness {
                None => true,
                Some(w) => witness_key(&witness) < witness_key(&w),
            },
        };
        if better {
            self.slack = slack;
            self.witness = Some(witness);
        }
    }

    fn into_report(self, tolerance: f64, evaluations: usize, seed: Option<u64>) -> MonotonicityReport {
        let verdict = if self.slack >= -tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        MonotonicityReport {
            verdict,
            min_slack: self.slack,
            witness: self.witness,
            tolerance_used: tolerance,
            evaluations,
            seed,
        }
    }
}

fn witness_key(w: &Witness) -> (u64, u64, u64) {
    let k = |v: f64| v.to_bits();
    match *w {
        Witness::Difference { x, order, step } => (k(x), u64::from(order), k(step)),
        Witness::Triple { x, y, alpha } => (k(x), k(y), k(alpha)),
        Witness::Pair { x_lo, x_hi } => (k(x_lo), k(x_hi), 0),
    }
}

fn finite_at(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            x,
            reason: format!("non-finite value {v}"),
        })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * f64::from(n - i) / f64::from(i + 1);
    }
    c.round()
}

/// `Δ_h^n f(x) = sum_{j=0}^{n} (-1)^{n-j} C(n,j) f(x + j h)`, accumulated
/// with compensated summation.
pub fn forward_difference<F>(f: F, x: f64, h: f64, n: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut acc = NeumaierSum::new();
    for j in 0..=n {
        let xj = x + f64::from(j) * h;
        let v = finite_at(xj, f(xj)?)?;
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * binomial(n, j) * v);
    }
    Ok(acc.value())
}

/// Forward-difference table `rows[n][k] = Δ_h^n f(x + k h)` built from the
/// values `f(x), f(x+h), ..., f(x+mh)` by repeated differencing.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTable {
    pub x: f64,
    pub h: f64,
    pub rows: Vec<Vec<f64>>,
}

impl DifferenceTable {
    pub fn from_values(x: f64, h: f64, values: Vec<f64>) -> Self {
        let mut rows = vec![values];
        while rows.last().map_or(0, Vec::len) > 1 {
            let prev = rows.last().unwrap();
            let next: Vec<f64> = prev.windows(2).map(|w| w[1] - w[0]).collect();
            rows.push(next);
        }
        Self { x, h, rows }
    }

    /// Highest order present.
    pub fn order(&self) -> u32 {
        self.rows.len().saturating_sub(1) as u32
    }

    pub fn max_magnitude(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Tables for every step in the grid and every base point, each extended as
/// far as `min(max_order, (hi - x)/h)` so that `x + n h <= hi` always holds.
fn difference_tables<F>(f: &F, grid: &GridSpec) -> Result<(Vec<DifferenceTable>, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut tables = Vec::new();
    let mut evaluations = 0;
    for &h in &grid.steps {
        for x in grid.abscissae() {
            let reach = ((grid.hi - x) / h).floor().max(0.0);
            let mut m = (reach.min(f64::from(grid.max_order))) as u32;
            while m > 0 && x + f64::from(m) * h > grid.hi {
                m -= 1;
            }
            let mut values = Vec::with_capacity(m as usize + 1);
            for j in 0..=m {
                let xj = x + f64::from(j) * h;
                values.push(finite_at(xj, f(xj)?)?);
                evaluations += 1;
            }
            tables.push(DifferenceTable::from_values(x, h, values));
        }
    }
    Ok((tables, evaluations))
}

fn sign_test<F>(f: &F, grid: &GridSpec, tol_scale: f64, min_order: u32) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tol_scale >= 0.0) {
        return domain(format!("tol_scale must be nonnegative, got {tol_scale}"));
    }
    let (tables, evaluations) = difference_tables(f, grid)?;
    let scale = tables.iter().fold(0.0f64, |m, t| m.max(t.max_magnitude()));
    let mut worst = Worst::new();
    for t in &tables {
        for (n, row) in t.rows.iter().enumerate().skip(min_order as usize) {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for (k, v) in row.iter().enumerate() {
                let x = t.x + k as f64 * t.h;
                worst.offer(
                    sign * v,
                    Witness::Difference {
                        x,
                        order: n as u32,
                        step: t.h,
                    },
                );
            }
        }
    }
    Ok(worst.into_report(tol_scale * f64::EPSILON * scale, evaluations, None))
}

/// Complete-monotonicity test: `(-1)^n Δ_h^n f(x) >= -tol` for all grid
/// points, steps and orders `0..=max_order`.
///
/// A failed test is a verdict, not an error; errors come only from `f`.
pub fn check_cm<F>(f: F, grid: &GridSpec, tol_scale: f64) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    sign_test(&f, grid, tol_scale, 0)
}

fn positive_log<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let v = f(x)?;
    if v > 0.0 && v.is_finite() {
        Ok(v.ln())
    } else {
        Err(Error::Evaluation {
            x,
            reason: format!("function must be positive and finite, got {v}"),
        })
    }
}

/// Logarithmic complete monotonicity: the difference test applied to
/// `ln f` for orders `1..=max_order`.
pub fn check_lcm<F>(f: F, grid: &GridSpec, tol_scale: f64) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = |x: f64| positive_log(&f, x);
    sign_test(&g, grid, tol_scale, 1)
}

/// [`check_lcm`] for callers that already hold `ln f`.
pub fn check_lcm_log<F>(log_f: F, grid: &GridSpec, tol_scale: f64) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    sign_test(&log_f, grid, tol_scale, 1)
}

/// Log-convexity on `points^2` seeded random triples `(x, y, alpha)`:
/// `ln f(alpha x + (1-alpha) y) <= alpha ln f(x) + (1-alpha) ln f(y) + tol`.
pub fn check_log_convex<F>(f: F, grid: &GridSpec) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = |x: f64| positive_log(&f, x);
    convexity_test(&g, grid)
}

/// [`check_log_convex`] for callers that already hold `ln f`.
pub fn check_log_convex_log<F>(log_f: F, grid: &GridSpec) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    convexity_test(&log_f, grid)
}

fn convexity_test<F>(g: &F, grid: &GridSpec) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut rng = Pcg64::seed_from_u64(grid.seed);
    let samples = grid.points * grid.points;
    let mut worst = Worst::new();
    let mut scale = 0.0f64;
    for _ in 0..samples {
        let x = rng.random_range(grid.lo..=grid.hi);
        let y = rng.random_range(grid.lo..=grid.hi);
        let alpha: f64 = rng.random_range(0.0..1.0);
        let beta = 1.0 - alpha;
        let mid = (alpha * x + beta * y).clamp(grid.lo, grid.hi);
        let (gx, gy, gm) = (g(x)?, g(y)?, g(mid)?);
        scale = scale.max(gx.abs()).max(gy.abs()).max(gm.abs());
        worst.offer(alpha * gx + beta * gy - gm, Witness::Triple { x, y, alpha });
    }
    let tol = DEFAULT_TOL_SCALE * f64::EPSILON * scale;
    Ok(worst.into_report(tol, 3 * samples, Some(grid.seed)))
}

/// Monotone decrease over the sorted grid: `f(x_{i+1}) <= f(x_i) + tol`.
pub fn check_decreasing<F>(f: F, grid: &GridSpec) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let xs = grid.abscissae();
    let values = xs
        .iter()
        .map(|&x| f(x).and_then(|v| finite_at(x, v)))
        .collect::<Result<Vec<_>>>()?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = Worst::new();
    for i in 1..xs.len() {
        worst.offer(
            values[i - 1] - values[i],
            Witness::Pair {
                x_lo: xs[i - 1],
                x_hi: xs[i],
            },
        );
    }
    let tol = DEFAULT_TOL_SCALE * f64::EPSILON * scale;
    Ok(worst.into_report(tol, xs.len(), None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ok(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn forward_difference_basics() {
        assert_eq!(forward_difference(ok(|_| 3.0), 0.7, 0.1, 1).unwrap(), 0.0);
        assert_eq!(forward_difference(ok(|x| x * x), 0.0, 1.0, 2).unwrap(), 2.0);
        let d = forward_difference(ok(|x| (-x).exp()), 0.0, 0.1, 3).unwrap();
        assert_relative_eq!(d, ((-0.1f64).exp() - 1.0).powi(3), max_relative = 1e-12);
        assert!(d < 0.0);
    }

    #[test]
    fn forward_difference_propagates_failure() {
        let f = |x: f64| if x > 0.5 { Err(Error::Domain("boom".into())) } else { Ok(x) };
        assert!(forward_difference(f, 0.0, 0.3, 2).is_err());
    }

    #[test]
    fn table_rows_shrink_by_one() {
        let t = DifferenceTable::from_values(0.0, 1.0, vec![1.0, 4.0, 9.0, 16.0]);
        assert_eq!(t.order(), 3);
        assert_eq!(t.rows[1], vec![3.0, 5.0, 7.0]);
        assert_eq!(t.rows[2], vec![2.0, 2.0]);
        assert_eq!(t.rows[3], vec![0.0]);
    }

    #[test]
    fn cm_accepts_exponential_decay() {
        let grid = GridSpec::new(0.0, 5.0).unwrap();
        let r = check_cm(ok(|x| (-x).exp()), &grid, DEFAULT_TOL_SCALE).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.evaluations > 0);
    }

    #[test]
    fn cm_rejects_increasing_line_at_order_one() {
        let grid = GridSpec::new(0.0, 5.0).unwrap();
        let r = check_cm(ok(|x| x), &grid, DEFAULT_TOL_SCALE).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        match r.witness.unwrap() {
            Witness::Difference { order, step, .. } => {
                assert_eq!(order, 1);
                assert_relative_eq!(r.min_slack, -step, max_relative = 1e-9);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn grid_respects_upper_end() {
        let grid = GridSpec::new(0.0, 1.0).unwrap().with_points(5).unwrap();
        let seen = std::cell::RefCell::new(Vec::new());
        let f = |x: f64| {
            seen.borrow_mut().push(x);
            Ok(x)
        };
        check_cm(f, &grid, DEFAULT_TOL_SCALE).unwrap();
        assert!(seen.borrow().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn lcm_cases() {
        let grid = GridSpec::new(0.5, 5.0).unwrap();
        let r = check_lcm(ok(|x| (1.0 / x).exp()), &grid, DEFAULT_TOL_SCALE).unwrap();
        assert!(r.passed(), "{r:?}");

        let grid = GridSpec::new(0.0, 5.0).unwrap();
        let r = check_lcm(ok(f64::exp), &grid, DEFAULT_TOL_SCALE).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(matches!(r.witness, Some(Witness::Difference { order: 1, .. })));
    }

    #[test]
    fn lcm_rejects_nonpositive_function() {
        let grid = GridSpec::new(-1.0, 1.0).unwrap();
        assert!(matches!(
            check_lcm(ok(|x| x), &grid, DEFAULT_TOL_SCALE),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn log_convex_cases() {
        let grid = GridSpec::new(1.0, 5.0).unwrap();
        let r = check_log_convex(ok(|x| x), &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.seed, Some(42));

        let grid = GridSpec::new(0.0, 3.0).unwrap();
        let r = check_log_convex(ok(|x| (x * x).exp()), &grid).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.evaluations, 3 * 64 * 64);
    }

    #[test]
    fn log_convex_is_reproducible() {
        let grid = GridSpec::new(1.0, 5.0).unwrap().with_seed(7);
        let a = check_log_convex(ok(|x| x), &grid).unwrap();
        let b = check_log_convex(ok(|x| x), &grid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn decreasing_cases() {
        let grid = GridSpec::new(0.0, 3.0).unwrap();
        assert!(check_decreasing(ok(|x| -x), &grid).unwrap().passed());
        let grid = GridSpec::new(1.0, 2.0).unwrap();
        let r = check_decreasing(ok(|x| x * x), &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 1.0).is_err());
        assert!(GridSpec::new(0.0, 1.0).unwrap().with_max_order(9).is_err());
        assert!(GridSpec::new(0.0, 1.0).unwrap().with_steps(vec![]).is_err());
        assert!(GridSpec::new(0.0, 1.0).unwrap().with_points(0).is_err());
        let g = GridSpec::new(0.0, 1.0).unwrap();
        assert_eq!(g.steps, vec![1e-2, 1e-1, 0.5]);
        assert_eq!((g.points, g.max_order, g.seed), (64, 6, 42));
    }
}
