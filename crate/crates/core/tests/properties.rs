use pqgamma::gammafam::{log_gamma_p, log_gamma_pq};
use pqgamma::psifam::{psi_pq, psi_pq_deriv};
use pqgamma::qcore::{log_q_factorial, log_q_pochhammer_inf, q_bracket, PQParams, SeriesControl};
use proptest::prelude::*;

const Q_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn q_value() -> impl Strategy<Value = f64> {
    prop_oneof![prop::sample::select(Q_GRID.to_vec()), 0.01f64..0.99]
}

fn ulps_apart(a: f64, b: f64) -> u64 {
    let (a, b) = (a.to_bits() as i64, b.to_bits() as i64);
    (a - b).unsigned_abs()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 512,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn bracket_complements_power(n in 0.0f64..60.0, q in q_value()) {
        let b = q_bracket(n, q).unwrap();
        let lhs = b * (1.0 - q) + q.powf(n);
        prop_assert!(ulps_apart(lhs, 1.0) <= 2, "n={n} q={q} lhs={lhs:e}");
    }

    #[test]
    fn bracket_increases_in_n(k in 1u32..200, q in q_value()) {
        let n = f64::from(k) * 0.1;
        let (lo, hi) = (q_bracket(n, q).unwrap(), q_bracket(n + 0.1, q).unwrap());
        // the true increment is q^n (1 - q^0.1) / (1 - q); below an ulp it can only tie
        let rise = q.powf(n) * (1.0 - q.powf(0.1)) / (1.0 - q);
        if rise > 4.0 * f64::EPSILON * hi {
            prop_assert!(lo < hi);
        } else {
            prop_assert!(lo <= hi);
        }
    }

    #[test]
    fn factorial_is_product_of_brackets(p in 1u32..=50, q in q_value()) {
        let prod: f64 = (1..=p).map(|k| q_bracket(f64::from(k), q).unwrap()).product();
        let got = log_q_factorial(p, q).unwrap().exp();
        prop_assert!(((got - prod) / prod).abs() <= 1e-13, "p={p} q={q}");
    }

    #[test]
    fn pochhammer_matches_direct_product(a in 0.0f64..=0.9, q in 0.01f64..=0.9) {
        let direct: f64 = (0..10_000).map(|j| (1.0 - a * q.powi(j)).ln()).sum();
        let got = log_q_pochhammer_inf(a, q, SeriesControl::default()).unwrap();
        prop_assert!((got - direct).abs() <= 1e-12, "a={a} q={q}: {got} vs {direct}");
    }

    #[test]
    fn gamma_pq_recurrence(x in 0.01f64..10.0, p in 1u32..=50, q in prop::sample::select(Q_GRID.to_vec())) {
        let params = PQParams::new(p, q).unwrap();
        let step = log_gamma_pq(x + 1.0, params).unwrap() - log_gamma_pq(x, params).unwrap();
        let expect = q_bracket(f64::from(p), q).unwrap().ln() + q_bracket(x, q).unwrap().ln()
            - q_bracket(x + f64::from(p) + 1.0, q).unwrap().ln();
        prop_assert!((step - expect).abs() <= 1e-12, "x={x} p={p} q={q}");
    }

    #[test]
    fn gamma_pq_log_convex(
        x in 0.01f64..10.0,
        y in 0.01f64..10.0,
        alpha in 0.0f64..1.0,
        p in 1u32..=20,
        q in prop::sample::select(Q_GRID.to_vec()),
    ) {
        let params = PQParams::new(p, q).unwrap();
        let beta = 1.0 - alpha;
        let mid = log_gamma_pq(alpha * x + beta * y, params).unwrap();
        let chord = alpha * log_gamma_pq(x, params).unwrap() + beta * log_gamma_pq(y, params).unwrap();
        prop_assert!(mid <= chord + 1e-12);
    }

    #[test]
    fn bracket_young_inequality(x in 0.0f64..20.0, y in 0.0f64..20.0, alpha in 0.0f64..1.0, q in q_value()) {
        let beta = 1.0 - alpha;
        let lhs = q_bracket(1.0 + x, q).unwrap().powf(alpha) * q_bracket(1.0 + y, q).unwrap().powf(beta);
        let rhs = q_bracket(1.0 + alpha * x + beta * y, q).unwrap();
        prop_assert!(lhs <= rhs + 1e-14);
    }

    #[test]
    fn psi_pq_increasing(x in 0.01f64..20.0, dx in 1e-3f64..5.0, p in 1u32..=30, q in q_value()) {
        let params = PQParams::new(p, q).unwrap();
        let (lo, hi) = (psi_pq(x, params).unwrap(), psi_pq(x + dx, params).unwrap());
        let rise = psi_pq_deriv(x + dx, params, 1, SeriesControl::default()).unwrap() * dx;
        if rise > 64.0 * f64::EPSILON * hi.abs().max(1.0) {
            prop_assert!(lo < hi);
        } else {
            prop_assert!(lo <= hi);
        }
    }

    #[test]
    fn psi_pq_is_log_gamma_slope(x in 0.5f64..=10.0, p in 1u32..=20, q in prop::sample::select(Q_GRID.to_vec())) {
        let params = PQParams::new(p, q).unwrap();
        let h = 1e-5;
        let fd = (log_gamma_pq(x + h, params).unwrap() - log_gamma_pq(x - h, params).unwrap()) / (2.0 * h);
        let psi = psi_pq(x, params).unwrap();
        prop_assert!((fd - psi).abs() <= 1e-6 * psi.abs().max(1e-3), "x={x} p={p} q={q}: {fd} vs {psi}");
    }

    #[test]
    fn psi_pq_derivatives_are_slopes(x in 0.5f64..=10.0, p in 1u32..=20, q in prop::sample::select(Q_GRID.to_vec())) {
        let params = PQParams::new(p, q).unwrap();
        let ctl = SeriesControl::default();
        let h = 1e-5;
        let d1 = psi_pq_deriv(x, params, 1, ctl).unwrap();
        let fd1 = (psi_pq(x + h, params).unwrap() - psi_pq(x - h, params).unwrap()) / (2.0 * h);
        prop_assert!((fd1 - d1).abs() <= 1e-5 * d1.abs().max(1e-3));
        let d2 = psi_pq_deriv(x, params, 2, ctl).unwrap();
        let fd2 = (psi_pq_deriv(x + h, params, 1, ctl).unwrap() - psi_pq_deriv(x - h, params, 1, ctl).unwrap())
            / (2.0 * h);
        prop_assert!((fd2 - d2).abs() <= 1e-5 * d2.abs().max(1e-3));
    }

    #[test]
    fn psi_prime_sign_pattern(x in 0.1f64..10.0, p in 1u32..=10, q in prop::sample::select(Q_GRID.to_vec())) {
        let params = PQParams::new(p, q).unwrap();
        for n in 1..=6u32 {
            let d = psi_pq_deriv(x, params, n, SeriesControl::default()).unwrap();
            // (-1)^(n-1) psi^{(n)} > 0, i.e. psi' is completely monotonic
            let signed = if n % 2 == 1 { d } else { -d };
            prop_assert!(signed > 0.0, "n={n} x={x}: {d}");
        }
    }

    #[test]
    fn gamma_p_recurrence(x in 0.01f64..10.0, p in 1u64..=1000) {
        let step = log_gamma_p(x + 1.0, p).unwrap() - log_gamma_p(x, p).unwrap();
        let expect = (p as f64).ln() + x.ln() - (x + p as f64 + 1.0).ln();
        prop_assert!((step - expect).abs() <= 1e-11);
    }
}
