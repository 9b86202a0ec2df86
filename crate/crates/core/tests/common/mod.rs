//! Reference implementations written independently of the library code.
#![allow(dead_code)]

/// `psi_{p,q}^{(n)}(x)` by brute force: differentiate
/// `ln q * sum_{k=0}^{p} q^{x+k} / (1 - q^{x+k})` term by term through its
/// geometric expansion and sum the double series until terms vanish.
pub fn psi_deriv_double_series(x: f64, p: u32, q: f64, n: u32) -> f64 {
    let l = q.ln();
    let mut total = 0.0;
    for k in 0..=p {
        let y = x + f64::from(k);
        let mut m = 1u32;
        loop {
            let mf = f64::from(m);
            let term = l * (mf * l).powi(n as i32) * q.powf(mf * y);
            total += term;
            if term.abs() < 1e-300 || (m > 8 && term.abs() < 1e-19 * total.abs()) {
                break;
            }
            m += 1;
        }
    }
    total
}

/// Same quantity from closed-form derivatives of `u/(1-u)`, `u = q^y`:
/// first three derivatives in `y` carry Eulerian-number numerators.
pub fn psi_deriv_closed_form(x: f64, p: u32, q: f64, n: u32) -> f64 {
    let l = q.ln();
    (0..=p)
        .map(|k| {
            let u = q.powf(x + f64::from(k));
            let w = 1.0 - u;
            let g = match n {
                1 => u / (w * w),
                2 => u * (1.0 + u) / (w * w * w),
                3 => u * (1.0 + 4.0 * u + u * u) / (w * w * w * w),
                _ => panic!("closed form only for n <= 3"),
            };
            l.powi(n as i32 + 1) * g
        })
        .sum()
}

/// `ln Gamma_{p,q}(x)` straight from the product definition, with brackets
/// `(1 - q^y)/(1 - q)`.
pub fn log_gamma_pq_direct(x: f64, p: u32, q: f64) -> f64 {
    let br = |y: f64| (1.0 - q.powf(y)) / (1.0 - q);
    let mut s = x * br(f64::from(p)).ln();
    for k in 1..=p {
        s += br(f64::from(k)).ln();
    }
    for k in 0..=p {
        s -= br(x + f64::from(k)).ln();
    }
    s
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
