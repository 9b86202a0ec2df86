//! q-brackets, q-factorials and the infinite q-Pochhammer product.

use pqgamma::qcore::{log_q_factorial, log_q_pochhammer_inf, q_bracket, SeriesControl};

fn main() -> pqgamma::error::Result<()> {
    println!("[n]_q for n = 3.5 as q -> 1");
    for q in [0.5, 0.9, 0.99, 1.0 - 1e-6, 1.0 - 1e-12] {
        println!("  q = {q:<20} [3.5]_q = {:.15}", q_bracket(3.5, q)?);
    }

    let q = 0.5;
    let fact = log_q_factorial(5, q)?.exp();
    let by_hand: f64 = (1..=5).map(|k| q_bracket(f64::from(k), q).unwrap()).product();
    println!("\n[5]_q! at q = 0.5: {fact} (product of brackets: {by_hand})");

    let ctl = SeriesControl::default();
    for (a, q) in [(0.5, 0.5), (0.9, 0.9), (0.3, 0.99)] {
        let v = log_q_pochhammer_inf(a, q, ctl)?;
        println!("ln (a; q)_inf at a = {a}, q = {q}: {v:.15}");
    }

    // a product that needs more factors than the cap allows is reported, not truncated
    let tight = SeriesControl::default().with_max_terms(100);
    match log_q_pochhammer_inf(0.5, 0.999, tight) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("\nwith max_terms = 100: {e}"),
    }
    Ok(())
}
