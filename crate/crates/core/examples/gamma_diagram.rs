//! Walks the four corners of the gamma diagram and prints the convergence
//! of each edge.

use pqgamma::campaigns::{limit_table, Corner};

fn main() -> pqgamma::error::Result<()> {
    let x = 0.5;
    let edges = [
        (Corner::PToQ, vec![10.0, 100.0, 1000.0, 10_000.0], Some(0.95)),
        (Corner::QToP, vec![0.9, 0.99, 0.999, 0.9999], Some(20.0)),
        (Corner::PGamma, vec![10.0, 100.0, 1000.0, 10_000.0, 100_000.0], None),
        (Corner::QGamma, vec![0.9, 0.99, 0.999, 0.9999, 0.99999], None),
    ];
    for (corner, ladder, fixed) in edges {
        let t = limit_table(corner, x, &ladder, fixed)?;
        println!("{} at x = {x} (fixed {:?}), monotone: {}", corner.name(), fixed, t.monotone);
        for row in &t.rows {
            println!(
                "  {:>10}  approx {:.15}  target {:.15}  gap {:.3e}",
                row.parameter, row.approximant, row.target, row.gap
            );
        }
    }
    println!("sqrt(pi) = {:.15}", std::f64::consts::PI.sqrt());
    Ok(())
}
