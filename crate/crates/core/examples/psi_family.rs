//! The psi family: values, derivatives and the psi diagram at x = 1.

use pqgamma::campaigns::{limit_table, Corner};
use pqgamma::psifam::{psi_classical, psi_p, psi_pq, psi_pq_deriv, psi_q, psi_q_deriv};
use pqgamma::qcore::{PQParams, SeriesControl};

fn main() -> pqgamma::error::Result<()> {
    let params = PQParams::new(4, 0.6)?;
    let ctl = SeriesControl::default();
    println!("   x     psi_pq       psi'_pq      psi''_pq     psi'''_pq");
    for x in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        print!("{x:>5} {:>12.8}", psi_pq(x, params)?);
        for n in 1..=3 {
            print!(" {:>12.8}", psi_pq_deriv(x, params, n, ctl)?);
        }
        println!();
    }

    println!("\nboth q branches of psi_q and its first derivative at x = 1.5");
    for q in [0.3, 0.8, 1.25, 3.0] {
        println!("  q = {q:<5} psi_q = {:>12.9}  psi_q' = {:>12.9}", psi_q(1.5, q, ctl)?, psi_q_deriv(1.5, q, 1, ctl)?);
    }

    println!("\npsi_p(1) and psi(1) = -Euler gamma");
    for p in [10u64, 1000, 100_000] {
        println!("  p = {p:<7} {:.12}", psi_p(1.0, p)?);
    }
    println!("  limit     {:.12}", psi_classical(1.0)?);

    for corner in Corner::PSI {
        let (ladder, fixed) = if corner.ladder_in_p() {
            (vec![10.0, 100.0, 1000.0], (corner == Corner::PsiPToQ).then_some(0.8))
        } else {
            (vec![0.9, 0.99, 0.999], (corner == Corner::PsiQToP).then_some(10.0))
        };
        let t = limit_table(corner, 1.0, &ladder, fixed)?;
        let gaps: Vec<String> = t.rows.iter().map(|r| format!("{:.2e}", r.gap)).collect();
        println!("{:<11} gaps {}", corner.name(), gaps.join(" "));
    }
    Ok(())
}
