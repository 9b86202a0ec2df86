//! Log-convexity of Gamma_{p,q} and the bracket inequality behind it.

use pqgamma::campaigns::{logconvex_gamma, young_bracket};
use pqgamma::monocheck::GridSpec;
use pqgamma::qcore::PQParams;

fn main() -> pqgamma::error::Result<()> {
    let grid = GridSpec::new(0.5, 8.0)?.with_seed(42);
    for (p, q) in [(1, 0.2), (4, 0.6), (25, 0.9)] {
        let r = logconvex_gamma(PQParams::new(p, q)?, &grid)?;
        println!(
            "Gamma_{{{p},{q}}} on [0.5, 8]: {:?}, min chord slack {:.3e} over {} triples",
            r.verdict,
            r.min_slack,
            grid.points * grid.points
        );
    }

    let r = young_bracket(4096, 10.0, 42, 1e-14);
    println!(
        "\n[1+x]^a [1+y]^(1-a) <= [1+ax+(1-a)y] on {} samples: {:?}, min slack {:.3e}",
        r.samples, r.verdict, r.min_slack
    );
    println!("tightest sample (x, y, a, q) = {:?}", r.witness);
    Ok(())
}
