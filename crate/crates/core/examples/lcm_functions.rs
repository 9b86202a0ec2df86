//! Logarithmic complete monotonicity of the root function (both readings)
//! and of the two-point function h_beta.

use pqgamma::campaigns::{lcm_h, lcm_root};
use pqgamma::monocheck::{GridSpec, DEFAULT_TOL_SCALE};
use pqgamma::paperfuncs::{h_beta, phi, RootVariant, TwoPointSpec};
use pqgamma::qcore::PQParams;

fn main() -> pqgamma::error::Result<()> {
    let grid = GridSpec::new(0.5, 6.0)?;
    println!("root function");
    for (p, q) in [(1, 0.3), (3, 0.5), (10, 0.8)] {
        for v in RootVariant::ALL {
            let r = lcm_root(PQParams::new(p, q)?, v, &grid, DEFAULT_TOL_SCALE)?;
            println!("  p={p:<2} q={q} {:<10} {:?}  witness {:?}", v.name(), r.verdict, r.witness);
        }
    }

    let params = PQParams::new(3, 0.5)?;
    let spec = TwoPointSpec::new(2.0, 1.0, 0.5)?;
    println!("\nh_beta with s = 2, t = 1, beta = 0.5");
    for x in [0.5 - 1e-3, 0.5 - 1e-7, 0.5, 0.5 + 1e-7, 0.5 + 1e-3] {
        println!("  h({x:.7}) = {:.15}", h_beta(x, &spec, params)?);
    }
    println!("  exp(phi(beta)) = {:.15}", phi(0.5, &spec, params)?.exp());
    println!("  swapped s, t at x = 2: h * h' = {}", h_beta(2.0, &spec, params)? * h_beta(2.0, &spec.swapped(), params)?);
    let r = lcm_h(&spec, params, &GridSpec::new(0.6, 5.0)?, DEFAULT_TOL_SCALE)?;
    println!("  lcm on [0.6, 5]: {:?}, min slack {:+.2e}", r.verdict, r.min_slack);
    Ok(())
}
