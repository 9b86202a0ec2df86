//! Complete monotonicity of products of Gamma_{p,q} ratios with ordered,
//! dominated shift vectors.

use pqgamma::campaigns::{cm_ratio, random_ratio_spec};
use pqgamma::monocheck::{GridSpec, DEFAULT_TOL_SCALE};
use pqgamma::paperfuncs::{log_g_pq, validate_ratio_spec, RatioSpec};
use pqgamma::qcore::PQParams;
use rand::SeedableRng;

fn main() -> pqgamma::error::Result<()> {
    let params = PQParams::new(3, 0.5)?;
    let grid = GridSpec::new(0.5, 6.0)?;

    for (a, b) in [(vec![1.0, 2.0], vec![1.5, 2.5]), (vec![1.0, 2.0], vec![0.5, 5.0]), (vec![2.0, 1.0], vec![3.0, 4.0])] {
        match validate_ratio_spec(&a, &b)? {
            Ok(()) => println!("a = {a:?}, b = {b:?}: valid"),
            Err(v) => println!("a = {a:?}, b = {b:?}: rejected, {v}"),
        }
    }

    let spec = RatioSpec::new(vec![1.0, 2.0], vec![1.5, 2.5])?;
    println!();
    for x in [0.5, 1.0, 2.0, 4.0] {
        println!("G(x = {x}) = {:.12}", log_g_pq(x, &spec, params)?.exp());
    }

    let mut rng = rand_pcg::Pcg64::seed_from_u64(42);
    println!();
    for _ in 0..5 {
        let spec = random_ratio_spec(&mut rng, 4);
        let r = cm_ratio(&spec, params, &grid, DEFAULT_TOL_SCALE)?;
        println!("{:?} vs {:?}: {:?} (min slack {:+.2e})", short(spec.a()), short(spec.b()), r.verdict, r.min_slack);
    }
    Ok(())
}

fn short(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format!("{x:.3}")).collect()
}
