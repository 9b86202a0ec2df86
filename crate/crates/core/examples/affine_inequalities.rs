//! The ratio f1(x) = Gamma(a+bx)^c / Gamma(d+ex)^f on [0, 1]: sign lemmas,
//! decrease, and the endpoint bounds.

use pqgamma::campaigns::{affine_campaign, random_affine_sample, AffineSample};
use pqgamma::paperfuncs::{f1, lemma_sign_check, AffineInequalitySpec, SignLemma};
use pqgamma::qcore::PQParams;
use rand::SeedableRng;

fn main() -> pqgamma::error::Result<()> {
    let spec = AffineInequalitySpec::new(1.0, 1.0, 1.0, 1.5, 2.0, 1.0);
    let params = PQParams::new(3, 0.5)?;
    for x in [0.0, 0.5, 1.0] {
        let checks: Vec<String> = [SignLemma::L41, SignLemma::L42, SignLemma::L43]
            .iter()
            .map(|&l| {
                let c = lemma_sign_check(&spec, params, x, l).unwrap();
                format!("{l:?} hyp={} concl={}", c.hypotheses_hold, c.conclusion_holds)
            })
            .collect();
        println!("x = {x}: f1 = {:.12}  {}", f1(x, &spec, params)?, checks.join("  "));
    }

    let mut rng = rand_pcg::Pcg64::seed_from_u64(42);
    let samples: Vec<AffineSample> = (0..1000).map(|_| random_affine_sample(&mut rng)).collect();
    println!();
    for lemma in [SignLemma::L42, SignLemma::L43] {
        let r = affine_campaign(&samples, lemma, 33, 1e-10, 42)?;
        println!(
            "{lemma:?}: {} of {} samples qualify ({} skipped), {} fail, min slack {:.3e}",
            r.qualified, r.samples, r.skipped, r.failed, r.min_slack
        );
    }
    Ok(())
}
