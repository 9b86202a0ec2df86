//! The difference engine on textbook functions, including ones it must reject.

use pqgamma::error::Result;
use pqgamma::monocheck::{
    check_cm, check_lcm, check_log_convex, forward_difference, GridSpec, MonotonicityReport,
    DEFAULT_TOL_SCALE,
};

fn show(name: &str, r: &MonotonicityReport) {
    println!(
        "{name:<26} {:?}  min slack {:+.3e}  tol {:.1e}  witness {:?}",
        r.verdict, r.min_slack, r.tolerance_used, r.witness
    );
}

fn main() -> Result<()> {
    let grid = GridSpec::new(0.5, 6.0)?;
    println!("grid {:?}\n", grid);

    let d3 = forward_difference(|x: f64| Ok((-x).exp()), 0.0, 0.1, 3)?;
    println!("third difference of e^-x at 0 with h = 0.1: {d3:.6e}\n");

    show("cm  e^-x", &check_cm(|x: f64| Ok((-x).exp()), &grid, DEFAULT_TOL_SCALE)?);
    show("cm  1/x + 1/(x+1)", &check_cm(|x: f64| Ok(1.0 / x + 1.0 / (x + 1.0)), &grid, DEFAULT_TOL_SCALE)?);
    show("cm  e^-x / x", &check_cm(|x: f64| Ok((-x).exp() / x), &grid, DEFAULT_TOL_SCALE)?);
    show("lcm 1/x", &check_lcm(|x: f64| Ok(1.0 / x), &grid, DEFAULT_TOL_SCALE)?);
    show("log-convex e^(1/x)", &check_log_convex(|x: f64| Ok((1.0 / x).exp()), &grid)?);

    println!("\nnegative controls");
    show("cm  x", &check_cm(|x: f64| Ok(x), &grid, DEFAULT_TOL_SCALE)?);
    show("cm  sin(x) + 2", &check_cm(|x: f64| Ok(x.sin() + 2.0), &grid, DEFAULT_TOL_SCALE)?);
    show("lcm e^x", &check_lcm(|x: f64| Ok(x.exp()), &grid, DEFAULT_TOL_SCALE)?);
    show("log-convex x", &check_log_convex(|x: f64| Ok(x), &grid)?);
    Ok(())
}
