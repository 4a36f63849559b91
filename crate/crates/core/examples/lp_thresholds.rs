//! Integrability of |∇u|^p at infinity for the boundary members in
//! N = 11 against the exact thresholds N/(1 − α).
//!
//! ```text
//! cargo run --example lp_thresholds
//! ```

use radial_dichotomy::classify::lp_tail_test;
use radial_dichotomy::family::{
    lp_membership_exact, lp_threshold, power_solution, FamilyParameter,
};
use radial_dichotomy::{exponents, Dimension, RadialGrid};

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(11)?;
    let e = exponents(n);
    let grid = RadialGrid::log_uniform(1.0, 1e4, 4001)?;
    for alpha in [e.lambda_plus, e.lambda_minus] {
        let a = FamilyParameter::new(alpha)?;
        let profile = power_solution(a, n, grid.clone())?;
        println!(
            "alpha = {alpha:.6}, threshold p = {:.6}",
            lp_threshold(a, n).unwrap_or(f64::NAN)
        );
        for p in [1.0, 1.4, 1.5, 2.0, 8.0, 8.223, 10.0] {
            let t = lp_tail_test(&profile, n, p)?;
            println!(
                "    p = {p:>6}: {:<10} p*beta+N = {:+.4}, exact membership {}",
                t.verdict.to_string(),
                t.integrand_exponent,
                lp_membership_exact(a, n, p)?
            );
        }
    }
    Ok(())
}
