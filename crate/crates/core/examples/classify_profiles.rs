//! Large/small classification of family members and of the
//! Aubin-Talenti bubble, with the dyadic growth constants.
//!
//! ```text
//! cargo run --example classify_profiles
//! ```

use radial_dichotomy::classify::{classify, FitWindow};
use radial_dichotomy::family::{aubin_talenti, power_solution, FamilyParameter};
use radial_dichotomy::{exponents, Dimension, RadialGrid, RadialProfile};

fn report(label: &str, profile: &RadialProfile, n: Dimension) -> radial_dichotomy::Result<()> {
    let r = classify(profile, n, &FitWindow::tail(profile, 10)?);
    println!(
        "{label:<28} {:<12} exponent {:>9.5}  u_inf {:<10} M {:<10.4e} r0 {:?}{}",
        r.verdict.to_string(),
        r.fitted_exponent.unwrap_or(f64::NAN),
        r.u_infinity
            .map(|v| v.finite().map_or(v.to_string(), |x| format!("{x:.3e}")))
            .unwrap_or_default(),
        r.m_fit.unwrap_or(f64::NAN),
        r.r0_fit,
        if r.vacuous_bound {
            " (vacuous bound)"
        } else {
            ""
        },
    );
    Ok(())
}

fn main() -> radial_dichotomy::Result<()> {
    let grid = RadialGrid::log_uniform(1.0, 1e4, 4001)?;
    for n in [2, 3, 10, 11] {
        let dim = Dimension::new(n)?;
        let e = exponents(dim);
        for alpha in [
            e.lambda_minus - 0.25,
            e.lambda_minus,
            e.lambda_plus,
            e.lambda_plus + 1.0,
        ] {
            let p = power_solution(FamilyParameter::new(alpha)?, dim, grid.clone())?;
            report(&format!("N={n:<2} alpha={alpha:+.4}"), &p, dim)?;
        }
    }
    let dim = Dimension::new(3)?;
    report("Aubin-Talenti N=3", &aubin_talenti(1.0, dim, grid)?, dim)?;
    Ok(())
}
