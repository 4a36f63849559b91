//! The reduced quadratic form on η·u_r perturbations: minimisers on
//! single windows and the side decision over a dyadic schedule.
//!
//! ```text
//! cargo run --release --example reduced_form
//! ```

use radial_dichotomy::family::{power_solution, FamilyParameter};
use radial_dichotomy::stability::{
    decide_side, minimize_reduced_form, reduced_form, AnnulusWindow, SideSchedule,
};
use radial_dichotomy::{exponents, Dimension, RadialGrid};

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(3)?;
    let e = exponents(n);
    let grid = RadialGrid::log_uniform(1.0, 1e4, 4001)?;
    for alpha in [
        e.lambda_minus - 0.5,
        e.lambda_minus,
        1.0,
        e.lambda_plus,
        3.0,
    ] {
        let profile = power_solution(FamilyParameter::new(alpha)?, n, grid.clone())?;
        let window = AnnulusWindow::new(1.0, 100.0)?;
        let (lambda, eta) = minimize_reduced_form(&profile, n, window, 400)?;
        let j = reduced_form(&profile, n, &eta)?;
        let side = decide_side(&profile, n, &SideSchedule::default(), 400);
        println!(
            "alpha = {alpha:+.4}: lambda_min on [1, 100] = {lambda:+.3e}, J(eta*) = {j:+.3e}, side {:?} after {} windows",
            side.side,
            side.trace.len()
        );
    }
    Ok(())
}
