//! A solution stable only outside B_{R0} is moved to the exterior of the
//! unit ball by w(r) = u(R0·r); growth exponents are unchanged.
//!
//! ```text
//! cargo run --example rescale_outside_compact
//! ```

use radial_dichotomy::classify::{classify, FitWindow};
use radial_dichotomy::family::{f_alpha, power_solution, FamilyParameter};
use radial_dichotomy::nonlinearity::Rescaled;
use radial_dichotomy::ode::residual;
use radial_dichotomy::profile::rescale;
use radial_dichotomy::{exponents, Dimension, RadialGrid};

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(4)?;
    let alpha = FamilyParameter::new(exponents(n).lambda_plus + 0.3)?;
    let u = power_solution(alpha, n, RadialGrid::log_uniform(1.0, 1e5, 8001)?)?;
    for r0 in [1.0, 4.0, 32.0] {
        let w = rescale(&u, r0)?;
        // w solves −Δw = R0² f(w)
        let g = Rescaled::for_radius(f_alpha(alpha, n), r0);
        let report = classify(&w, n, &FitWindow::tail(&w, 10)?);
        println!(
            "R0 = {r0:>4}: horizon {:>8.1}, w(1) = {:.6}, residual {:.1e}, {} with exponent {:.6}",
            w.horizon(),
            w.u()[0],
            residual(&w, &g, n)?,
            report.verdict,
            report.fitted_exponent.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
