//! Dyadic integrals of u_r^{∓2} against their critical powers of r.
//!
//! ```text
//! cargo run --example dyadic_bounds
//! ```

use radial_dichotomy::classify::{dyadic_bound_check, BoundSide, FitWindow};
use radial_dichotomy::family::{power_solution, FamilyParameter};
use radial_dichotomy::{exponents, Dimension, RadialGrid};

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(5)?;
    let e = exponents(n);
    let grid = RadialGrid::log_uniform(1.0, 1e4, 4001)?;
    let cases = [
        (e.lambda_plus, BoundSide::L),
        (e.lambda_plus + 1.0, BoundSide::L),
        (e.lambda_minus, BoundSide::S),
        (e.lambda_minus - 1.0, BoundSide::S),
        (0.5, BoundSide::L),
    ];
    for (alpha, side) in cases {
        let p = power_solution(FamilyParameter::new(alpha)?, n, grid.clone())?;
        let rep = dyadic_bound_check(&p, n, side, &FitWindow::tail(&p, 10)?)?;
        println!(
            "alpha = {alpha:+.3} side {side:?} (kappa {:+.4}): holds {}, trend {:+.4}, spread {:.2e}, worst {:.4e}",
            side.exponent(n),
            rep.holds,
            rep.trend,
            rep.spread(),
            rep.worst_ratio
        );
    }
    Ok(())
}
