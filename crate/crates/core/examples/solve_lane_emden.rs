//! Integrates the critical Lane-Emden equation from the Aubin-Talenti
//! data at r = 1 and compares with the closed form.
//!
//! ```text
//! cargo run --example solve_lane_emden
//! ```

use radial_dichotomy::family::aubin_talenti;
use radial_dichotomy::nonlinearity::LaneEmden;
use radial_dichotomy::ode::{critical_points, residual, solve_ivp, SolverSettings};
use radial_dichotomy::{Dimension, RadialGrid};

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(3)?;
    let f = LaneEmden::sobolev_critical(n);
    let settings = SolverSettings::default().with_horizon(1e3);
    let grid = RadialGrid::log_uniform(1.0, settings.r_max, settings.grid_points)?;
    let exact = aubin_talenti(1.0, n, grid)?;
    let numeric = solve_ivp(&f, n, exact.u()[0], exact.u_r()[0], &settings)?;

    let worst = numeric
        .u()
        .iter()
        .zip(exact.u())
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    println!(
        "p = {}, {} nodes on [1, {}]",
        f.p,
        numeric.radii().len(),
        settings.r_max
    );
    println!("max relative deviation from the closed form: {worst:.2e}");
    println!(
        "residual of the integrated profile: {:.2e}",
        residual(&numeric, &f, n)?
    );
    println!(
        "critical points beyond r = 1: {}",
        critical_points(&numeric).all().len()
    );
    for r in [1.0, 10.0, 100.0, 1000.0] {
        println!(
            "r = {r:>6}: u = {:.10e}, r*u = {:.8}",
            numeric.value(r),
            r * numeric.value(r)
        );
    }
    Ok(())
}
