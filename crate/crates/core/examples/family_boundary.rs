//! Stability of the power family u = r^α across α for one dimension:
//! the exact predicate against the Hardy margin of its linearised
//! potential c/r².
//!
//! ```text
//! cargo run --example family_boundary -- 5
//! ```

use radial_dichotomy::family::{exact_stability, potential_coefficient, FamilyParameter};
use radial_dichotomy::stability::hardy_margin;
use radial_dichotomy::{exponents, Dimension};

fn main() -> radial_dichotomy::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);
    let dim = Dimension::new(n)?;
    let e = exponents(dim);
    println!(
        "N = {n}: stable iff alpha <= {:.6} or alpha >= {:.6}",
        e.lambda_minus, e.lambda_plus
    );
    println!("{:>8} {:>10} {:>8}", "alpha", "margin", "stable");
    for k in 0..=24 {
        let alpha = -8.0 + 0.5 * k as f64;
        let a = FamilyParameter::new(alpha)?;
        let margin = hardy_margin(potential_coefficient(a, dim), dim);
        println!("{alpha:>8.2} {margin:>10.4} {:>8}", exact_stability(a, dim));
    }
    for l in [e.lambda_minus, e.lambda_plus] {
        let a = FamilyParameter::new(l)?;
        println!(
            "boundary alpha = {l:.6}: margin {:.1e}, stable {}",
            hardy_margin(potential_coefficient(a, dim), dim),
            exact_stability(a, dim)
        );
    }
    Ok(())
}
