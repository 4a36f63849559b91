//! Critical exponents λ± for a range of dimensions, with the Hardy
//! constant and, from N = 11 on, the critical power p_c.
//!
//! ```text
//! cargo run --example exponents_table
//! ```

use radial_dichotomy::family::p_critical;
use radial_dichotomy::{exponents, Dimension};

fn main() -> radial_dichotomy::Result<()> {
    println!(
        "{:>3} {:>12} {:>12} {:>10} {:>12}",
        "N", "lambda_+", "lambda_-", "hardy", "p_c"
    );
    for n in 2..=16 {
        let dim = Dimension::new(n)?;
        let e = exponents(dim);
        let pc = p_critical(dim)
            .map(|p| format!("{p:.6}"))
            .unwrap_or_else(|_| "-".into());
        println!(
            "{n:>3} {:>12.8} {:>12.8} {:>10.4} {pc:>12}",
            e.lambda_plus,
            e.lambda_minus,
            dim.hardy_constant()
        );
    }
    // λ+ changes sign between N = 10 and N = 11
    Ok(())
}
