//! Principal Dirichlet eigenvalues of −Δ − c/r² on growing annuli [1, R]
//! for c on both sides of the Hardy constant.
//!
//! ```text
//! cargo run --release --example hardy_scan
//! ```

use radial_dichotomy::stability::{hardy_margin, stability_scan};
use radial_dichotomy::Dimension;

fn main() -> radial_dichotomy::Result<()> {
    let n = Dimension::new(6)?;
    for shift in [-0.5, -0.1, 0.1, 0.5] {
        let c = n.hardy_constant() + shift;
        let v = stability_scan(|r| c / (r * r), n, 1e4, 2000)?;
        println!(
            "N = {n}, c = {c:.2}, margin {:+.2}: {:?}",
            hardy_margin(c, n),
            v.status
        );
        for (r2, lambda) in &v.min_eigenvalue_trace {
            println!("    R = {r2:>9.1}  lambda_1 = {lambda:+.6e}");
        }
        if let Some(energy) = v.witness_energy {
            println!("    witness energy {energy:.3e}");
        }
    }
    Ok(())
}
