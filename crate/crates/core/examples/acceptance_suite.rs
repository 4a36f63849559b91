//! Runs the acceptance checks one by one and prints a line per check.
//!
//! ```text
//! cargo run --release --example acceptance_suite
//! ```

use radial_dichotomy::acceptance;

fn main() {
    let mut failed = 0;
    for (id, _) in acceptance::CRITERIA {
        if let Some(outcome) = acceptance::run(id) {
            failed += usize::from(!outcome.passed);
            println!("{outcome}");
        }
    }
    std::process::exit(if failed == 0 { 0 } else { 3 });
}
