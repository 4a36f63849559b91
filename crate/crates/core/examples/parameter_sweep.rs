//! The `sweep` driver used from code: a (N, α) grid written as CSV.
//!
//! ```text
//! cargo run --release --example parameter_sweep > sweep.csv
//! ```

use radial_dichotomy::cli::{execute, Command, OutputFormat, RunConfig};

fn main() {
    let mut cfg = RunConfig::new(Command::Sweep);
    cfg.dimension_range = Some((2, 12));
    cfg.alpha_range = Some((-8.0, 4.0));
    cfg.steps = 25;
    cfg.eigen_dofs = 200;
    match execute(&cfg) {
        Ok(table) => print!("{}", table.render(OutputFormat::Csv)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
