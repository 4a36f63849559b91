//! Numerical lab for stable radial solutions of `−Δu = f(u)` outside the
//! unit ball in `ℝ^N`.
//!
//! Start with the examples:
//!
//! ```text
//! cargo run --example exponents_table
//! cargo run --example family_boundary -- 5
//! cargo run --example solve_lane_emden
//! cargo run --release --example hardy_scan
//! cargo run --release --example reduced_form
//! cargo run --example classify_profiles
//! cargo run --example rescale_outside_compact
//! cargo run --example lp_thresholds
//! cargo run --example dyadic_bounds
//! cargo run --release --example parameter_sweep
//! cargo run --release --example acceptance_suite
//! ```

pub mod acceptance;
pub mod classify;
pub mod cli;
pub mod error;
pub mod exponents;
pub mod family;
pub mod nonlinearity;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod stability;

pub use error::{Error, Result};
pub use exponents::{exponents, CriticalExponents, Dimension};
pub use profile::{RadialGrid, RadialProfile};
