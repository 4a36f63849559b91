use thiserror::Error;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must satisfy N >= {min}, got {got}")]
    Dimension { got: u32, min: u32 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid profile: {0}")]
    Profile(String),

    #[error("invalid argument `{name}`: {reason}")]
    Argument { name: &'static str, reason: String },

    #[error("window [{r1}, {r2}] is not contained in the profile domain [{lo}, {hi}]")]
    OutsideDomain { r1: f64, r2: f64, lo: f64, hi: f64 },

    #[error("solution blew up (|u| > {guard:e}) at r = {radius}")]
    BlowUp { radius: f64, guard: f64 },

    #[error("step budget of {max_steps} exhausted at r = {radius}")]
    StepBudget { radius: f64, max_steps: usize },

    #[error("u_r vanishes identically on [{r1}, {r2}]: the reduced form is zero")]
    ZeroForm { r1: f64, r2: f64 },

    #[error("weighted mass matrix is singular on [{r1}, {r2}] (u_r vanishes on a subinterval)")]
    SingularMass { r1: f64, r2: f64 },

    #[error("u_r vanishes inside the window at r = {radius}")]
    VanishingDerivative { radius: f64 },

    #[error("tail of the profile is not monotone beyond r = {radius}")]
    NonMonotoneTail { radius: f64 },

    #[error("fit window yields {usable} dyadic levels, {required} required")]
    FitWindow { usable: usize, required: usize },
}

impl Error {
    /// Failures of a numerical pipeline, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BlowUp { .. }
                | Error::StepBudget { .. }
                | Error::ZeroForm { .. }
                | Error::SingularMass { .. }
                | Error::VanishingDerivative { .. }
                | Error::NonMonotoneTail { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
