//! Space dimension and the pair of critical growth exponents
//! `λ± = −N/2 ± √(N−1) + 2` that separate large from small solutions.

use crate::error::{Error, Result};

/// Tolerance (in exponent units) used when checking a fitted exponent
/// against the open gap `(λ−, λ+)`.
pub const GAP_TOLERANCE: f64 = 0.05;

/// Space dimension `N ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { got: n, min: 2 });
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Optimal constant `(N−2)²/4` of the exterior Hardy inequality.
    pub fn hardy_constant(self) -> f64 {
        let m = self.as_f64() - 2.0;
        m * m / 4.0
    }

    pub fn exponents(self) -> CriticalExponents {
        exponents(self)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The critical exponents `λ+ > λ−` for a given dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalExponents {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl CriticalExponents {
    /// Width `2√(N−1)` of the forbidden gap.
    pub fn gap(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }

    /// True when `exponent` lies strictly inside the gap, by more than `tol`
    /// on both sides.
    pub fn inside_gap(&self, exponent: f64, tol: f64) -> bool {
        exponent > self.lambda_minus + tol && exponent < self.lambda_plus - tol
    }
}

pub fn exponents(n: Dimension) -> CriticalExponents {
    let n = n.as_f64();
    let root = (n - 1.0).sqrt();
    let centre = 2.0 - n / 2.0;
    CriticalExponents {
        lambda_plus: centre + root,
        lambda_minus: centre - root,
    }
}
