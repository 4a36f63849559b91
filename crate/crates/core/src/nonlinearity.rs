//! Nonlinearities `f ∈ C¹(ℝ)` together with their derivatives.

use crate::exponents::Dimension;

/// Evaluation interface for the right-hand side of `−Δu = f(u)`.
pub trait Nonlinearity: Send + Sync {
    fn value(&self, s: f64) -> f64;
    fn derivative(&self, s: f64) -> f64;
}

impl<T: Nonlinearity + ?Sized> Nonlinearity for &T {
    fn value(&self, s: f64) -> f64 {
        (**self).value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        (**self).derivative(s)
    }
}

impl<T: Nonlinearity + ?Sized> Nonlinearity for Box<T> {
    fn value(&self, s: f64) -> f64 {
        (**self).value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        (**self).derivative(s)
    }
}

/// `f ≡ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Zero;

impl Nonlinearity for Zero {
    fn value(&self, _: f64) -> f64 {
        0.0
    }
    fn derivative(&self, _: f64) -> f64 {
        0.0
    }
}

/// `f(s) = offset + slope·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub offset: f64,
    pub slope: f64,
}

impl Nonlinearity for Affine {
    fn value(&self, s: f64) -> f64 {
        self.offset + self.slope * s
    }
    fn derivative(&self, _: f64) -> f64 {
        self.slope
    }
}

/// `f(s) = e^s`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Exponential;

impl Nonlinearity for Exponential {
    fn value(&self, s: f64) -> f64 {
        s.exp()
    }
    fn derivative(&self, s: f64) -> f64 {
        s.exp()
    }
}

/// Lane–Emden nonlinearity `f(s) = |s|^{p−1}·s`, `p ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneEmden {
    pub p: f64,
}

impl LaneEmden {
    /// Sobolev-critical exponent `(N+2)/(N−2)`; requires `N ≥ 3`.
    pub fn sobolev_critical(n: Dimension) -> Self {
        let n = n.as_f64();
        LaneEmden {
            p: (n + 2.0) / (n - 2.0),
        }
    }
}

impl Nonlinearity for LaneEmden {
    fn value(&self, s: f64) -> f64 {
        s.abs().powf(self.p - 1.0) * s
    }
    fn derivative(&self, s: f64) -> f64 {
        self.p * s.abs().powf(self.p - 1.0)
    }
}

/// `s ↦ factor·g(s)`; the nonlinearity solved by `w(x) = u(R0·x)` when
/// `factor = R0²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaled<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F> Rescaled<F> {
    pub fn for_radius(inner: F, r0: f64) -> Self {
        Rescaled {
            inner,
            factor: r0 * r0,
        }
    }
}

impl<F: Nonlinearity> Nonlinearity for Rescaled<F> {
    fn value(&self, s: f64) -> f64 {
        self.factor * self.inner.value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        self.factor * self.inner.derivative(s)
    }
}

/// Centered finite difference of `f` at `s` with step `h`.
pub fn central_difference(f: &dyn Nonlinearity, s: f64, h: f64) -> f64 {
    (f.value(s + h) - f.value(s - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivative(f: &dyn Nonlinearity, probes: &[f64]) {
        for &s in probes {
            let h = 1e-5 * s.abs().max(1.0);
            let fd = central_difference(f, s, h);
            let exact = f.derivative(s);
            let scale = exact.abs().max(1e-3);
            assert!(
                (fd - exact).abs() <= 1e-6 * scale,
                "s={s}: fd={fd} exact={exact}"
            );
        }
    }

    #[test]
    fn builtin_derivatives() {
        let probes = [-2.5, -0.7, 0.3, 1.1, 3.0];
        check_derivative(&Zero, &probes);
        check_derivative(
            &Affine {
                offset: 0.5,
                slope: -2.0,
            },
            &probes,
        );
        check_derivative(&Exponential, &probes);
        check_derivative(&LaneEmden { p: 5.0 }, &probes);
        check_derivative(&LaneEmden { p: 2.5 }, &probes);
        check_derivative(&Rescaled::for_radius(Exponential, 3.0), &probes);
    }

    #[test]
    fn sobolev_exponent() {
        let f = LaneEmden::sobolev_critical(Dimension::new(3).unwrap());
        assert_eq!(f.p, 5.0);
        assert_eq!(f.value(-2.0), -32.0);
    }
}
