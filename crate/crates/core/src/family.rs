//! The explicit family `u_α(r) = r^α` (`u_0 = log r`) and its
//! nonlinearities `f_α`, together with the closed-form stability and
//! gradient-integrability answers used as oracles throughout the crate.

use crate::error::{Error, Result};
use crate::exponents::{exponents, Dimension};
use crate::nonlinearity::Nonlinearity;
use crate::profile::{RadialGrid, RadialProfile};

/// Power exponent of a family member; `0` encodes the logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FamilyParameter(f64);

impl FamilyParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Argument {
                name: "alpha",
                reason: format!("must be finite, got {alpha}"),
            });
        }
        Ok(FamilyParameter(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_log(self) -> bool {
        self.0 == 0.0
    }

    /// `(u_α(r), u_α'(r))`.
    pub fn eval(self, r: f64) -> (f64, f64) {
        let a = self.0;
        if a == 0.0 {
            (r.ln(), 1.0 / r)
        } else {
            let p = r.powf(a - 1.0);
            (p * r, a * p)
        }
    }
}

pub fn power_solution(
    alpha: FamilyParameter,
    _n: Dimension,
    grid: RadialGrid,
) -> Result<RadialProfile> {
    RadialProfile::from_fn(grid, |r| alpha.eval(r))
}

/// The nonlinearity `f_α` for which `u_α` solves `−Δu = f(u)` on `r ≥ 1`.
///
/// Piecewise definition:
/// * `α < 0`: `−α(α+N−2)s^{1−2/α}` for `s > 0`, zero for `s ≤ 0`;
/// * `α > 0`: `−α(α+N−2)s^{1−2/α}` for `s ≥ 1`, `(α+N−2)((2−α)s−2)` for `s < 1`;
/// * `α = 0`: `−(N−2)e^{−2s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFamily {
    alpha: f64,
    n: f64,
}

impl PowerFamily {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn coefficient(&self) -> f64 {
        -self.alpha * (self.alpha + self.n - 2.0)
    }

    fn power(&self) -> f64 {
        1.0 - 2.0 / self.alpha
    }

    /// One-sided derivatives at the gluing point (`s = 0` for `α < 0`,
    /// `s = 1` for `α > 0`); `None` for the logarithmic member.
    pub fn joint_derivatives(&self) -> Option<(f64, f64)> {
        let a = self.alpha;
        if a < 0.0 {
            // Right limit of c·(1−2/α)·s^{−2/α} as s → 0+ with −2/α > 0.
            Some((0.0, self.coefficient() * self.power() * 0f64.powf(-2.0 / a)))
        } else if a > 0.0 {
            let left = (a + self.n - 2.0) * (2.0 - a);
            let right = self.coefficient() * self.power();
            Some((left, right))
        } else {
            None
        }
    }
}

impl Nonlinearity for PowerFamily {
    fn value(&self, s: f64) -> f64 {
        let a = self.alpha;
        if a == 0.0 {
            -(self.n - 2.0) * (-2.0 * s).exp()
        } else if a < 0.0 {
            if s > 0.0 {
                self.coefficient() * s.powf(self.power())
            } else {
                0.0
            }
        } else if s >= 1.0 {
            self.coefficient() * s.powf(self.power())
        } else {
            (a + self.n - 2.0) * ((2.0 - a) * s - 2.0)
        }
    }

    fn derivative(&self, s: f64) -> f64 {
        let a = self.alpha;
        if a == 0.0 {
            2.0 * (self.n - 2.0) * (-2.0 * s).exp()
        } else if a < 0.0 {
            if s > 0.0 {
                self.coefficient() * self.power() * s.powf(-2.0 / a)
            } else {
                0.0
            }
        } else if s >= 1.0 {
            self.coefficient() * self.power() * s.powf(-2.0 / a)
        } else {
            (a + self.n - 2.0) * (2.0 - a)
        }
    }
}

pub fn f_alpha(alpha: FamilyParameter, n: Dimension) -> PowerFamily {
    PowerFamily {
        alpha: alpha.get(),
        n: n.as_f64(),
    }
}

/// `f_α'(u_α(r)) = −(α−2)(α+N−2)/r²`.
pub fn linearized_potential(alpha: FamilyParameter, n: Dimension, r: f64) -> f64 {
    potential_coefficient(alpha, n) / (r * r)
}

/// The coefficient `c = −(α−2)(α+N−2)` of the inverse-square potential.
pub fn potential_coefficient(alpha: FamilyParameter, n: Dimension) -> f64 {
    let a = alpha.get();
    -(a - 2.0) * (a + n.as_f64() - 2.0)
}

/// `u_α` is stable iff `α ≥ λ+(N)` or `α ≤ λ−(N)`.
pub fn exact_stability(alpha: FamilyParameter, n: Dimension) -> bool {
    let e = exponents(n);
    let a = alpha.get();
    a >= e.lambda_plus || a <= e.lambda_minus
}

/// Critical exponent `p_c = ((N−2)²−4N+8√(N−1)) / ((N−2)(N−10))`, `N ≥ 11`.
pub fn p_critical(n: Dimension) -> Result<f64> {
    if n.get() <= 10 {
        return Err(Error::Dimension {
            got: n.get(),
            min: 11,
        });
    }
    let nf = n.as_f64();
    let m = nf - 2.0;
    Ok((m * m - 4.0 * nf + 8.0 * (nf - 1.0).sqrt()) / (m * (nf - 10.0)))
}

/// Positive bubble `u(r) = (λ√(N(N−2))/(λ²+r²))^{(N−2)/2}` solving
/// `−Δu = u^{(N+2)/(N−2)}`, sampled on `grid`.
pub fn aubin_talenti(lambda_scale: f64, n: Dimension, grid: RadialGrid) -> Result<RadialProfile> {
    if n.get() < 3 {
        return Err(Error::Dimension {
            got: n.get(),
            min: 3,
        });
    }
    if !(lambda_scale.is_finite() && lambda_scale > 0.0) {
        return Err(Error::Argument {
            name: "lambda",
            reason: format!("must be positive, got {lambda_scale}"),
        });
    }
    let nf = n.as_f64();
    let numer = lambda_scale * (nf * (nf - 2.0)).sqrt();
    let l2 = lambda_scale * lambda_scale;
    RadialProfile::from_fn(grid, |r| {
        let q = l2 + r * r;
        let u = (numer / q).powf((nf - 2.0) / 2.0);
        (u, -(nf - 2.0) * r * u / q)
    })
}

/// Whether `∫₁^∞ r^{N−1}|u_α'|^p dr < ∞`; the threshold case (logarithmic
/// divergence) is not a member.
pub fn lp_membership_exact(alpha: FamilyParameter, n: Dimension, p: f64) -> Result<bool> {
    if !(p >= 1.0) {
        return Err(Error::Argument {
            name: "p",
            reason: format!("must be >= 1, got {p}"),
        });
    }
    let nf = n.as_f64();
    if alpha.is_log() {
        return Ok(p > nf);
    }
    let exponent = p * (alpha.get() - 1.0) + nf;
    Ok(exponent < -1e-12 * nf)
}

/// The threshold `p` at which `r^{N−1}|u_α'|^p` becomes `r^{−1}`.
pub fn lp_threshold(alpha: FamilyParameter, n: Dimension) -> Option<f64> {
    let a = alpha.get();
    (a < 1.0).then(|| n.as_f64() / (1.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::central_difference;
    use crate::stability::hardy_margin;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn alpha(a: f64) -> FamilyParameter {
        FamilyParameter::new(a).unwrap()
    }

    #[test]
    fn power_solution_values() {
        let g = RadialGrid::new(vec![1.0, 2.0, 3.0]).unwrap();
        let log = power_solution(alpha(0.0), dim(3), g.clone()).unwrap();
        assert_eq!((log.u()[0], log.u_r()[0]), (0.0, 1.0));
        let sq = power_solution(alpha(2.0), dim(3), g.clone()).unwrap();
        assert!((sq.u()[2] - 9.0).abs() < 1e-12 && (sq.u_r()[2] - 6.0).abs() < 1e-12);
        let lp = exponents(dim(3)).lambda_plus;
        let p = power_solution(alpha(lp), dim(3), g).unwrap();
        // 2^{1+√2}, 30-digit evaluation: 3.76908299227173171...
        assert!((p.u()[1] - 3.769_082_992_271_732).abs() < 1e-12);
    }

    #[test]
    fn f_alpha_examples() {
        let f0 = f_alpha(alpha(0.0), dim(4));
        assert_eq!(f0.value(0.0), -2.0);
        assert_eq!(f0.derivative(0.0), 4.0);
        let f2 = f_alpha(alpha(2.0), dim(5));
        for s in [1.0, 2.0, 17.5] {
            assert_eq!(f2.value(s), -10.0);
            assert_eq!(f2.derivative(s), 0.0);
        }
        let fm1 = f_alpha(alpha(-1.0), dim(3));
        assert_eq!(fm1.value(4.0), 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for &a in &[-3.0, -1.5, -0.4, 0.0, 0.7, 1.0, 2.0, 2.5, 4.0] {
            for &n in &[2, 3, 5, 11] {
                let f = f_alpha(alpha(a), dim(n));
                // probes away from the joints at s = 0 and s = 1
                for &s in &[-1.7_f64, -0.3, 0.35, 0.8, 1.4, 3.0, 9.0] {
                    if a < 0.0 && s < 0.0 {
                        continue;
                    }
                    let h = 1e-6 * s.abs().max(1.0);
                    let fd = central_difference(&f, s, h);
                    let ex = f.derivative(s);
                    assert!(
                        (fd - ex).abs() <= 1e-6 * ex.abs().max(1.0),
                        "a={a} n={n} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn gluing_is_c1() {
        for &a in &[0.1, 0.5, 1.0, 1.9, 2.0, 3.3, 4.0] {
            for &n in &[2, 3, 7, 12] {
                let f = f_alpha(alpha(a), dim(n));
                let below = f.value(1.0 - 1e-14);
                assert!((below - f.value(1.0)).abs() < 1e-12);
                let (l, r) = f.joint_derivatives().unwrap();
                assert!(
                    (l - r).abs() <= 1e-12 * l.abs().max(1.0),
                    "a={a} n={n}: {l} vs {r}"
                );
            }
        }
        for &a in &[-0.3, -1.0, -4.0] {
            let f = f_alpha(alpha(a), dim(4));
            assert_eq!(f.joint_derivatives(), Some((0.0, 0.0)));
            assert_eq!(f.value(0.0), 0.0);
            assert!(f.value(1e-12).abs() < 1e-9);
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(linearized_potential(alpha(2.0), dim(7), 5.0), 0.0);
        assert_eq!(linearized_potential(alpha(1.0), dim(3), 1.0), 2.0);
        for n in 2..=15 {
            let e = exponents(dim(n));
            for l in [e.lambda_plus, e.lambda_minus] {
                let v = linearized_potential(alpha(l), dim(n), 1.0);
                let h = dim(n).hardy_constant();
                assert!((v - h).abs() <= 1e-12 * h.max(1.0));
            }
        }
    }

    #[test]
    fn potential_matches_composed_derivative() {
        for &a in &[-6.0, -2.0, -0.5, 0.0, 0.3, 1.0, 2.0, 3.7] {
            for &n in &[2, 3, 5, 10, 11] {
                let f = f_alpha(alpha(a), dim(n));
                for k in 0..50 {
                    let r = 10f64.powf(2.0 * k as f64 / 49.0);
                    let (u, _) = alpha(a).eval(r);
                    let composed = f.derivative(u);
                    let closed = linearized_potential(alpha(a), dim(n), r);
                    let scale = closed.abs().max(1e-300);
                    assert!(
                        (composed - closed).abs() <= 1e-10 * scale
                            || (composed - closed).abs() < 1e-14,
                        "a={a} n={n} r={r}: {composed} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn stability_examples() {
        assert!(!exact_stability(alpha(1.0), dim(3)));
        assert!(exact_stability(alpha(-7.0), dim(10)));
        for n in 2..=20 {
            let e = exponents(dim(n));
            assert!(exact_stability(alpha(e.lambda_plus), dim(n)));
            assert!(exact_stability(alpha(e.lambda_minus), dim(n)));
        }
    }

    #[test]
    fn stability_agrees_with_hardy_margin() {
        for n in [2, 3, 4, 5, 9, 10, 11, 15, 30] {
            for k in 0..=400 {
                let a = -12.0 + 16.0 * k as f64 / 400.0;
                let c = potential_coefficient(alpha(a), dim(n));
                let margin = hardy_margin(c, dim(n));
                let scale = dim(n).hardy_constant() + c.abs() + 1.0;
                if margin.abs() > 1e-12 * scale {
                    assert_eq!(
                        exact_stability(alpha(a), dim(n)),
                        margin >= 0.0,
                        "a={a} n={n}"
                    );
                }
            }
            let e = exponents(dim(n));
            for l in [e.lambda_plus, e.lambda_minus] {
                let c = potential_coefficient(alpha(l), dim(n));
                let scale = dim(n).hardy_constant() + c.abs() + 1.0;
                assert!(hardy_margin(c, dim(n)).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn critical_p() {
        // 30-digit oracle values of the closed formula
        assert!((p_critical(dim(11)).unwrap() - 6.922_024_586_816_337).abs() < 1e-12);
        assert!((p_critical(dim(12)).unwrap() - 3.926_649_916_142_16).abs() < 1e-12);
        assert!(p_critical(dim(10)).is_err());
        for n in 11..60 {
            let nf = n as f64;
            assert!(p_critical(dim(n)).unwrap() > (nf + 2.0) / (nf - 2.0));
        }
    }

    #[test]
    fn aubin_talenti_values() {
        let g = RadialGrid::new(vec![1.0, 10.0, 1e4]).unwrap();
        let p = aubin_talenti(1.0, dim(3), g.clone()).unwrap();
        assert!((p.u()[0] - 0.930_604_859_102_099_6).abs() < 1e-14);
        // u·r → 3^{1/4}
        assert!((p.u()[2] * 1e4 - 1.316_074_012_952_492_5).abs() < 1e-7);
        let q = aubin_talenti(2.0, dim(4), g.clone()).unwrap();
        assert!((q.u()[0] - 1.131_370_849_898_476).abs() < 1e-14);
        assert!(aubin_talenti(1.0, dim(2), g).is_err());
    }

    #[test]
    fn aubin_talenti_derivative() {
        let g = RadialGrid::new(vec![1.5, 3.0, 8.0]).unwrap();
        let p = aubin_talenti(1.3, dim(5), g).unwrap();
        for (i, &r) in p.radii().iter().enumerate() {
            let h = 1e-6;
            let f = |r: f64| {
                let g = RadialGrid::new(vec![r, r + 1.0]).unwrap();
                aubin_talenti(1.3, dim(5), g).unwrap().u()[0]
            };
            let fd = (f(r + h) - f(r - h)) / (2.0 * h);
            assert!((fd - p.u_r()[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn lp_membership() {
        let e11 = exponents(dim(11));
        let p_thr = lp_threshold(alpha(e11.lambda_plus), dim(11)).unwrap();
        // 11/(11/2 − √10 − 1) = 8.22293212310752903...
        assert!((p_thr - 8.222_932_123_107_53).abs() < 1e-12);
        assert!(!lp_membership_exact(alpha(e11.lambda_plus), dim(11), p_thr).unwrap());
        assert!(lp_membership_exact(alpha(e11.lambda_plus), dim(11), 8.3).unwrap());
        let l3 = exponents(dim(3)).lambda_minus;
        assert!(lp_membership_exact(alpha(l3), dim(3), 2.0).unwrap());
        assert!(!lp_membership_exact(alpha(0.0), dim(2), 2.0).unwrap());
        assert!(lp_membership_exact(alpha(0.0), dim(2), 2.5).unwrap());
        assert!(lp_membership_exact(alpha(1.0), dim(3), 0.5).is_err());
    }
}
