//! Large/small classification of sampled radial profiles.
//!
//! Growth is measured through dyadic increments `d(r) = |u(2r) − u(r)|`,
//! which avoids subtracting an extrapolated limit. Exponents are fitted by
//! least squares of `log d` against `log r` over a window of doublings and
//! compared with the critical pair `λ±`.

use crate::error::{Error, Result};
use crate::exponents::{exponents, Dimension, GAP_TOLERANCE};
use crate::profile::RadialProfile;
use crate::quadrature;

/// Exponent slack for recognising logarithmic growth.
pub const SLOPE_TOL: f64 = 0.05;
/// Width of the undecided band around the `L^p` threshold `p·β + N = 0`.
pub const BORDERLINE_TOL: f64 = 0.1;
/// Profiles with total variation below this are constant.
pub const CONSTANT_TOL: f64 = 1e-12;
/// Trailing dyadic increments inspected by [`estimate_limit`].
pub const LIMIT_LEVELS: usize = 4;
/// Increment ratios above this are treated as non-decaying.
pub const LIMIT_RATIO_MAX: f64 = 0.999;

/// `lim u(r)` as `r → ∞`, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitValue {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl LimitValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            LimitValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        !matches!(self, LimitValue::Finite(_))
    }
}

impl std::fmt::Display for LimitValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitValue::Finite(v) => write!(f, "{v}"),
            LimitValue::PlusInfinity => write!(f, "+inf"),
            LimitValue::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// Range of dyadic samples `r_lo·2^k` with `2·r_k ≤ r_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub r_lo: f64,
    pub r_hi: f64,
    pub dyadic_levels: usize,
}

impl FitWindow {
    pub fn new(r_lo: f64, r_hi: f64, dyadic_levels: usize) -> Result<Self> {
        if !(r_lo >= 1.0 && r_hi > r_lo && r_hi.is_finite()) {
            return Err(Error::Argument {
                name: "fit window",
                reason: format!("need 1 <= r_lo < r_hi, got [{r_lo}, {r_hi}]"),
            });
        }
        if dyadic_levels < 3 {
            return Err(Error::Argument {
                name: "dyadic_levels",
                reason: format!("must be >= 3, got {dyadic_levels}"),
            });
        }
        Ok(FitWindow {
            r_lo,
            r_hi,
            dyadic_levels,
        })
    }

    /// The last `levels` doublings below the profile horizon.
    pub fn tail(profile: &RadialProfile, levels: usize) -> Result<Self> {
        let r_hi = profile.horizon();
        let r_lo = (r_hi / 2f64.powi(levels as i32)).max(profile.inner_radius());
        FitWindow::new(r_lo, r_hi, levels)
    }

    pub fn samples(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = self.r_lo;
        while 2.0 * r <= self.r_hi * (1.0 + 1e-12) {
            out.push(r);
            r *= 2.0;
        }
        out
    }

    fn check(&self, profile: &RadialProfile) -> Result<Vec<f64>> {
        if !profile.contains(self.r_lo) || !profile.contains(self.r_hi) {
            return Err(Error::OutsideDomain {
                r1: self.r_lo,
                r2: self.r_hi,
                lo: profile.inner_radius(),
                hi: profile.horizon(),
            });
        }
        let samples = self.samples();
        if samples.len() < self.dyadic_levels {
            return Err(Error::FitWindow {
                usable: samples.len(),
                required: self.dyadic_levels,
            });
        }
        Ok(samples)
    }
}

/// Extrapolates `lim u` from the trailing dyadic increments of the profile.
pub fn estimate_limit(profile: &RadialProfile) -> Result<LimitValue> {
    let last_u = *profile.u().last().expect("profiles are non-empty");
    if profile.total_variation() < CONSTANT_TOL {
        return Ok(LimitValue::Finite(last_u));
    }
    let mut radii = Vec::new();
    let mut r = profile.inner_radius();
    while r <= profile.horizon() * (1.0 + 1e-12) {
        radii.push(r);
        r *= 2.0;
    }
    if radii.len() < 3 {
        return Err(Error::FitWindow {
            usable: radii.len().saturating_sub(1),
            required: 2,
        });
    }
    let values: Vec<f64> = radii.iter().map(|&r| profile.value(r)).collect();
    let incr: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tail_start = incr.len().saturating_sub(LIMIT_LEVELS);
    let tail = &incr[tail_start..];

    let positive = tail.iter().any(|&d| d > 0.0);
    let negative = tail.iter().any(|&d| d < 0.0);
    if positive && negative {
        return Err(Error::NonMonotoneTail {
            radius: radii[tail_start],
        });
    }
    let u_end = *values.last().expect("non-empty");
    let d_last = *tail.last().expect("non-empty");
    if d_last == 0.0 {
        return Ok(LimitValue::Finite(u_end));
    }
    let ratios: Vec<f64> = tail.windows(2).map(|w| (w[1] / w[0]).abs()).collect();
    if ratios
        .iter()
        .all(|q| q.is_finite() && *q <= LIMIT_RATIO_MAX)
    {
        let q = *ratios.last().expect("at least one ratio");
        return Ok(LimitValue::Finite(u_end + d_last * q / (1.0 - q)));
    }
    Ok(if d_last > 0.0 {
        LimitValue::PlusInfinity
    } else {
        LimitValue::MinusInfinity
    })
}

/// Least-squares power law `d(r) ≈ M·r^β` on the dyadic increments.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub exponent: f64,
    /// Near-zero slope with an infinite limit: growth like `M·log r`.
    pub log_flag: bool,
    /// Lower-bound constant: `d(r) ≥ m_fit·r^β` for every sample `r ≥ r0_fit`.
    pub m_fit: f64,
    pub r0_fit: f64,
    /// `(r, d(r))` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
}

pub fn fit_growth_exponent(
    profile: &RadialProfile,
    u_inf: LimitValue,
    window: &FitWindow,
) -> Result<GrowthFit> {
    let radii = window.check(profile)?;
    let samples: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, (profile.value(2.0 * r) - profile.value(r)).abs()))
        .filter(|&(_, d)| d > 0.0 && d.is_finite())
        .collect();
    if samples.len() < window.dyadic_levels {
        return Err(Error::FitWindow {
            usable: samples.len(),
            required: window.dyadic_levels,
        });
    }
    let xs: Vec<f64> = samples.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, d)| d.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);

    let log_flag = slope.abs() <= SLOPE_TOL && u_inf.is_infinite();
    let beta = if log_flag { 0.0 } else { slope };
    let m_ls = intercept.exp();
    let scaled: Vec<f64> = samples.iter().map(|&(r, d)| d / r.powf(beta)).collect();
    let mut k0 = scaled.len() - 1;
    while k0 > 0 && scaled[k0 - 1] >= 0.5 * m_ls {
        k0 -= 1;
    }
    let m_fit = scaled[k0..].iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GrowthFit {
        exponent: slope,
        log_flag,
        m_fit,
        r0_fit: samples[k0].0,
        samples,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Large,
    Small,
    Constant,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Large => "Large",
            Verdict::Small => "Small",
            Verdict::Constant => "Constant",
            Verdict::Undetermined => "Undetermined",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub fitted_exponent: Option<f64>,
    pub u_infinity: Option<LimitValue>,
    pub m_fit: Option<f64>,
    pub r0_fit: Option<f64>,
    /// The increments match `M·log r` rather than a power.
    pub log_growth: bool,
    /// `N ≥ 11` with an infinite limit: the large-side bound is vacuous.
    pub vacuous_bound: bool,
    /// Logarithmic growth in a dimension other than 2 or 10.
    pub log_outside_critical: bool,
    pub diagnostic: Option<String>,
}

impl ClassificationReport {
    fn undetermined(diagnostic: String) -> Self {
        ClassificationReport {
            verdict: Verdict::Undetermined,
            fitted_exponent: None,
            u_infinity: None,
            m_fit: None,
            r0_fit: None,
            log_growth: false,
            vacuous_bound: false,
            log_outside_critical: false,
            diagnostic: Some(diagnostic),
        }
    }
}

pub fn classify(profile: &RadialProfile, n: Dimension, window: &FitWindow) -> ClassificationReport {
    if profile.total_variation() < CONSTANT_TOL {
        let mut report = ClassificationReport::undetermined(String::new());
        report.verdict = Verdict::Constant;
        report.u_infinity = Some(LimitValue::Finite(profile.u()[0]));
        report.diagnostic = None;
        return report;
    }
    let u_inf = match estimate_limit(profile) {
        Ok(v) => v,
        Err(e) => return ClassificationReport::undetermined(e.to_string()),
    };
    let fit = match fit_growth_exponent(profile, u_inf, window) {
        Ok(fit) => fit,
        Err(e) => {
            let mut r = ClassificationReport::undetermined(e.to_string());
            r.u_infinity = Some(u_inf);
            return r;
        }
    };

    let e = exponents(n);
    let dim = n.get();
    let slope = fit.exponent;
    let mut vacuous = false;
    let verdict = if fit.log_flag && dim == 10 {
        Verdict::Large
    } else if fit.log_flag && dim == 2 {
        Verdict::Small
    } else if dim >= 11 && u_inf.is_infinite() {
        vacuous = true;
        Verdict::Large
    } else if slope >= e.lambda_plus - GAP_TOLERANCE {
        Verdict::Large
    } else if slope <= e.lambda_minus + GAP_TOLERANCE {
        Verdict::Small
    } else {
        Verdict::Undetermined
    };

    let (m_fit, r0_fit) = match verdict {
        Verdict::Large | Verdict::Small => {
            let bound = if vacuous {
                None
            } else {
                theorem_constants(profile, n, verdict, u_inf, window)
            };
            let (m, r0) = bound.unwrap_or((fit.m_fit, fit.r0_fit));
            (Some(m), Some(r0))
        }
        _ => (None, None),
    };
    let diagnostic = (verdict == Verdict::Undetermined).then(|| {
        format!(
            "fitted exponent {slope:.4} lies inside the gap ({:.4}, {:.4})",
            e.lambda_minus, e.lambda_plus
        )
    });

    ClassificationReport {
        verdict,
        fitted_exponent: Some(slope),
        u_infinity: Some(u_inf),
        m_fit,
        r0_fit,
        log_growth: fit.log_flag,
        vacuous_bound: vacuous,
        log_outside_critical: fit.log_flag && dim != 2 && dim != 10,
        diagnostic,
    }
}

/// `(M, r0)` for the large/small bounds in their dimension-dependent form,
/// evaluated on the dyadic samples of the window and their doublings.
fn theorem_constants(
    profile: &RadialProfile,
    n: Dimension,
    verdict: Verdict,
    u_inf: LimitValue,
    window: &FitWindow,
) -> Option<(f64, f64)> {
    let e = exponents(n);
    let dim = n.get();
    let mut radii = window.samples();
    radii.push(2.0 * *radii.last()?);
    let deviation = |r: f64| -> Option<f64> {
        let u = profile.value(r);
        Some((u - u_inf.finite()?).abs())
    };
    match verdict {
        Verdict::Large => {
            let g: Vec<f64> = radii
                .iter()
                .map(|&r| match dim {
                    2..=9 => Some(profile.value(r).abs() / r.powf(e.lambda_plus)),
                    10 => (r > 1.0).then(|| profile.value(r).abs() / r.ln()),
                    _ => deviation(r).map(|d| d / r.powf(e.lambda_plus)),
                })
                .collect::<Option<_>>()?;
            let mut sorted = g.clone();
            sorted.sort_by(f64::total_cmp);
            let target = 0.5 * sorted[sorted.len() / 2];
            let mut k0 = g.len() - 1;
            while k0 > 0 && g[k0 - 1] >= target {
                k0 -= 1;
            }
            let m = g[k0..].iter().copied().fold(f64::INFINITY, f64::min);
            (m > 0.0).then_some((m, radii[k0]))
        }
        Verdict::Small => {
            if dim == 2 {
                let pts: Vec<f64> = radii.iter().copied().filter(|&r| r >= 2.0).collect();
                let m = pts
                    .iter()
                    .map(|&r| profile.value(r).abs() / r.ln())
                    .fold(0.0, f64::max);
                (m > 0.0).then(|| (m, pts.first().copied().unwrap_or(2.0)))
            } else {
                let g: Vec<f64> = radii
                    .iter()
                    .map(|&r| deviation(r).map(|d| d / r.powf(e.lambda_minus)))
                    .collect::<Option<_>>()?;
                let m = g.iter().copied().fold(0.0, f64::max);
                (m > 0.0).then_some((m, radii[0]))
            }
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    /// `∫_r^{2r} u_r^{−2} ≲ r^{N−2√(N−1)−1}`.
    L,
    /// `∫_r^{2r} u_r² ≲ r^{−N−2√(N−1)+3}`.
    S,
}

impl BoundSide {
    pub fn exponent(self, n: Dimension) -> f64 {
        let nf = n.as_f64();
        let root = (nf - 1.0).sqrt();
        match self {
            BoundSide::L => nf - 2.0 * root - 1.0,
            BoundSide::S => -nf - 2.0 * root + 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicBoundReport {
    /// Ratios stay finite and do not grow (trend ≤ `SLOPE_TOL`).
    pub holds: bool,
    /// `(r, I(r)·r^{−κ})` at every dyadic sample.
    pub ratios: Vec<(f64, f64)>,
    pub worst_ratio: f64,
    /// Log-log slope of the ratios in `r`.
    pub trend: f64,
}

impl DyadicBoundReport {
    /// `(max − min)/max` of the ratios.
    pub fn spread(&self) -> f64 {
        let max = self
            .ratios
            .iter()
            .map(|x| x.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let min = self
            .ratios
            .iter()
            .map(|x| x.1)
            .fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            0.0
        } else {
            (max - min) / max
        }
    }
}

/// Checks that the dyadic integrals of `u_r^{∓2}` stay below a constant
/// times the side's critical power of `r`.
pub fn dyadic_bound_check(
    profile: &RadialProfile,
    n: Dimension,
    side: BoundSide,
    window: &FitWindow,
) -> Result<DyadicBoundReport> {
    let radii = window.check(profile)?;
    let last = 2.0 * *radii.last().expect("checked non-empty");
    if side == BoundSide::L {
        for (&r, &d) in profile.radii().iter().zip(profile.u_r()) {
            if r >= radii[0] && r <= last && d == 0.0 {
                return Err(Error::VanishingDerivative { radius: r });
            }
        }
        let signs = profile
            .radii()
            .iter()
            .zip(profile.u_r())
            .filter(|(r, _)| **r >= radii[0] && **r <= last)
            .map(|(_, d)| d.signum());
        let mut prev: Option<f64> = None;
        for (s, r) in signs.zip(
            profile
                .radii()
                .iter()
                .filter(|r| **r >= radii[0] && **r <= last),
        ) {
            if prev.is_some_and(|p| p != s) {
                return Err(Error::VanishingDerivative { radius: *r });
            }
            prev = Some(s);
        }
    }
    let kappa = side.exponent(n);
    let breaks = profile.radii();
    let ratios: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let integral = quadrature::integrate(r, 2.0 * r, breaks, |s| {
                let d = profile.derivative(s);
                match side {
                    BoundSide::L => 1.0 / (d * d),
                    BoundSide::S => d * d,
                }
            });
            (r, integral * r.powf(-kappa))
        })
        .collect();
    let worst_ratio = ratios.iter().map(|x| x.1).fold(0.0, f64::max);
    let positive: Vec<(f64, f64)> = ratios.iter().copied().filter(|x| x.1 > 0.0).collect();
    let trend = if positive.len() >= 2 {
        let xs: Vec<f64> = positive.iter().map(|x| x.0.ln()).collect();
        let ys: Vec<f64> = positive.iter().map(|x| x.1.ln()).collect();
        least_squares(&xs, &ys).0
    } else {
        0.0
    };
    let holds = worst_ratio.is_finite() && trend <= SLOPE_TOL;
    Ok(DyadicBoundReport {
        holds,
        ratios,
        worst_ratio,
        trend,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpVerdict {
    Converged,
    Diverged,
    Borderline,
}

impl std::fmt::Display for LpVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LpVerdict::Converged => "Converged",
            LpVerdict::Diverged => "Diverged",
            LpVerdict::Borderline => "Borderline",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpTailReport {
    pub verdict: LpVerdict,
    /// Fitted `β` in `|u_r| ~ r^β` over the last decade.
    pub tail_exponent: f64,
    /// `p·β + N`; the tail integral behaves like `∫ r^{p·β+N−1} dr`.
    pub integrand_exponent: f64,
    /// `∫_1^H / ∫_1^{H/10}` of `r^{N−1}|u_r|^p`.
    pub partial_integral_growth: f64,
}

/// Tail test for `|∇u| ∈ L^p` outside the unit ball.
pub fn lp_tail_test(profile: &RadialProfile, n: Dimension, p: f64) -> Result<LpTailReport> {
    if !(p >= 1.0) {
        return Err(Error::Argument {
            name: "p",
            reason: format!("must be >= 1, got {p}"),
        });
    }
    let h = profile.horizon();
    let lo = (h / 10.0).max(profile.inner_radius());
    let mut pts: Vec<(f64, f64)> = profile
        .radii()
        .iter()
        .zip(profile.u_r())
        .filter(|(r, _)| **r >= lo)
        .map(|(r, d)| (*r, d.abs()))
        .collect();
    if pts.len() < 3 {
        pts = (0..21)
            .map(|k| {
                let r = lo * (h / lo).powf(k as f64 / 20.0);
                (r, profile.derivative(r).abs())
            })
            .collect();
    }
    let nf = n.as_f64();
    let nonzero: Vec<(f64, f64)> = pts.into_iter().filter(|x| x.1 > 0.0).collect();
    let beta = if nonzero.len() < 2 {
        f64::NEG_INFINITY
    } else {
        let xs: Vec<f64> = nonzero.iter().map(|x| x.0.ln()).collect();
        let ys: Vec<f64> = nonzero.iter().map(|x| x.1.ln()).collect();
        least_squares(&xs, &ys).0
    };
    let exponent = p * beta + nf;
    let verdict = if exponent < -BORDERLINE_TOL {
        LpVerdict::Converged
    } else if exponent > BORDERLINE_TOL {
        LpVerdict::Diverged
    } else {
        LpVerdict::Borderline
    };
    let pw = n.get() as i32 - 1;
    let breaks = profile.radii();
    let integrand = |r: f64| r.powi(pw) * profile.derivative(r).abs().powf(p);
    let start = profile.inner_radius();
    let near = quadrature::integrate(start, lo, breaks, integrand);
    let far = near + quadrature::integrate(lo, h, breaks, integrand);
    let growth = if near > 0.0 { far / near } else { f64::NAN };
    Ok(LpTailReport {
        verdict,
        tail_exponent: beta,
        integrand_exponent: exponent,
        partial_integral_growth: growth,
    })
}
