//! Radial reduction `u″ + (N−1)/r·u′ + f(u) = 0` on `r ≥ 1`.
//!
//! Integration runs in `t = log r` on the state `(u, v = r·u_r)`:
//!
//! ```text
//! u̇ = v,   v̇ = (2 − N)·v − e^{2t}·f(u)
//! ```
//!
//! with the Dormand–Prince 5(4) pair, PI step-size control and the pair's
//! native fourth-order continuous extension for resampling onto a
//! log-uniform output grid.

use crate::error::{Error, Result};
use crate::exponents::Dimension;
use crate::nonlinearity::Nonlinearity;
use crate::profile::{RadialGrid, RadialProfile};

/// `|u|` above this value is reported as blow-up.
pub const OVERFLOW_GUARD: f64 = 1e150;

const MAX_STEP: f64 = 0.1;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Horizon of the integration.
    pub r_max: f64,
    pub max_steps: usize,
    /// First trial step, in units of `log r`.
    pub initial_step: f64,
    /// Number of log-uniform output nodes on `[1, r_max]`.
    pub grid_points: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            r_max: 1e4,
            max_steps: 1_000_000,
            initial_step: 1e-3,
            grid_points: 2001,
        }
    }
}

impl SolverSettings {
    pub fn with_horizon(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.grid_points = points;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::Argument { name, reason });
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol", format!("must be positive, got {}", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol", format!("must be positive, got {}", self.abs_tol));
        }
        if !(self.r_max > 1.0 && self.r_max.is_finite()) {
            return bad(
                "r_max",
                format!("must be finite and > 1, got {}", self.r_max),
            );
        }
        if self.max_steps == 0 {
            return bad("max_steps", "must be positive".into());
        }
        if !(self.initial_step > 0.0) {
            return bad(
                "initial_step",
                format!("must be positive, got {}", self.initial_step),
            );
        }
        if self.grid_points < 2 {
            return bad(
                "grid_points",
                format!("must be >= 2, got {}", self.grid_points),
            );
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Continuous extension.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 2];

struct RadialSystem<'a, F: ?Sized> {
    f: &'a F,
    n: f64,
}

impl<F: Nonlinearity + ?Sized> RadialSystem<'_, F> {
    fn rhs(&self, t: f64, y: &State) -> State {
        let r2 = (2.0 * t).exp();
        [y[1], (2.0 - self.n) * y[1] - r2 * self.f.value(y[0])]
    }
}

/// Integrates from `r = 1` with `u(1) = u1`, `u_r(1) = du1` up to
/// `settings.r_max` and returns the solution on a log-uniform grid.
pub fn solve_ivp<F: Nonlinearity + ?Sized>(
    f: &F,
    n: Dimension,
    u1: f64,
    du1: f64,
    settings: &SolverSettings,
) -> Result<RadialProfile> {
    settings.validate()?;
    if !(u1.is_finite() && du1.is_finite()) {
        return Err(Error::Argument {
            name: "initial data",
            reason: format!("non-finite ({u1}, {du1})"),
        });
    }
    let sys = RadialSystem { f, n: n.as_f64() };
    let grid = RadialGrid::log_uniform(1.0, settings.r_max, settings.grid_points)?;
    let t_end = settings.r_max.ln();
    let out_t: Vec<f64> = grid.nodes().iter().map(|r| r.ln()).collect();

    let mut u_out = Vec::with_capacity(out_t.len());
    let mut v_out = Vec::with_capacity(out_t.len());
    u_out.push(u1);
    v_out.push(du1);
    let mut next_out = 1;

    let mut t = 0.0;
    let mut y: State = [u1, du1];
    let mut k0 = sys.rhs(t, &y);
    let mut h = settings.initial_step.min(MAX_STEP).min(t_end);
    let mut err_old: f64 = 1e-4;
    let mut steps = 0usize;
    let mut k = [[0.0; 2]; 7];

    while next_out < out_t.len() {
        if steps >= settings.max_steps {
            return Err(Error::StepBudget {
                radius: t.exp(),
                max_steps: settings.max_steps,
            });
        }
        steps += 1;
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            // The step collapsed: the solution has a singularity here.
            return Err(Error::BlowUp {
                radius: t.exp(),
                guard: OVERFLOW_GUARD,
            });
        }

        k[0] = k0;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            k[s] = sys.rhs(t + C[s] * h, &ys);
        }
        // Row 6 of A holds the fifth-order weights, so stage 7 is evaluated at y_new.
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += h * A[6][j] * kj[0];
            y_new[1] += h * A[6][j] * kj[1];
        }

        let mut err = 0.0;
        for i in 0..2 {
            let e: f64 = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sk = settings.abs_tol + settings.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / sk).powi(2);
        }
        let err = (err / 2.0).sqrt();

        if !err.is_finite() || !y_new[0].is_finite() {
            // Shrink and retry; persistent non-finite states end as blow-up.
            if h < 1e-12 {
                return Err(Error::BlowUp {
                    radius: t.exp(),
                    guard: OVERFLOW_GUARD,
                });
            }
            h *= FAC_MIN;
            continue;
        }

        let fac_err = err.powf(0.2 - BETA * 0.75) * err_old.powf(-BETA) / SAFETY;
        if err <= 1.0 {
            let t_new = t + h;
            // Dense output coefficients.
            let mut cont = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k[6][i] - bspl;
                cont[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
            }
            while next_out < out_t.len()
                && (out_t[next_out] <= t_new || (last && next_out == out_t.len() - 1))
            {
                let theta = ((out_t[next_out] - t) / h).clamp(0.0, 1.0);
                let th1 = 1.0 - theta;
                let mut yi = [0.0; 2];
                for i in 0..2 {
                    yi[i] = cont[0][i]
                        + theta
                            * (cont[1][i]
                                + th1 * (cont[2][i] + theta * (cont[3][i] + th1 * cont[4][i])));
                }
                if next_out == out_t.len() - 1 && last {
                    yi = y_new;
                }
                u_out.push(yi[0]);
                v_out.push(yi[1]);
                next_out += 1;
            }

            t = t_new;
            y = y_new;
            k0 = k[6];
            err_old = err.max(1e-4);
            if y[0].abs() > OVERFLOW_GUARD {
                return Err(Error::BlowUp {
                    radius: t.exp(),
                    guard: OVERFLOW_GUARD,
                });
            }
            if last {
                break;
            }
            h = (h / fac_err.clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN)).min(MAX_STEP);
        } else {
            h /= (err.powf(0.2) / SAFETY).min(1.0 / FAC_MIN);
        }
    }

    let u_r = grid
        .nodes()
        .iter()
        .zip(&v_out)
        .map(|(r, v)| v / r)
        .collect();
    RadialProfile::new(grid, u_out, u_r)
}

/// Maximum over interior nodes of `|u″ + (N−1)/r·u′ + f(u)| / (1 + |f(u)|)`,
/// with `u″` from the second-order three-point derivative of the sampled
/// `u_r` on the (possibly nonuniform) grid.
pub fn residual<F: Nonlinearity + ?Sized>(
    profile: &RadialProfile,
    f: &F,
    n: Dimension,
) -> Result<f64> {
    let r = profile.radii();
    if r.len() < 3 {
        return Err(Error::Profile(format!(
            "residual needs >= 3 nodes, got {}",
            r.len()
        )));
    }
    let (u, du) = (profile.u(), profile.u_r());
    let nm1 = n.as_f64() - 1.0;
    let mut worst: f64 = 0.0;
    for i in 1..r.len() - 1 {
        let hm = r[i] - r[i - 1];
        let hp = r[i + 1] - r[i];
        let d2 =
            (hm * hm * (du[i + 1] - du[i]) + hp * hp * (du[i] - du[i - 1])) / (hm * hp * (hm + hp));
        let fu = f.value(u[i]);
        let res = (d2 + nm1 / r[i] * du[i] + fu).abs() / (1.0 + fu.abs());
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Radii where `u_r` vanishes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CriticalPoints {
    /// Sign changes of `u_r`, refined by bisection on the interpolant.
    pub crossings: Vec<f64>,
    /// Nodes where `u_r` is exactly zero without a sign change.
    pub touchpoints: Vec<f64>,
}

impl CriticalPoints {
    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.touchpoints.is_empty()
    }

    /// All critical radii, sorted.
    pub fn all(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .crossings
            .iter()
            .chain(&self.touchpoints)
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn critical_points(profile: &RadialProfile) -> CriticalPoints {
    let r = profile.radii();
    let du = profile.u_r();
    let sign = |x: f64| {
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut out = CriticalPoints::default();
    let mut i = 0;
    while i < r.len() {
        let s = sign(du[i]);
        if s == 0 {
            let start = i;
            while i < r.len() && sign(du[i]) == 0 {
                i += 1;
            }
            let before = (start > 0).then(|| sign(du[start - 1]));
            let after = (i < r.len()).then(|| sign(du[i]));
            match (before, after) {
                (Some(a), Some(b)) if a != b => out.crossings.push(r[start]),
                _ => out.touchpoints.push(r[start]),
            }
            continue;
        }
        if i + 1 < r.len() && s * sign(du[i + 1]) < 0 {
            out.crossings
                .push(bisect_derivative(profile, r[i], r[i + 1], s));
        }
        i += 1;
    }
    out
}

fn bisect_derivative(profile: &RadialProfile, mut lo: f64, mut hi: f64, sign_lo: i32) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * mid {
            break;
        }
        let d = profile.derivative(mid);
        if d == 0.0 {
            return mid;
        }
        if (d > 0.0) == (sign_lo > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::exponents;
    use crate::family::{f_alpha, power_solution, FamilyParameter};
    use crate::nonlinearity::{Affine, Zero};

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn harmonic_solution() {
        let s = SolverSettings::default()
            .with_horizon(100.0)
            .with_grid_points(1001);
        let p = solve_ivp(&Zero, dim(3), 1.0, 1.0, &s).unwrap();
        for (&r, (&u, &du)) in p.radii().iter().zip(p.u().iter().zip(p.u_r())) {
            assert!((u - (2.0 - 1.0 / r)).abs() < 1e-9, "r={r}");
            assert!((du - 1.0 / (r * r)).abs() < 1e-9, "r={r}");
        }
        assert!((p.value(2.0) - 1.5).abs() < 1e-9);
    }

    #[test]
    fn reproduces_log_member() {
        let f = f_alpha(FamilyParameter::new(0.0).unwrap(), dim(5));
        let s = SolverSettings::default().with_horizon(100.0);
        let p = solve_ivp(&f, dim(5), 0.0, 1.0, &s).unwrap();
        for (&r, &u) in p.radii().iter().zip(p.u()) {
            assert!((u - r.ln()).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn reproduces_small_member() {
        let l = exponents(dim(3)).lambda_minus;
        let a = FamilyParameter::new(l).unwrap();
        let s = SolverSettings::default().with_horizon(100.0);
        let p = solve_ivp(&f_alpha(a, dim(3)), dim(3), 1.0, l, &s).unwrap();
        for (&r, &u) in p.radii().iter().zip(p.u()) {
            let exact = r.powf(l);
            assert!(((u - exact) / exact).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn blow_up_is_reported() {
        // f(s) = −s³ drives blow-up for large data
        struct Cubic;
        impl Nonlinearity for Cubic {
            fn value(&self, s: f64) -> f64 {
                -s * s * s
            }
            fn derivative(&self, s: f64) -> f64 {
                -3.0 * s * s
            }
        }
        let err = solve_ivp(&Cubic, dim(3), 10.0, 10.0, &SolverSettings::default()).unwrap_err();
        match err {
            Error::BlowUp { radius, .. } => assert!(radius > 1.0 && radius < 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_budget_is_reported() {
        let s = SolverSettings {
            max_steps: 5,
            ..SolverSettings::default()
        };
        assert!(matches!(
            solve_ivp(
                &Affine {
                    offset: 0.0,
                    slope: 1.0
                },
                dim(3),
                1.0,
                0.0,
                &s
            ),
            Err(Error::StepBudget { .. })
        ));
    }

    #[test]
    fn invalid_settings() {
        let s = SolverSettings {
            rel_tol: 0.0,
            ..SolverSettings::default()
        };
        assert!(solve_ivp(&Zero, dim(3), 0.0, 0.0, &s).is_err());
        let s = SolverSettings {
            r_max: 1.0,
            ..SolverSettings::default()
        };
        assert!(solve_ivp(&Zero, dim(3), 0.0, 0.0, &s).is_err());
    }

    #[test]
    fn residual_of_exact_members() {
        let g = RadialGrid::log_uniform(1.0, 100.0, 2000).unwrap();
        let a = FamilyParameter::new(2.0).unwrap();
        let p = power_solution(a, dim(4), g.clone()).unwrap();
        assert!(residual(&p, &f_alpha(a, dim(4)), dim(4)).unwrap() <= 1e-8);
        let c = RadialProfile::from_fn(g, |_| (3.0, 0.0)).unwrap();
        assert_eq!(residual(&c, &Zero, dim(4)).unwrap(), 0.0);
    }

    #[test]
    fn critical_point_examples() {
        let g = RadialGrid::log_uniform(1.0, 50.0, 500).unwrap();
        let a = FamilyParameter::new(3.0).unwrap();
        assert!(critical_points(&power_solution(a, dim(5), g).unwrap()).is_empty());

        let g = RadialGrid::log_uniform(1.0, 10.0, 301).unwrap();
        let p = RadialProfile::from_fn(g, |r| ((r - 2.0).powi(2) + 1.0, 2.0 * (r - 2.0))).unwrap();
        let cp = critical_points(&p);
        assert_eq!(cp.crossings.len(), 1);
        assert!((cp.crossings[0] - 2.0).abs() < 1e-6);

        // exact zero on a node: u = (r − 2)², grid containing 2
        let g = RadialGrid::new(vec![1.0, 1.5, 2.0, 2.5, 3.0]).unwrap();
        let p = RadialProfile::from_fn(g, |r| ((r - 2.0).powi(2), 2.0 * (r - 2.0))).unwrap();
        assert_eq!(critical_points(&p).crossings, vec![2.0]);

        // touchpoint: u = (r − 2)³
        let g = RadialGrid::new(vec![1.0, 1.5, 2.0, 2.5, 3.0]).unwrap();
        let p =
            RadialProfile::from_fn(g, |r| ((r - 2.0).powi(3), 3.0 * (r - 2.0).powi(2))).unwrap();
        let cp = critical_points(&p);
        assert!(cp.crossings.is_empty());
        assert_eq!(cp.touchpoints, vec![2.0]);
    }

    #[test]
    fn oscillatory_linear_solution() {
        let s = SolverSettings::default().with_horizon(30.0);
        let p = solve_ivp(
            &Affine {
                offset: 0.0,
                slope: 1.0,
            },
            dim(3),
            1.0,
            0.0,
            &s,
        )
        .unwrap();
        let cp = critical_points(&p);
        // u = (cos(r−1) + sin(r−1))/r: u_r changes sign roughly every π
        assert!(cp.crossings.len() >= 2, "{cp:?}");
        let exact = |r: f64| ((r - 1.0).cos() + (r - 1.0).sin()) / r;
        for &r in &[2.0, 5.0, 17.0, 29.0] {
            assert!((p.value(r) - exact(r)).abs() < 1e-8);
        }
    }
}
