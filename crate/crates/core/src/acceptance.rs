//! The acceptance suite: ten end-to-end checks of the numerical pipelines
//! against closed forms and the large/small dichotomy.

use std::time::Instant;

use rayon::prelude::*;

use crate::classify::{
    classify, dyadic_bound_check, lp_tail_test, BoundSide, FitWindow, LpVerdict, Verdict,
};
use crate::error::Result;
use crate::exponents::{exponents, Dimension};
use crate::family::{aubin_talenti, exact_stability, f_alpha, power_solution, FamilyParameter};
use crate::nonlinearity::Affine;
use crate::ode::{critical_points, residual, solve_ivp, SolverSettings};
use crate::profile::{RadialGrid, RadialProfile};
use crate::stability::{
    decide_side, hardy_margin, principal_eigenvalue, stability_scan, AnnulusWindow, Side,
    SideSchedule, StabilityStatus,
};

/// Dimensions swept by the exponent-boundary criteria.
pub const SWEEP_DIMENSIONS: [u32; 7] = [2, 3, 5, 9, 10, 11, 15];
/// Horizon of the closed-form family profiles.
pub const FAMILY_HORIZON: f64 = 1e4;
/// Nodes of the closed-form family profiles.
pub const FAMILY_NODES: usize = 4001;
/// Dyadic levels of the classification fit window.
pub const FIT_LEVELS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{mark}] {:>2} {} ({:.2} s): {}",
            self.id, self.name, self.seconds, self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "family stability boundary"),
    (2, "spectral Hardy threshold"),
    (3, "Dirichlet eigenvalue oracle"),
    (4, "solver reproduces the family"),
    (5, "dichotomy gap on stable members"),
    (6, "side and class agree"),
    (7, "gradient L^p thresholds"),
    (8, "Aubin-Talenti profile is small and stable"),
    (9, "oscillating solutions are unstable"),
    (10, "dyadic bound constants"),
];

/// Runs criterion `id` (1 to 10).
pub fn run(id: u32) -> Option<Outcome> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let result = match id {
        1 => family_boundary(),
        2 => hardy_threshold(),
        3 => dirichlet_oracle(),
        4 => solver_consistency(),
        5 => gap_property(),
        6 => side_equivalence(),
        7 => lp_thresholds(),
        8 => aubin_talenti_check(),
        9 => oscillation_check(),
        10 => dyadic_constants(),
        _ => return None,
    };
    let (passed, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("numerical error: {e}")),
    };
    Some(Outcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|c| run(c.0)).collect()
}

type Check = Result<(bool, String)>;

fn dim(n: u32) -> Dimension {
    Dimension::new(n).expect("sweep dimensions are valid")
}

fn param(alpha: f64) -> FamilyParameter {
    FamilyParameter::new(alpha).expect("finite parameter")
}

/// The 201 samples `−8 + 0.06k` of `[−8, 4]`.
pub fn alpha_samples() -> Vec<f64> {
    (0..=200).map(|k| -8.0 + 0.06 * k as f64).collect()
}

/// Stable samples together with both boundary members.
pub fn stable_members(n: Dimension) -> Vec<f64> {
    let e = exponents(n);
    let mut out: Vec<f64> = alpha_samples()
        .into_iter()
        .filter(|&a| exact_stability(param(a), n))
        .collect();
    out.push(e.lambda_minus);
    out.push(e.lambda_plus);
    out.sort_by(f64::total_cmp);
    out
}

pub fn family_profile(alpha: f64, n: Dimension) -> Result<RadialProfile> {
    power_solution(
        param(alpha),
        n,
        RadialGrid::log_uniform(1.0, FAMILY_HORIZON, FAMILY_NODES)?,
    )
}

fn family_boundary() -> Check {
    let samples = alpha_samples();
    let mut failures = Vec::new();
    for n in SWEEP_DIMENSIONS.map(dim) {
        let e = exponents(n);
        let flags: Vec<bool> = samples
            .iter()
            .map(|&a| exact_stability(param(a), n))
            .collect();
        for (k, pair) in flags.windows(2).enumerate() {
            let (lo, hi) = (samples[k], samples[k + 1]);
            let brackets = [e.lambda_minus, e.lambda_plus]
                .iter()
                .any(|&l| lo < l && l <= hi);
            if (pair[0] != pair[1]) != brackets {
                failures.push(format!("N={n}: flip mismatch on [{lo:.2}, {hi:.2}]"));
            }
        }
        for (&a, &flag) in samples.iter().zip(&flags) {
            // the Hardy margin of the linearised coefficient decides away from the boundary
            let margin = hardy_margin(crate::family::potential_coefficient(param(a), n), n);
            if margin.abs() > 1e-9 && flag != (margin > 0.0) {
                failures.push(format!(
                    "N={n}, alpha={a:.2}: predicate disagrees with Hardy margin"
                ));
            }
        }
        for l in [e.lambda_minus, e.lambda_plus] {
            if !exact_stability(param(l), n) {
                failures.push(format!("N={n}: boundary member {l} not stable"));
            }
        }
    }
    Ok(summary(failures, || {
        format!(
            "{} dimensions x {} samples",
            SWEEP_DIMENSIONS.len(),
            samples.len()
        )
    }))
}

fn hardy_threshold() -> Check {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for n in [3, 6, 10].map(dim) {
        for (shift, expected) in [
            (0.5, StabilityStatus::Unstable),
            (-0.5, StabilityStatus::StableOnRadialClass),
        ] {
            let c = n.hardy_constant() + shift;
            let v = stability_scan(|r| c / (r * r), n, 1e3, 2000)?;
            let last = v.min_eigenvalue_trace.last().map_or(f64::NAN, |x| x.1);
            detail.push(format!("N={n} c={c}: {last:.3e}"));
            if v.status != expected {
                failures.push(format!("N={n}, c={c}: {:?}", v.status));
            }
        }
    }
    Ok(summary(failures, || detail.join("; ")))
}

fn dirichlet_oracle() -> Check {
    let lambda = principal_eigenvalue(|_| 0.0, dim(3), AnnulusWindow::new(1.0, 2.0)?, 2000)?;
    let err = (lambda - std::f64::consts::PI.powi(2)).abs();
    Ok((
        err < 1e-4,
        format!("lambda_1 = {lambda:.10}, |lambda_1 - pi^2| = {err:.2e}"),
    ))
}

/// `(α, N)` pairs for the solver check, including both boundary exponents.
pub fn solver_pairs() -> Vec<(f64, u32)> {
    vec![
        (exponents(dim(3)).lambda_plus, 3),
        (exponents(dim(3)).lambda_minus, 3),
        (exponents(dim(5)).lambda_plus, 5),
        (exponents(dim(9)).lambda_plus, 9),
        (0.0, 2),
        (0.0, 10),
        (2.0, 4),
        (1.0, 3),
        (3.0, 5),
        (-1.0, 3),
        (0.5, 2),
        (-2.0, 4),
    ]
}

fn solver_consistency() -> Check {
    let settings = SolverSettings::default().with_horizon(100.0);
    let dense = RadialGrid::log_uniform(1.0, 100.0, 400_001)?;
    let rows: Vec<Result<(f64, u32, f64, f64)>> = solver_pairs()
        .into_par_iter()
        .map(|(alpha, n)| {
            let (a, nd) = (param(alpha), dim(n));
            let f = f_alpha(a, nd);
            let (u1, du1) = a.eval(1.0);
            let numeric = solve_ivp(&f, nd, u1, du1, &settings)?;
            let worst = numeric
                .radii()
                .iter()
                .zip(numeric.u())
                .map(|(&r, &u)| {
                    let exact = a.eval(r).0;
                    (u - exact).abs() / exact.abs().max(1e-12)
                })
                .skip(1)
                .fold(0.0, f64::max);
            let res = residual(&power_solution(a, nd, dense.clone())?, &f, nd)?;
            Ok((alpha, n, worst, res))
        })
        .collect();
    let mut failures = Vec::new();
    let (mut max_err, mut max_res) = (0.0_f64, 0.0_f64);
    for row in rows {
        let (alpha, n, err, res) = row?;
        max_err = max_err.max(err);
        max_res = max_res.max(res);
        if !(err <= 1e-7) {
            failures.push(format!("alpha={alpha:.4} N={n}: relative error {err:.2e}"));
        }
        if !(res < 1e-8) {
            failures.push(format!("alpha={alpha:.4} N={n}: residual {res:.2e}"));
        }
    }
    Ok(summary(failures, || {
        format!("12 pairs, max relative error {max_err:.2e}, max residual {max_res:.2e}")
    }))
}

fn member_cases() -> Vec<(f64, Dimension)> {
    SWEEP_DIMENSIONS
        .map(dim)
        .into_iter()
        .flat_map(|n| stable_members(n).into_iter().map(move |a| (a, n)))
        .collect()
}

/// Classification of one family member with the default tail window.
pub fn classify_member(
    alpha: f64,
    n: Dimension,
) -> Result<(RadialProfile, crate::classify::ClassificationReport)> {
    let profile = family_profile(alpha, n)?;
    let window = FitWindow::tail(&profile, FIT_LEVELS)?;
    let report = classify(&profile, n, &window);
    Ok((profile, report))
}

fn gap_property() -> Check {
    let cases = member_cases();
    let rows: Vec<Result<Option<String>>> = cases
        .par_iter()
        .map(|&(alpha, n)| {
            let e = exponents(n);
            let (_, r) = classify_member(alpha, n)?;
            let expected = if alpha >= e.lambda_plus {
                Verdict::Large
            } else {
                Verdict::Small
            };
            let fitted = r.fitted_exponent.unwrap_or(f64::NAN);
            Ok(if r.verdict != expected {
                Some(format!(
                    "N={n} alpha={alpha:.4}: {} (fitted {fitted:.4})",
                    r.verdict
                ))
            } else if !((fitted - alpha).abs() <= 0.02) {
                Some(format!(
                    "N={n} alpha={alpha:.4}: fitted exponent {fitted:.4}"
                ))
            } else {
                None
            })
        })
        .collect();
    let failures = collect_failures(rows)?;
    Ok(summary(failures, || {
        format!("{} stable members classified", cases.len())
    }))
}

/// Default-schedule side decision for one family member.
pub fn member_side(alpha: f64, n: Dimension, m: usize) -> Result<Side> {
    Ok(decide_side(&family_profile(alpha, n)?, n, &SideSchedule::default(), m).side)
}

fn side_equivalence() -> Check {
    let cases = member_cases();
    let rows: Vec<Result<Option<String>>> = cases
        .par_iter()
        .map(|&(alpha, n)| {
            let (profile, r) = classify_member(alpha, n)?;
            let side = decide_side(&profile, n, &SideSchedule::default(), 400).side;
            let agree = matches!(
                (side, r.verdict),
                (Side::HL, Verdict::Large) | (Side::HS, Verdict::Small)
            );
            Ok((!agree).then(|| format!("N={n} alpha={alpha:.4}: {side:?} vs {}", r.verdict)))
        })
        .collect();
    let failures = collect_failures(rows)?;
    Ok(summary(failures, || {
        format!("{} stable members agree", cases.len())
    }))
}

fn lp_thresholds() -> Check {
    let n = dim(11);
    let e = exponents(n);
    let mut failures = Vec::new();
    let large = family_profile(e.lambda_plus, n)?;
    let small = family_profile(e.lambda_minus, n)?;
    let cases = [
        (&large, 1.0, LpVerdict::Diverged),
        (&large, 2.0, LpVerdict::Diverged),
        (&large, 8.0, LpVerdict::Diverged),
        (&large, 8.2230, LpVerdict::Borderline),
        (&small, 1.5, LpVerdict::Converged),
        (&small, 2.0, LpVerdict::Converged),
        (&small, 10.0, LpVerdict::Converged),
    ];
    for (profile, p, expected) in cases {
        let rep = lp_tail_test(profile, n, p)?;
        if rep.verdict != expected {
            failures.push(format!(
                "p={p}: {} (p*beta+N = {:.4})",
                rep.verdict, rep.integrand_exponent
            ));
        }
    }
    Ok(summary(failures, || "7 (profile, p) cases".to_string()))
}

fn aubin_talenti_check() -> Check {
    let n = dim(3);
    let profile = aubin_talenti(1.0, n, RadialGrid::log_uniform(1.0, 1e4, FAMILY_NODES)?)?;
    let report = classify(&profile, n, &FitWindow::tail(&profile, FIT_LEVELS)?);
    let fitted = report.fitted_exponent.unwrap_or(f64::NAN);
    let u_inf = report
        .u_infinity
        .and_then(|v| v.finite())
        .unwrap_or(f64::NAN);
    let mut failures = Vec::new();
    if report.verdict != Verdict::Small {
        failures.push(format!("verdict {}", report.verdict));
    }
    if !((fitted + 1.0).abs() <= 0.05) {
        failures.push(format!("fitted exponent {fitted:.4}"));
    }
    if !(u_inf.abs() <= 1e-3) {
        failures.push(format!("u_inf {u_inf:.3e}"));
    }
    let near = aubin_talenti(1.0, n, RadialGrid::log_uniform(1.0, 1e3, FAMILY_NODES)?)?;
    let scan = stability_scan(|r| 5.0 * near.value(r).powi(4), n, 1e3, 2000)?;
    if scan.status != StabilityStatus::StableOnRadialClass {
        failures.push(format!("scan {:?}", scan.status));
    }
    if critical_points(&profile)
        .all()
        .iter()
        .any(|&r| r > 1.0 + 1e-6)
    {
        failures.push("critical point beyond r = 1".into());
    }
    Ok(summary(failures, || {
        format!("Small, exponent {fitted:.4}, u_inf {u_inf:.2e}, stable on [1, 1e3]")
    }))
}

fn oscillation_check() -> Check {
    let n = dim(3);
    let linear = Affine {
        offset: 0.0,
        slope: 1.0,
    };
    let profile = solve_ivp(
        &linear,
        n,
        1.0,
        0.0,
        &SolverSettings::default().with_horizon(100.0),
    )?;
    let crit = critical_points(&profile);
    let count = crit.all().len();
    let scan = stability_scan(|_| 1.0, n, 100.0, 1000)?;
    let mut failures = Vec::new();
    if count < 2 {
        failures.push(format!("only {count} critical points"));
    }
    if scan.status != StabilityStatus::Unstable {
        failures.push(format!("scan {:?}", scan.status));
    }
    // small members across the sweep have no interior critical point
    let rows: Vec<Result<Option<String>>> = member_cases()
        .par_iter()
        .map(|&(alpha, n)| {
            let (profile, r) = classify_member(alpha, n)?;
            let bad = r.verdict == Verdict::Small
                && critical_points(&profile)
                    .all()
                    .iter()
                    .any(|&x| x > 1.0 + 1e-6);
            Ok(bad.then(|| format!("N={n} alpha={alpha:.4}: small with a critical point")))
        })
        .collect();
    failures.extend(collect_failures(rows)?);
    Ok(summary(failures, || {
        format!("{count} critical points, V = 1 unstable")
    }))
}

fn dyadic_constants() -> Check {
    let n = dim(5);
    let e = exponents(n);
    let mut failures = Vec::new();
    let mut spreads = Vec::new();
    for (alpha, side) in [
        (e.lambda_plus, BoundSide::L),
        (e.lambda_minus, BoundSide::S),
    ] {
        let profile = family_profile(alpha, n)?;
        let window = FitWindow::tail(&profile, FIT_LEVELS)?;
        let rep = dyadic_bound_check(&profile, n, side, &window)?;
        spreads.push(rep.spread());
        if rep.ratios.len() < FIT_LEVELS || !(rep.spread() <= 1e-6) || !rep.holds {
            failures.push(format!(
                "side {side:?}: spread {:.2e} over {} levels",
                rep.spread(),
                rep.ratios.len()
            ));
        }
    }
    Ok(summary(failures, || {
        format!("ratio spreads L {:.2e}, S {:.2e}", spreads[0], spreads[1])
    }))
}

fn collect_failures(rows: Vec<Result<Option<String>>>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for row in rows {
        if let Some(msg) = row? {
            out.push(msg);
        }
    }
    Ok(out)
}

fn summary(failures: Vec<String>, ok: impl FnOnce() -> String) -> (bool, String) {
    if failures.is_empty() {
        (true, ok())
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        let more = failures.len().saturating_sub(5);
        let tail = if more > 0 {
            format!(" (+{more} more)")
        } else {
            String::new()
        };
        (false, format!("{}{tail}", shown.join("; ")))
    }
}
