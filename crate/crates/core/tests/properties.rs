use proptest::prelude::*;

use radial_dichotomy::classify::{classify, estimate_limit, Verdict};
use radial_dichotomy::cli::default_fit_window;
use radial_dichotomy::family::{
    exact_stability, f_alpha, linearized_potential, power_solution, FamilyParameter,
};
use radial_dichotomy::nonlinearity::Affine;
use radial_dichotomy::ode::{critical_points, residual, solve_ivp, SolverSettings};
use radial_dichotomy::profile::rescale;
use radial_dichotomy::stability::{
    hardy_margin, minimize_reduced_form_with, stability_scan, AnnulusWindow, EtaBoundary,
    StabilityStatus, SIDE_TOL,
};
use radial_dichotomy::{exponents, Dimension, RadialGrid, RadialProfile};

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn member(alpha: f64, n: u32, horizon: f64, count: usize) -> RadialProfile {
    let grid = RadialGrid::log_uniform(1.0, horizon, count).unwrap();
    power_solution(FamilyParameter::new(alpha).unwrap(), dim(n), grid).unwrap()
}

/// A stable family parameter on either side of the gap.
fn stable_alpha(n: u32, offset: f64, large: bool) -> f64 {
    let e = exponents(dim(n));
    if large {
        e.lambda_plus + offset
    } else {
        e.lambda_minus - offset
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gap_width(n in 2u32..400) {
        let e = exponents(dim(n));
        let expected = 2.0 * f64::from(n - 1).sqrt();
        prop_assert!((e.gap() - expected).abs() <= 1e-12 * expected);
        prop_assert!(e.lambda_minus < e.lambda_plus);
    }

    #[test]
    fn closed_forms_solve_the_equation(alpha in -3.0f64..3.0, n in 2u32..13) {
        let p = member(alpha, n, 50.0, 100_001);
        let res = residual(&p, &f_alpha(FamilyParameter::new(alpha).unwrap(), dim(n)), dim(n)).unwrap();
        prop_assert!(res < 1e-7, "residual {res}");
    }

    #[test]
    fn stable_members_are_classified_by_side(n in 2u32..16, offset in 0.0f64..2.5, large in any::<bool>()) {
        let alpha = stable_alpha(n, offset, large);
        prop_assume!(exact_stability(FamilyParameter::new(alpha).unwrap(), dim(n)));
        let p = member(alpha, n, 1e4, 4001);
        let report = classify(&p, dim(n), &default_fit_window(&p).unwrap());
        prop_assert_eq!(report.verdict, if large { Verdict::Large } else { Verdict::Small });
        prop_assert!((report.fitted_exponent.unwrap() - alpha).abs() < 0.02);
        if report.verdict == Verdict::Small {
            prop_assert!(report.u_infinity.unwrap().finite().is_some());
            prop_assert!(critical_points(&p).all().iter().all(|&r| r <= 1.0 + 1e-6));
        }
    }

    #[test]
    fn rescaling_keeps_the_verdict(n in 2u32..12, offset in 0.0f64..2.0, large in any::<bool>(), r0 in 1.0f64..8.0) {
        let alpha = stable_alpha(n, offset, large);
        let p = member(alpha, n, 1e4, 4001);
        let w = rescale(&p, r0).unwrap();
        let a = classify(&p, dim(n), &default_fit_window(&p).unwrap());
        let b = classify(&w, dim(n), &default_fit_window(&w).unwrap());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.fitted_exponent.unwrap() - b.fitted_exponent.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn limit_estimate_is_stable_under_horizon_doubling(beta in 0.3f64..3.0, c in -5.0f64..5.0) {
        let build = |h: f64| {
            let g = RadialGrid::log_uniform(1.0, h, 2001).unwrap();
            RadialProfile::from_fn(g, |r| (c + r.powf(-beta), -beta * r.powf(-beta - 1.0))).unwrap()
        };
        let a = estimate_limit(&build(5e3)).unwrap().finite().unwrap();
        let b = estimate_limit(&build(1e4)).unwrap().finite().unwrap();
        let bound = 5e3f64.powf(-beta);
        prop_assert!((a - b).abs() <= bound, "{a} vs {b}");
        prop_assert!((b - c).abs() <= bound);
    }

    #[test]
    fn hardy_sign_agreement(n in 3u32..12, margin in prop_oneof![-2.0f64..-0.15, 0.1f64..2.0]) {
        // on [1, 10^4] the lowest log-scale mode costs (π / ln 10^4)² ≈ 0.116,
        // so margins in (−0.116, 0) cannot be resolved at this horizon
        let c = dim(n).hardy_constant() - margin;
        prop_assert!((hardy_margin(c, dim(n)) - margin).abs() < 1e-12);
        let v = stability_scan(|r| c / (r * r), dim(n), 1e4, 2000).unwrap();
        let trace = &v.min_eigenvalue_trace;
        prop_assert!(trace.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-10));
        let expected = if margin > 0.0 { StabilityStatus::StableOnRadialClass } else { StabilityStatus::Unstable };
        prop_assert_eq!(v.status, expected);
    }

    #[test]
    fn stable_scans_admit_no_negative_reduced_form(n in 2u32..12, offset in 0.0f64..2.0, large in any::<bool>()) {
        let alpha = stable_alpha(n, offset, large);
        let a = FamilyParameter::new(alpha).unwrap();
        let scan = stability_scan(|r| linearized_potential(a, dim(n), r), dim(n), 1e3, 400).unwrap();
        prop_assume!(scan.status == StabilityStatus::StableOnRadialClass);
        let p = member(alpha, n, 1e3, 2000);
        for (r1, r2) in [(1.0, 8.0), (1.0, 1e3), (3.0, 300.0)] {
            let window = AnnulusWindow::new(r1, r2).unwrap();
            let (lambda, _) = minimize_reduced_form_with(&p, dim(n), window, 200, EtaBoundary::VanishingProduct).unwrap();
            prop_assert!(lambda >= -SIDE_TOL, "[{r1}, {r2}]: {lambda}");
        }
    }

    #[test]
    fn oscillating_profiles_are_unstable(k in 0.5f64..4.0, n in 2u32..6) {
        let f = Affine { offset: 0.0, slope: k };
        let p = solve_ivp(&f, dim(n), 1.0, 0.0, &SolverSettings::default().with_horizon(100.0)).unwrap();
        prop_assert!(critical_points(&p).all().len() >= 2);
        let scan = stability_scan(|_| k, dim(n), 100.0, 1000).unwrap();
        prop_assert_eq!(scan.status, StabilityStatus::Unstable);
        prop_assert!(scan.witness_energy.unwrap() < 0.0);
    }
}
