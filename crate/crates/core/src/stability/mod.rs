//! Stability of radial solutions.
//!
//! Two quadratic forms are discretised with piecewise-linear elements on
//! log-uniform nodes and reduced to symmetric tridiagonal pencils:
//!
//! * the reduced form `J(η) = ∫ r^{N−1}u_r²(η′² − (N−1)η²/r²) dr`, which is
//!   the second variation restricted to perturbations `η·u_r`, with mass
//!   weight `r^{N−1}u_r²`;
//! * the radial Schrödinger form `∫ r^{N−1}(v′² − V v²) dr` of the
//!   linearised operator `−Δ − V`, with mass weight `r^{N−1}`.
//!
//! Only signs of eigenvalues carry meaning; their magnitude depends on the
//! mass normalisation. All verdicts cover radial perturbations on a finite
//! horizon.

mod pencil;
mod tridiag;

pub use tridiag::{SymTridiagonal, TridiagonalPencil};

use crate::error::{Error, Result};
use crate::exponents::Dimension;
use crate::profile::RadialProfile;
use pencil::{log_nodes, ElementIntegrals, FullAssembly};

/// Eigenvalues below `−SIDE_TOL` count as genuine negative directions.
pub const SIDE_TOL: f64 = 1e-6;

/// Absolute bisection tolerance for pencil eigenvalues.
pub const EIGEN_TOL: f64 = 1e-12;

/// `(N−2)²/4 − c`: non-negative iff the potential `c/r²` passes the
/// exterior Hardy criterion.
pub fn hardy_margin(c: f64, n: Dimension) -> f64 {
    n.hardy_constant() - c
}

/// The annulus `1 ≤ r1 < r2 < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusWindow {
    r1: f64,
    r2: f64,
}

impl AnnulusWindow {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 >= 1.0 && r2 > r1 && r2.is_finite()) {
            return Err(Error::Argument {
                name: "window",
                reason: format!("need 1 <= r1 < r2 < inf, got [{r1}, {r2}]"),
            });
        }
        Ok(AnnulusWindow { r1, r2 })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    fn check_inside(&self, profile: &RadialProfile) -> Result<()> {
        if profile.contains(self.r1) && profile.contains(self.r2) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                r1: self.r1,
                r2: self.r2,
                lo: profile.inner_radius(),
                hi: profile.horizon(),
            })
        }
    }
}

/// Piecewise-linear (hence Lipschitz) test function on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    window: AnnulusWindow,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl TestFunction {
    /// `nodes` must be strictly increasing and span the window exactly.
    pub fn new(window: AnnulusWindow, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |reason: String| {
            Err(Error::Argument {
                name: "eta",
                reason,
            })
        };
        if nodes.len() < 2 || nodes.len() != values.len() {
            return bad(format!("{} nodes for {} values", nodes.len(), values.len()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("nodes must be strictly increasing".into());
        }
        let span = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        if !span(nodes[0], window.r1) || !span(nodes[nodes.len() - 1], window.r2) {
            return bad(format!(
                "nodes span [{}, {}], window is [{}, {}]",
                nodes[0],
                nodes[nodes.len() - 1],
                window.r1,
                window.r2
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return bad("non-finite value".into());
        }
        Ok(TestFunction {
            window,
            nodes,
            values,
        })
    }

    /// Samples `g` on `count` log-uniform nodes of the window.
    pub fn sample(window: AnnulusWindow, count: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::Argument {
                name: "eta",
                reason: "need at least 2 nodes".into(),
            });
        }
        let nodes = log_nodes(window.r1, window.r2, count);
        let values = nodes.iter().map(|&r| g(r)).collect();
        TestFunction::new(window, nodes, values)
    }

    /// Hat function vanishing at both window ends with its peak at `peak`.
    pub fn hat(window: AnnulusWindow, peak: f64) -> Result<Self> {
        if !(peak > window.r1 && peak < window.r2) {
            return Err(Error::Argument {
                name: "peak",
                reason: format!("{peak} is not inside the window"),
            });
        }
        TestFunction::new(
            window,
            vec![window.r1, peak, window.r2],
            vec![0.0, 1.0, 0.0],
        )
    }

    pub fn window(&self) -> AnnulusWindow {
        self.window
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> f64 {
        let k = self
            .nodes
            .partition_point(|&x| x <= r)
            .clamp(1, self.nodes.len() - 1);
        let (a, b) = (self.nodes[k - 1], self.nodes[k]);
        let s = ((r - a) / (b - a)).clamp(0.0, 1.0);
        self.values[k - 1] * (1.0 - s) + self.values[k] * s
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(r, v)| (r[0], r[1], v[0], v[1]))
    }
}

fn reduced_weights<'a>(
    profile: &'a RadialProfile,
    n: Dimension,
) -> impl Fn(f64) -> (f64, f64, f64) + 'a {
    let pw = n.get() as i32 - 1;
    let nm1 = n.as_f64() - 1.0;
    move |r| {
        let du = profile.derivative(r);
        let w = r.powi(pw) * du * du;
        (w, nm1 * w / (r * r), w)
    }
}

fn schrodinger_weights<V: Fn(f64) -> f64>(
    potential: V,
    n: Dimension,
) -> impl Fn(f64) -> (f64, f64, f64) {
    let pw = n.get() as i32 - 1;
    move |r| {
        let w = r.powi(pw);
        (w, w * potential(r), w)
    }
}

/// The reduced form `∫ r^{N−1}u_r²(η′² − (N−1)η²/r²) dr` over η's window.
pub fn reduced_form(profile: &RadialProfile, n: Dimension, eta: &TestFunction) -> Result<f64> {
    eta.window.check_inside(profile)?;
    let weights = reduced_weights(profile, n);
    let breaks = profile.radii();
    Ok(eta
        .segments()
        .map(|(a, b, ea, eb)| ElementIntegrals::compute(a, b, breaks, &weights).form(ea, eb))
        .sum())
}

/// `∫ r^{N−1}(η′² − V η²) dr` over η's window.
pub fn schrodinger_form<V: Fn(f64) -> f64>(potential: V, n: Dimension, eta: &TestFunction) -> f64 {
    let weights = schrodinger_weights(potential, n);
    eta.segments()
        .map(|(a, b, ea, eb)| ElementIntegrals::compute(a, b, &[], &weights).form(ea, eb))
        .sum()
}

/// Discretised reduced form on a window: `m` degrees of freedom at the
/// log-uniform nodes `r1 = x_0 < … < x_{m−1}`, with `η(r2) = 0`.
#[derive(Debug, Clone)]
pub struct ReducedPencil {
    pub window: AnnulusWindow,
    /// All `m + 1` mesh nodes including `r2`.
    pub nodes: Vec<f64>,
    pub stiffness: SymTridiagonal,
    pub potential: SymTridiagonal,
    pub mass: SymTridiagonal,
    full: FullAssembly,
}

impl ReducedPencil {
    /// `ηᵀ(K − P)η` for nodal values on the `m` degrees of freedom.
    pub fn form(&self, eta: &[f64]) -> f64 {
        self.stiffness.sub(&self.potential).quadratic_form(eta)
    }
}

fn check_dofs(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::Argument {
            name: "m",
            reason: format!("need at least 3 degrees of freedom, got {m}"),
        });
    }
    Ok(())
}

pub fn assemble_pencil(
    profile: &RadialProfile,
    n: Dimension,
    window: AnnulusWindow,
    m: usize,
) -> Result<ReducedPencil> {
    check_dofs(m)?;
    window.check_inside(profile)?;
    let nodes = log_nodes(window.r1, window.r2, m + 1);
    let weights = reduced_weights(profile, n);
    let breaks = profile.radii();
    let elements: Vec<ElementIntegrals> = nodes
        .windows(2)
        .map(|w| ElementIntegrals::compute(w[0], w[1], breaks, &weights))
        .collect();
    if elements.iter().all(|e| e.stiffness == 0.0) {
        return Err(Error::ZeroForm {
            r1: window.r1,
            r2: window.r2,
        });
    }
    let full = FullAssembly::from_elements(&elements);
    let (stiffness, potential, mass) = full.restrict(0, m);
    Ok(ReducedPencil {
        window,
        nodes,
        stiffness,
        potential,
        mass,
        full,
    })
}

/// Boundary handling for the reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaBoundary {
    /// η free at `r1`, `η(r2) = 0`.
    FreeInner,
    /// `η·u_r` vanishes at both ends: Dirichlet at an end where `u_r ≠ 0`,
    /// free where `u_r = 0`.
    VanishingProduct,
}

/// Smallest eigenvalue of `(K − P)x = λBx` with `η(r2) = 0` and the
/// corresponding minimiser.
pub fn minimize_reduced_form(
    profile: &RadialProfile,
    n: Dimension,
    window: AnnulusWindow,
    m: usize,
) -> Result<(f64, TestFunction)> {
    minimize_reduced_form_with(profile, n, window, m, EtaBoundary::FreeInner)
}

pub fn minimize_reduced_form_with(
    profile: &RadialProfile,
    n: Dimension,
    window: AnnulusWindow,
    m: usize,
    boundary: EtaBoundary,
) -> Result<(f64, TestFunction)> {
    let pencil = assemble_pencil(profile, n, window, m)?;
    let (start, end) = match boundary {
        EtaBoundary::FreeInner => (0, m),
        EtaBoundary::VanishingProduct => {
            let start = if profile.derivative(window.r1) == 0.0 {
                0
            } else {
                1
            };
            let end = if profile.derivative(window.r2) == 0.0 {
                m + 1
            } else {
                m
            };
            (start, end)
        }
    };
    let (k, p, b) = pencil.full.restrict(start, end);
    let a = k.sub(&p);
    let tp = TridiagonalPencil::new(&a, &b).ok_or(Error::SingularMass {
        r1: window.r1,
        r2: window.r2,
    })?;
    let lambda = tp.eigenvalue(0, EIGEN_TOL);
    let x = tp.eigenvector(lambda);
    let mut values = vec![0.0; m + 1];
    values[start..end].copy_from_slice(&x);
    Ok((lambda, TestFunction::new(window, pencil.nodes, values)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Every tested window from the smallest `R1` has a non-negative form.
    HL,
    /// Every tested `R1` admits a window with a negative form.
    HS,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideSchedule {
    pub r1: Vec<f64>,
    pub r2_growth: f64,
    pub max_windows: usize,
}

impl Default for SideSchedule {
    fn default() -> Self {
        SideSchedule {
            r1: (0..7).map(|k| f64::from(1u32 << k)).collect(),
            r2_growth: 2.0,
            max_windows: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMinimum {
    pub r1: f64,
    pub r2: f64,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideDecision {
    pub side: Side,
    /// The form vanished identically on some tested window (`u_r ≡ 0`).
    pub zero_form: bool,
    pub trace: Vec<WindowMinimum>,
}

/// Finite-horizon decision between the two complementary sign conditions
/// on the reduced form (free at `R1`, zero at `R2`).
pub fn decide_side(
    profile: &RadialProfile,
    n: Dimension,
    schedule: &SideSchedule,
    m: usize,
) -> SideDecision {
    let mut r1s: Vec<f64> = schedule
        .r1
        .iter()
        .copied()
        .filter(|&r| {
            profile.contains(r) && r * schedule.r2_growth <= profile.horizon() * (1.0 + 1e-12)
        })
        .collect();
    r1s.sort_by(f64::total_cmp);
    let mut out = SideDecision {
        side: Side::Undetermined,
        zero_form: false,
        trace: Vec::new(),
    };
    if r1s.is_empty() || !(schedule.r2_growth > 1.0) {
        return out;
    }

    let mut every_r1_negative = true;
    for (idx, &r1) in r1s.iter().enumerate() {
        let mut found_negative = false;
        let mut r2 = r1;
        for _ in 0..schedule.max_windows {
            r2 *= schedule.r2_growth;
            if r2 > profile.horizon() * (1.0 + 1e-12) {
                break;
            }
            let r2c = r2.min(profile.horizon());
            let Ok(window) = AnnulusWindow::new(r1, r2c) else {
                break;
            };
            let lambda = match minimize_reduced_form(profile, n, window, m) {
                Ok((lambda, _)) => lambda,
                Err(Error::ZeroForm { .. }) => {
                    out.zero_form = true;
                    0.0
                }
                Err(_) => continue,
            };
            out.trace.push(WindowMinimum {
                r1,
                r2: r2c,
                lambda_min: lambda,
            });
            if lambda < -SIDE_TOL {
                found_negative = true;
                break;
            }
        }
        if idx == 0 && !found_negative {
            out.side = Side::HL;
            return out;
        }
        if !found_negative {
            every_r1_negative = false;
            break;
        }
    }
    out.side = if every_r1_negative {
        Side::HS
    } else {
        Side::Undetermined
    };
    out
}

fn schrodinger_elements<V: Fn(f64) -> f64>(
    potential: V,
    n: Dimension,
    nodes: &[f64],
) -> Vec<ElementIntegrals> {
    let weights = schrodinger_weights(potential, n);
    nodes
        .windows(2)
        .map(|w| ElementIntegrals::compute(w[0], w[1], &[], &weights))
        .collect()
}

/// Principal Dirichlet eigenvalue and eigenfunction of
/// `−v″ − (N−1)/r·v′ − V v = λ v` on the window, with `m` interior nodes.
pub fn principal_mode<V: Fn(f64) -> f64>(
    potential: V,
    n: Dimension,
    window: AnnulusWindow,
    m: usize,
) -> Result<(f64, TestFunction)> {
    check_dofs(m)?;
    let nodes = log_nodes(window.r1, window.r2, m + 2);
    let full = FullAssembly::from_elements(&schrodinger_elements(potential, n, &nodes));
    let (lambda, x) = dirichlet_mode(&full, m + 1)?;
    let mut values = vec![0.0; m + 2];
    values[1..=m].copy_from_slice(&x);
    Ok((lambda, TestFunction::new(window, nodes, values)?))
}

pub fn principal_eigenvalue<V: Fn(f64) -> f64>(
    potential: V,
    n: Dimension,
    window: AnnulusWindow,
    m: usize,
) -> Result<f64> {
    check_dofs(m)?;
    let nodes = log_nodes(window.r1, window.r2, m + 2);
    let full = FullAssembly::from_elements(&schrodinger_elements(potential, n, &nodes));
    dirichlet_eigenvalue(&full, m + 1)
}

/// Pencil on the interior nodes `1..last` of an assembled mesh.
fn dirichlet_pencil(full: &FullAssembly, last: usize) -> Result<TridiagonalPencil> {
    let (k, p, b) = full.restrict(1, last);
    TridiagonalPencil::new(&k.sub(&p), &b).ok_or(Error::SingularMass {
        r1: f64::NAN,
        r2: f64::NAN,
    })
}

fn dirichlet_eigenvalue(full: &FullAssembly, last: usize) -> Result<f64> {
    Ok(dirichlet_pencil(full, last)?.eigenvalue(0, EIGEN_TOL))
}

fn dirichlet_mode(full: &FullAssembly, last: usize) -> Result<(f64, Vec<f64>)> {
    let tp = dirichlet_pencil(full, last)?;
    let lambda = tp.eigenvalue(0, EIGEN_TOL);
    Ok((lambda, tp.eigenvector(lambda)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityStatus {
    /// Non-negative on every tested radial window; not a certificate for
    /// non-radial perturbations.
    StableOnRadialClass,
    Unstable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// Negative-energy perturbation when unstable.
    pub witness: Option<TestFunction>,
    /// Independently re-integrated form value of the witness.
    pub witness_energy: Option<f64>,
    /// `(R2, λ₁)` for the windows `[1, R2]`.
    pub min_eigenvalue_trace: Vec<(f64, f64)>,
}

/// Principal eigenvalues of `−Δ − V` on `[1, R]` for a doubling schedule
/// of `R` up to `horizon`.
///
/// One log-uniform mesh with `m` interior nodes covers `[1, horizon]`; each
/// window uses the leading part of it, so the discrete spaces are nested
/// and `λ₁` is non-increasing along the schedule.
pub fn stability_scan<V: Fn(f64) -> f64>(
    potential: V,
    n: Dimension,
    horizon: f64,
    m: usize,
) -> Result<StabilityVerdict> {
    check_dofs(m)?;
    if !(horizon > 1.0 && horizon.is_finite()) {
        return Err(Error::Argument {
            name: "horizon",
            reason: format!("must be finite and > 1, got {horizon}"),
        });
    }
    let nodes = log_nodes(1.0, horizon, m + 2);
    let full = FullAssembly::from_elements(&schrodinger_elements(&potential, n, &nodes));

    let last_index = m + 1;
    let log_h = horizon.ln();
    let mut ends: Vec<usize> = Vec::new();
    let mut radius = 2.0;
    while radius < horizon {
        let j = ((radius.ln() / log_h) * last_index as f64).round() as usize;
        ends.push(j.max(4));
        radius *= 2.0;
    }
    ends.push(last_index);
    ends.dedup();

    let mut verdict = StabilityVerdict {
        status: StabilityStatus::Inconclusive,
        witness: None,
        witness_energy: None,
        min_eigenvalue_trace: Vec::new(),
    };
    let mut previous = f64::INFINITY;
    for &j in ends.iter().filter(|&&j| j >= 4 && j <= last_index) {
        let tp = dirichlet_pencil(&full, j)?;
        let lambda = tp.eigenvalue(0, EIGEN_TOL);
        assert!(
            lambda <= previous + 4.0 * EIGEN_TOL + 1e-10 * lambda.abs(),
            "domain monotonicity violated: {lambda} after {previous}"
        );
        previous = lambda;
        verdict.min_eigenvalue_trace.push((nodes[j], lambda));
        if lambda < -SIDE_TOL && verdict.witness.is_none() {
            let x = tp.eigenvector(lambda);
            let mut values = vec![0.0; j + 1];
            values[1..j].copy_from_slice(&x);
            let window = AnnulusWindow::new(1.0, nodes[j])?;
            let witness = TestFunction::new(window, nodes[..=j].to_vec(), values)?;
            verdict.witness_energy = Some(schrodinger_form(&potential, n, &witness));
            verdict.witness = Some(witness);
        }
    }
    if verdict.min_eigenvalue_trace.is_empty() {
        return Ok(verdict);
    }
    verdict.status = if verdict.witness.is_some() {
        StabilityStatus::Unstable
    } else {
        StabilityStatus::StableOnRadialClass
    };
    Ok(verdict)
}
