//! Radial grids and sampled radial profiles `(u, u_r)` on `r ≥ 1`.
//!
//! Profiles are interpolated by cubic Hermite polynomials in `t = log r`
//! using the nodal values of `u` and `du/dt = r·u_r`. The interpolant is
//! the single source of off-node values for every downstream quadrature.

use crate::error::{Error, Result};

/// Strictly increasing, finite radii starting at `r ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    log_nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Grid(format!(
                "need at least 2 nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(bad) = nodes.iter().find(|r| !r.is_finite()) {
            return Err(Error::Grid(format!("non-finite node {bad}")));
        }
        if nodes[0] < 1.0 {
            return Err(Error::Grid(format!(
                "first node {} lies inside the unit ball",
                nodes[0]
            )));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Grid(format!(
                "nodes not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        let log_nodes = nodes.iter().map(|r| r.ln()).collect();
        Ok(RadialGrid { nodes, log_nodes })
    }

    /// `count` nodes equally spaced in `log r` over `[lo, hi]`, endpoints exact.
    pub fn log_uniform(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Grid(format!("need at least 2 nodes, got {count}")));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Grid(format!("invalid range [{lo}, {hi}]")));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let last = (count - 1) as f64;
        let mut nodes: Vec<f64> = (0..count)
            .map(|i| (a + (b - a) * i as f64 / last).exp())
            .collect();
        nodes[0] = lo;
        nodes[count - 1] = hi;
        RadialGrid::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index `i` of the interval `[r_i, r_{i+1}]` containing `r` (clamped).
    pub(crate) fn interval(&self, r: f64) -> usize {
        let k = self.nodes.partition_point(|&x| x <= r);
        k.saturating_sub(1).min(self.nodes.len() - 2)
    }

    pub(crate) fn log_node(&self, i: usize) -> f64 {
        self.log_nodes[i]
    }
}

/// Samples of `u` and `u_r` on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    grid: RadialGrid,
    u: Vec<f64>,
    u_r: Vec<f64>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, u: Vec<f64>, u_r: Vec<f64>) -> Result<Self> {
        if u.len() != grid.len() || u_r.len() != grid.len() {
            return Err(Error::Profile(format!(
                "grid has {} nodes but u has {} and u_r has {} entries",
                grid.len(),
                u.len(),
                u_r.len()
            )));
        }
        if let Some(i) = (0..u.len()).find(|&i| !u[i].is_finite() || !u_r[i].is_finite()) {
            return Err(Error::Profile(format!(
                "non-finite sample at r = {}",
                grid.nodes[i]
            )));
        }
        Ok(RadialProfile { grid, u, u_r })
    }

    /// Samples a closed form `r ↦ (u(r), u_r(r))` on `grid`.
    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (u, u_r) = grid.nodes().iter().map(|&r| f(r)).unzip();
        RadialProfile::new(grid, u, u_r)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn radii(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn u_r(&self) -> &[f64] {
        &self.u_r
    }

    pub fn inner_radius(&self) -> f64 {
        self.grid.first()
    }

    pub fn horizon(&self) -> f64 {
        self.grid.last()
    }

    pub fn contains(&self, r: f64) -> bool {
        let slack = 1e-12 * r.abs().max(1.0);
        r >= self.inner_radius() - slack && r <= self.horizon() + slack
    }

    /// Sum of `|u_{i+1} − u_i|` over the grid.
    pub fn total_variation(&self) -> f64 {
        self.u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// Interpolated `(u, u_r)` at `r`; radii outside the grid are clamped.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let r = r.clamp(self.inner_radius(), self.horizon());
        let i = self.grid.interval(r);
        let (t0, t1) = (self.grid.log_node(i), self.grid.log_node(i + 1));
        let h = t1 - t0;
        let s = ((r.ln() - t0) / h).clamp(0.0, 1.0);
        let (r0, r1) = (self.grid.nodes[i], self.grid.nodes[i + 1]);
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (v0, v1) = (r0 * self.u_r[i], r1 * self.u_r[i + 1]);

        let s2 = s * s;
        let s3 = s2 * s;
        let u = (2.0 * s3 - 3.0 * s2 + 1.0) * u0
            + (s3 - 2.0 * s2 + s) * h * v0
            + (-2.0 * s3 + 3.0 * s2) * u1
            + (s3 - s2) * h * v1;
        let du_dt = (6.0 * s2 - 6.0 * s) * (u0 - u1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * v0
            + (3.0 * s2 - 2.0 * s) * v1;
        (u, du_dt / r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.eval(r).1
    }

    /// Interpolates onto `grid`, which must lie inside the profile domain.
    pub fn resample(&self, grid: RadialGrid) -> Result<Self> {
        if !self.contains(grid.first()) || !self.contains(grid.last()) {
            return Err(Error::OutsideDomain {
                r1: grid.first(),
                r2: grid.last(),
                lo: self.inner_radius(),
                hi: self.horizon(),
            });
        }
        RadialProfile::from_fn(grid, |r| self.eval(r))
    }

    /// `w(r) = u(factor·r)` on the nodes divided by `factor`.
    ///
    /// The result must still live on `r ≥ 1`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Argument {
                name: "factor",
                reason: format!("must be positive, got {factor}"),
            });
        }
        let nodes: Vec<f64> = self.radii().iter().map(|r| r / factor).collect();
        let grid = RadialGrid::new(nodes)?;
        let u_r = self.u_r.iter().map(|d| d * factor).collect();
        RadialProfile::new(grid, self.u.clone(), u_r)
    }
}

/// Rescaling `w(x) = u(R0·x)`: maps a profile known on `r ≥ R0` to one on
/// `r ≥ 1`, with `w_r(r) = R0·u_r(R0·r)`.
///
/// If `u` solves `−Δu = g(u)` then `w` solves `−Δw = R0²·g(w)`; see
/// [`crate::nonlinearity::Rescaled`].
pub fn rescale(profile: &RadialProfile, r0: f64) -> Result<RadialProfile> {
    if !(r0.is_finite() && r0 >= 1.0) {
        return Err(Error::Argument {
            name: "R0",
            reason: format!("must be >= 1, got {r0}"),
        });
    }
    if !profile.contains(r0) || profile.horizon() <= r0 * (1.0 + 1e-12) {
        return Err(Error::OutsideDomain {
            r1: r0,
            r2: f64::INFINITY,
            lo: profile.inner_radius(),
            hi: profile.horizon(),
        });
    }
    let cut = r0 * (1.0 + 1e-12);
    let (u0, du0) = profile.eval(r0);
    let mut nodes = vec![1.0];
    let mut u = vec![u0];
    let mut u_r = vec![r0 * du0];
    for (i, &r) in profile.radii().iter().enumerate() {
        if r > cut {
            nodes.push(r / r0);
            u.push(profile.u[i]);
            u_r.push(r0 * profile.u_r[i]);
        }
    }
    RadialProfile::new(RadialGrid::new(nodes)?, u, u_r)
}
