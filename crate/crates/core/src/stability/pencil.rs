//! Piecewise-linear Galerkin assembly of the radial quadratic forms.

use super::tridiag::SymTridiagonal;
use crate::quadrature::for_each_point;

/// Integrals of one linear element `[a, b]` against the nodal hat
/// functions `φ_a = (b−r)/h`, `φ_b = (r−a)/h`.
///
/// `stiffness` is `∫ s(r) dr / h²`; `potential` and `mass` hold the
/// `[aa, ab, bb]` entries of `∫ p φφ` and `∫ m φφ`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct ElementIntegrals {
    pub stiffness: f64,
    pub potential: [f64; 3],
    pub mass: [f64; 3],
}

impl ElementIntegrals {
    /// Integrates the weights `r ↦ (s, p, m)` on `[a, b]` with composite
    /// Gauss rules split at `breaks`.
    pub fn compute(
        a: f64,
        b: f64,
        breaks: &[f64],
        weights: impl Fn(f64) -> (f64, f64, f64),
    ) -> Self {
        let h = b - a;
        let mut e = ElementIntegrals::default();
        for_each_point(a, b, breaks, |r, w| {
            let (s, p, m) = weights(r);
            let pa = (b - r) / h;
            let pb = (r - a) / h;
            e.stiffness += w * s;
            e.potential[0] += w * p * pa * pa;
            e.potential[1] += w * p * pa * pb;
            e.potential[2] += w * p * pb * pb;
            e.mass[0] += w * m * pa * pa;
            e.mass[1] += w * m * pa * pb;
            e.mass[2] += w * m * pb * pb;
        });
        e.stiffness /= h * h;
        e
    }

    /// Value of `∫ s η′² − p η²` for the linear `η` with end values
    /// `(ea, eb)`.
    pub fn form(&self, ea: f64, eb: f64) -> f64 {
        let d = eb - ea;
        self.stiffness * d * d
            - (self.potential[0] * ea * ea
                + 2.0 * self.potential[1] * ea * eb
                + self.potential[2] * eb * eb)
    }
}

/// Stiffness, potential and mass matrices on every node of a mesh
/// (boundary conditions are applied by taking sub-blocks).
#[derive(Debug, Clone)]
pub(crate) struct FullAssembly {
    pub stiffness: SymTridiagonal,
    pub potential: SymTridiagonal,
    pub mass: SymTridiagonal,
}

impl FullAssembly {
    pub fn from_elements(elements: &[ElementIntegrals]) -> Self {
        let n = elements.len() + 1;
        let mut k = SymTridiagonal::zeros(n);
        let mut p = SymTridiagonal::zeros(n);
        let mut m = SymTridiagonal::zeros(n);
        for (i, e) in elements.iter().enumerate() {
            k.diag[i] += e.stiffness;
            k.diag[i + 1] += e.stiffness;
            k.off[i] -= e.stiffness;
            p.diag[i] += e.potential[0];
            p.off[i] += e.potential[1];
            p.diag[i + 1] += e.potential[2];
            m.diag[i] += e.mass[0];
            m.off[i] += e.mass[1];
            m.diag[i + 1] += e.mass[2];
        }
        FullAssembly {
            stiffness: k,
            potential: p,
            mass: m,
        }
    }

    /// Restriction to the contiguous node range `start..end`.
    pub fn restrict(
        &self,
        start: usize,
        end: usize,
    ) -> (SymTridiagonal, SymTridiagonal, SymTridiagonal) {
        let cut = |m: &SymTridiagonal| m.leading(end).trailing(start);
        (cut(&self.stiffness), cut(&self.potential), cut(&self.mass))
    }
}

/// `count` nodes log-uniform on `[lo, hi]` with exact endpoints.
pub(crate) fn log_nodes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = (count - 1) as f64;
    let mut v: Vec<f64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / last).exp())
        .collect();
    v[0] = lo;
    v[count - 1] = hi;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weights_give_textbook_matrices() {
        let e = ElementIntegrals::compute(1.0, 1.5, &[], |_| (1.0, 1.0, 1.0));
        assert!((e.stiffness - 2.0).abs() < 1e-14);
        assert!((e.mass[0] - 0.5 / 3.0).abs() < 1e-14);
        assert!((e.mass[1] - 0.5 / 6.0).abs() < 1e-14);
        let f = FullAssembly::from_elements(&[e, e]);
        assert_eq!(f.stiffness.diag, vec![2.0, 4.0, 2.0]);
        let (k, _, _) = f.restrict(1, 2);
        assert_eq!(k.diag, vec![4.0]);
    }
}
