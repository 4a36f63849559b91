//! Symmetric tridiagonal pencils `(A, B)` with `B` positive definite.
//!
//! Eigenvalues are located by Sturm-sequence bisection: by Sylvester's law
//! of inertia the number of negative pivots in the `LDLᵀ` factorisation of
//! `A − σB` equals the number of eigenvalues below `σ`.

/// Symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn zeros(n: usize) -> Self {
        SymTridiagonal {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Leading principal `k × k` block.
    pub fn leading(&self, k: usize) -> Self {
        SymTridiagonal {
            diag: self.diag[..k].to_vec(),
            off: self.off[..k.saturating_sub(1)].to_vec(),
        }
    }

    /// Trailing block starting at row `k`.
    pub fn trailing(&self, k: usize) -> Self {
        SymTridiagonal {
            diag: self.diag[k..].to_vec(),
            off: self.off[k.min(self.off.len())..].to_vec(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SymTridiagonal {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a - b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc: f64 = self.diag.iter().zip(x).map(|(d, xi)| d * xi * xi).sum();
        for (i, e) in self.off.iter().enumerate() {
            acc += 2.0 * e * x[i] * x[i + 1];
        }
        acc
    }

    /// `M x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Smallest Gershgorin lower bound; negative rows signal indefiniteness.
    pub fn gershgorin_lower(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = 0.0;
                if i > 0 {
                    r += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    r += self.off[i].abs();
                }
                self.diag[i] - r
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// A symmetric-definite tridiagonal pencil, diagonally scaled so that the
/// mass matrix has unit diagonal.
#[derive(Debug, Clone)]
pub struct TridiagonalPencil {
    a: SymTridiagonal,
    b: SymTridiagonal,
    scale: Vec<f64>,
}

impl TridiagonalPencil {
    /// Returns `None` when a diagonal entry of `b` is not positive.
    pub fn new(a: &SymTridiagonal, b: &SymTridiagonal) -> Option<Self> {
        if b.diag.iter().any(|&d| !(d > 0.0)) {
            return None;
        }
        let scale: Vec<f64> = b.diag.iter().map(|d| 1.0 / d.sqrt()).collect();
        let congruence = |m: &SymTridiagonal| SymTridiagonal {
            diag: m.diag.iter().zip(&scale).map(|(d, s)| d * s * s).collect(),
            off: m
                .off
                .iter()
                .enumerate()
                .map(|(i, e)| e * scale[i] * scale[i + 1])
                .collect(),
        };
        Some(TridiagonalPencil {
            a: congruence(a),
            b: congruence(b),
            scale,
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.len();
        let mut count = 0;
        let mut d = 0.0;
        for i in 0..n {
            let diag = self.a.diag[i] - sigma * self.b.diag[i];
            d = if i == 0 {
                diag
            } else {
                let e = self.a.off[i - 1] - sigma * self.b.off[i - 1];
                diag - e * e / d
            };
            if d == 0.0 {
                d = -f64::EPSILON * (self.a.diag[i].abs() + sigma.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (`k = 0` is the smallest), bisected
    /// to an interval of width `max(abs_tol, 4ε|λ|)`.
    pub fn eigenvalue(&self, k: usize, abs_tol: f64) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let mut lo = -1.0;
        while self.count_below(lo) > k {
            lo *= 2.0;
            assert!(lo.is_finite(), "no finite lower bracket");
        }
        let mut hi = 1.0;
        while self.count_below(hi) <= k {
            hi *= 2.0;
            assert!(hi.is_finite(), "no finite upper bracket");
        }
        for _ in 0..500 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= abs_tol.max(4.0 * f64::EPSILON * mid.abs()) || mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue approximation `lambda` by inverse
    /// iteration with a shift just below it. Returned in the original
    /// (unscaled) coordinates, normalised to unit maximum norm with a
    /// non-negative first entry.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let shift = lambda - (1e-9 * lambda.abs()).max(1e-13);
        let m = self.a.sub(&SymTridiagonal {
            diag: self.b.diag.iter().map(|x| x * shift).collect(),
            off: self.b.off.iter().map(|x| x * shift).collect(),
        });
        let mut x = vec![1.0; n];
        for _ in 0..8 {
            let rhs = self.b.apply(&x);
            x = solve_tridiagonal(&m, &rhs);
            let norm = x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            if !(norm > 0.0 && norm.is_finite()) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let mut y: Vec<f64> = x.iter().zip(&self.scale).map(|(v, s)| v * s).collect();
        let norm = y.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let sign = if y
            .iter()
            .find(|v| v.abs() > 1e-12 * norm)
            .copied()
            .unwrap_or(1.0)
            < 0.0
        {
            -1.0
        } else {
            1.0
        };
        y.iter_mut().for_each(|v| *v *= sign / norm);
        y
    }
}

/// Thomas algorithm for a symmetric tridiagonal system.
fn solve_tridiagonal(m: &SymTridiagonal, rhs: &[f64]) -> Vec<f64> {
    let n = m.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut denom = m.diag[0];
    if denom.abs() < tiny {
        denom = tiny;
    }
    if n > 1 {
        c[0] = m.off[0] / denom;
    }
    d[0] = rhs[0] / denom;
    for i in 1..n {
        let e = m.off[i - 1];
        denom = m.diag[i] - e * c[i - 1];
        if denom.abs() < tiny {
            denom = tiny;
        }
        if i + 1 < n {
            c[i] = m.off[i] / denom;
        }
        d[i] = (rhs[i] - e * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal {
            diag: vec![2.0; n],
            off: vec![-1.0; n - 1],
        }
    }

    fn identity(n: usize) -> SymTridiagonal {
        SymTridiagonal {
            diag: vec![1.0; n],
            off: vec![0.0; n - 1],
        }
    }

    #[test]
    fn standard_eigenvalues_of_discrete_laplacian() {
        let n = 50;
        let p = TridiagonalPencil::new(&laplacian(n), &identity(n)).unwrap();
        for k in [0, 1, 7, 49] {
            let theta = (k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            let exact = 2.0 - 2.0 * theta.cos();
            assert!((p.eigenvalue(k, 1e-14) - exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn generalized_eigenvalue_and_vector() {
        // A = diag-scaled Laplacian, B = diag(1..n): compare A v = λ B v residual
        let n = 40;
        let a = laplacian(n);
        let b = SymTridiagonal {
            diag: (1..=n).map(|i| i as f64).collect(),
            off: vec![0.1; n - 1],
        };
        let p = TridiagonalPencil::new(&a, &b).unwrap();
        let lam = p.eigenvalue(0, 1e-15);
        let v = p.eigenvector(lam);
        let av = a.apply(&v);
        let bv = b.apply(&v);
        let res = av
            .iter()
            .zip(&bv)
            .map(|(x, y)| (x - lam * y).abs())
            .fold(0.0, f64::max);
        assert!(res < 1e-9, "residual {res}");
        assert!(
            v.iter().all(|x| *x >= -1e-12),
            "principal vector has one sign"
        );
        let rq = a.quadratic_form(&v) / b.quadratic_form(&v);
        assert!((rq - lam).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular_mass() {
        let b = SymTridiagonal {
            diag: vec![1.0, 0.0, 1.0],
            off: vec![0.0, 0.0],
        };
        assert!(TridiagonalPencil::new(&laplacian(3), &b).is_none());
    }

    #[test]
    fn negative_spectrum() {
        let a = SymTridiagonal {
            diag: vec![-5.0, 1.0, 3.0],
            off: vec![0.0, 0.0],
        };
        let p = TridiagonalPencil::new(&a, &identity(3)).unwrap();
        assert_eq!(p.count_below(0.0), 1);
        assert!((p.eigenvalue(0, 1e-14) + 5.0).abs() < 1e-12);
        assert!((p.eigenvalue(2, 1e-14) - 3.0).abs() < 1e-12);
    }
}
