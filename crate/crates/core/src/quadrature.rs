//! Composite Gauss–Legendre quadrature.

const GAUSS4_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GAUSS4_W: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_8,
];

/// Four-point Gauss points and weights mapped to `[a, b]`.
pub fn gauss4(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GAUSS4_X
        .iter()
        .zip(GAUSS4_W.iter())
        .map(move |(x, w)| (mid + half * x, half * w))
}

/// Visits the Gauss points of `[a, b]`, split at every breakpoint lying
/// strictly inside. `breaks` must be sorted.
pub fn for_each_point(a: f64, b: f64, breaks: &[f64], mut visit: impl FnMut(f64, f64)) {
    let start = breaks.partition_point(|&x| x <= a);
    let mut left = a;
    for &x in breaks[start..].iter().take_while(|&&x| x < b) {
        for (r, w) in gauss4(left, x) {
            visit(r, w);
        }
        left = x;
    }
    for (r, w) in gauss4(left, b) {
        visit(r, w);
    }
}

/// `∫_a^b g` by composite four-point Gauss, split at `breaks`.
pub fn integrate(a: f64, b: f64, breaks: &[f64], mut g: impl FnMut(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for_each_point(a, b, breaks, |r, w| acc += w * g(r));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = integrate(1.0, 3.0, &[], |x| x * x * x - 2.0 * x);
        assert!((v - (20.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn splits_at_breakpoints() {
        // |x − 2| is a polynomial on each side of the break
        let v = integrate(0.5, 3.0, &[0.1, 2.0, 7.0], |x| (x - 2.0).abs());
        assert!((v - (1.125 + 0.5)).abs() < 1e-14);
        let mut count = 0;
        for_each_point(0.5, 3.0, &[0.1, 1.0, 2.0, 7.0], |_, _| count += 1);
        assert_eq!(count, 12);
    }
}
