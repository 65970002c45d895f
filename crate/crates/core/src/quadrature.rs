//! Gauss–Legendre quadrature on a finite interval.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of a `Q`-point Gauss–Legendre rule mapped to `[a, b]`.
///
/// The rule integrates polynomials of degree `≤ 2Q − 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    a: f64,
    b: f64,
}

/// Builds the `order`-point Gauss–Legendre rule on `[a, b]`.
///
/// Nodes are found by Newton iteration on the three-term recurrence, starting
/// from Tricomi's asymptotic guesses, so large orders stay accurate.
///
/// ```
/// use hilbert_trunc::quadrature::gauss_legendre;
///
/// let rule = gauss_legendre(8, 0.0, 1.0).unwrap();
/// let mean = rule.integrate(|x| x);
/// assert!((mean - 0.5).abs() < 1e-14);
/// ```
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be positive".into(),
        ));
    }
    if a >= b || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "degenerate interval [{a}, {b}]"
        )));
    }

    let n = order;
    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let k = (i + 1) as f64;
        let nf = n as f64;
        // Tricomi initial guess, descending from +1.
        let theta = PI * (k - 0.25) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_and_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ref_nodes[i] = x;
        ref_nodes[n - 1 - i] = -x;
        ref_weights[i] = w;
        ref_weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        ref_nodes[n / 2] = 0.0;
    }

    let mid = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    // Ascending order in x.
    let nodes = ref_nodes.iter().rev().map(|t| mid + half_len * t).collect();
    let weights = ref_weights.iter().rev().map(|w| half_len * w).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        a,
        b,
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.order() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(gauss_legendre(4, 2.0, 1.0).is_err());
    }

    #[test]
    fn weights_sum_to_length() {
        for &q in &[1usize, 2, 7, 64, 257, 1000] {
            let r = gauss_legendre(q, 1.0, 2.5).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 1.5).abs() <= 1e-13 * 1.5, "q={q}: {s}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn linear_integrand() {
        let r = gauss_legendre(8, 0.0, 1.0).unwrap();
        assert!((r.integrate(|x| x) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cosine_squared_against_antiderivative() {
        // ∫_0^1 cos²(πx/2) dx = [x/2 + sin(πx)/(2π)]_0^1 = 1/2
        let antiderivative = |x: f64| x / 2.0 + (PI * x).sin() / (2.0 * PI);
        let expected = antiderivative(1.0) - antiderivative(0.0);
        let r = gauss_legendre(32, 0.0, 1.0).unwrap();
        let got = r.integrate(|x| (PI * x / 2.0).cos().powi(2));
        assert!((got - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn monomials_exact_up_to_degree() {
        let q = 12;
        let r = gauss_legendre(q, 0.5, 2.0).unwrap();
        for p in 0..=(2 * q - 1) as i32 {
            let exact = (2.0f64.powi(p + 1) - 0.5f64.powi(p + 1)) / (p + 1) as f64;
            let got = r.integrate(|x| x.powi(p));
            assert!(
                (got - exact).abs() <= 1e-12 * exact.abs(),
                "degree {p}: {got} vs {exact}"
            );
        }
    }
}
