//! Gauss-Legendre panels plus a plain trapezoid rule.
//!
//! Nodes and weights are generated at construction by Newton iteration on the
//! Legendre three-term recurrence. That keeps the crate table-free and lets
//! callers pick the order; anything from 16 to a few hundred converges in a
//! handful of iterations from the Chebyshev guess.

use alloc::vec::Vec;

/// A Gauss-Legendre rule of fixed order, reusable across panels.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    /// Nodes on the reference interval [-1, 1], ascending.
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre P_n and its derivative at `x`, by upward recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    // Derivative identity, valid away from x = +-1; all roots are interior.
    let deriv = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

impl GaussLegendre {
    /// Build a rule with `order` nodes. Panics if `order` is zero.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let mut nodes = alloc::vec![0.0; order];
        let mut weights = alloc::vec![0.0; order];
        let n = order as f64;
        // Solve for the roots in the positive half and mirror, so the rule is
        // exactly symmetric and odd integrands cancel pairwise.
        for i in 0..(order + 1) / 2 {
            let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5));
            if 2 * i + 1 == order {
                x = 0.0;
            }
            let mut dp = 0.0;
            for _ in 0..60 {
                let (p, d) = legendre_pair(order, x);
                dp = d;
                let step = p / d;
                x -= step;
                if libm::fabs(step) < 1e-15 {
                    let (p, d) = legendre_pair(order, x);
                    dp = d;
                    x -= p / d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // The guess above lands on the descending sequence of positive
            // roots; store ascending.
            nodes[order - 1 - i] = x;
            weights[order - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over a single panel [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrate over consecutive panels `[breaks[0], breaks[1]], ...`.
    ///
    /// `breaks` must be ascending; zero-width panels contribute nothing.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        let mut acc = 0.0;
        for pair in breaks.windows(2) {
            debug_assert!(pair[0] <= pair[1], "panel breaks must ascend");
            if pair[1] > pair[0] {
                acc += self.integrate(pair[0], pair[1], &mut f);
            }
        }
        acc
    }
}

/// Composite trapezoid rule with `points` equally spaced samples.
///
/// Deliberately a different family from Gauss panels: the two are compared
/// against each other as independent checks. On smooth integrands that vanish
/// to high order at both endpoints (our bump kernels) it is superconvergent.
pub fn trapezoid<F: FnMut(f64) -> f64>(a: f64, b: f64, points: usize, mut f: F) -> f64 {
    assert!(points >= 2, "trapezoid needs at least two samples");
    let n = points - 1;
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..n {
        acc += f(a + h * i as f64);
    }
    acc * h
}
