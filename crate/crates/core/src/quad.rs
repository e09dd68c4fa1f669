//! Gauss–Legendre panel quadrature.
//!
//! Nodes and weights are computed at construction time by Newton iteration
//! on the Legendre three-term recurrence (no baked-in tables, any order up
//! to 64). A rule of order `n` integrates polynomials of degree `2n − 1`
//! exactly; for the analytic integrands used here, one order-15 panel of
//! width ≤ 1 is accurate far beyond the 1e−9 table tolerance.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A Gauss–Legendre rule on the reference interval `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build the rule of the given order (number of nodes), `1..=64`.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > 64 {
            return Err(Error::InvalidQuadrature("order must be in 1..=64"));
        }
        let n = order;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess for the i-th root (descending order).
            let mut x = libm::cos(
                core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5),
            );
            let mut dp = 0.0;
            // Newton converges in ≤ 5 steps from this guess; 100 is a
            // safety bound, not a tuning knob.
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) <= 1e-15 {
                    let (p2, d2) = legendre_and_derivative(n, x);
                    dp = d2;
                    x -= p2 / d2; // one final polish
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        // Enforce exact symmetry: average each node with its mirror so the
        // rule is antisymmetric to the bit (odd integrands cancel exactly).
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let mag = 0.5 * (libm::fabs(nodes[i]) + libm::fabs(nodes[j]));
            let sign = if nodes[i] >= 0.0 { 1.0 } else { -1.0 };
            nodes[i] = sign * mag;
            nodes[j] = -sign * mag;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes on `[−1, 1]`, in descending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`nodes`](Self::nodes); they sum to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate a fallible integrand over `[a, b]` (one panel).
    ///
    /// Integrand errors propagate unchanged; `a > b` flips the sign as in
    /// ordinary calculus. `a` and `b` must be finite.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidQuadrature("panel endpoints must be finite"));
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = crate::kahan::NeumaierSum::new();
        for (&x, &w) in self.nodes.iter().zip(self.weights.iter()) {
            acc.add(w * f(mid + half * x)?);
        }
        Ok(half * acc.sum())
    }
}

/// Legendre polynomial `P_n(x)` and its derivative via the recurrence
/// `(k+1)·P_{k+1} = (2k+1)·x·P_k − k·P_{k−1}` and
/// `P'_n = n·(x·P_n − P_{n−1})/(x² − 1)`.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}
