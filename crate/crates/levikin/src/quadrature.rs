//! Gauss-Legendre quadrature rules and grid configuration for the
//! five-dimensional recoil and Doppler integrals.

use crate::error::{Error, Result};

/// Node/weight counts for the tensor-product quadrature over
/// `(ω, θ_i, φ_i, θ_s, φ_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub n_omega: usize,
    pub n_theta_i: usize,
    pub n_phi_i: usize,
    pub n_theta_s: usize,
    pub n_phi_s: usize,
    /// Compare against a half-resolution grid and refuse results that move
    /// by more than 5%.
    pub check_convergence: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_omega: 64,
            n_theta_i: 16,
            n_phi_i: 16,
            n_theta_s: 32,
            n_phi_s: 32,
            check_convergence: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("n_omega", self.n_omega),
            ("n_theta_i", self.n_theta_i),
            ("n_phi_i", self.n_phi_i),
            ("n_theta_s", self.n_theta_s),
            ("n_phi_s", self.n_phi_s),
        ] {
            if n < 2 {
                return Err(Error::InvalidConfig(format!("{name} must be >= 2, got {n}")));
            }
            if n > 4096 {
                return Err(Error::InvalidConfig(format!("{name} too large ({n} > 4096)")));
            }
        }
        Ok(())
    }

    /// Grid with every count halved (floored at 2), used for convergence
    /// estimates.
    pub fn halved(&self) -> Self {
        let h = |n: usize| (n / 2).max(2);
        Self {
            n_omega: h(self.n_omega),
            n_theta_i: h(self.n_theta_i),
            n_phi_i: h(self.n_phi_i),
            n_theta_s: h(self.n_theta_s),
            n_phi_s: h(self.n_phi_s),
            check_convergence: false,
        }
    }

    /// Grid with every count doubled, used by the `--oracle` CLI path.
    pub fn doubled(&self) -> Self {
        Self {
            n_omega: self.n_omega * 2,
            n_theta_i: self.n_theta_i * 2,
            n_phi_i: self.n_phi_i * 2,
            n_theta_s: self.n_theta_s * 2,
            n_phi_s: self.n_phi_s * 2,
            check_convergence: false,
        }
    }
}

/// An n-point Gauss-Legendre rule on `[a, b]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on `[-1, 1]`, by Newton iteration on the Legendre
    /// recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Rule mapped to `[a, b]`.
    pub fn on_interval(n: usize, a: f64, b: f64) -> Self {
        let base = Self::new(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Self {
            nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: base.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise (cascade) summation: deterministic and independent of how work
/// was partitioned across threads, with O(log n) rounding growth.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
