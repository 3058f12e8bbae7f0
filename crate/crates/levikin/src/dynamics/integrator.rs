//! Exact one-step propagator for the damped, thermally driven harmonic
//! oscillator.
//!
//! The per-axis Langevin equation is linear, so the transition over a step
//! `h` is Gaussian with a known mean map `Φ(h)` and covariance `Q(h)`. The
//! propagator applies both exactly: temperatures carry no step-size bias,
//! and with zero damping it reduces to the exact rotation of phase space.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Exact transition kernel of one axis for a fixed step.
#[derive(Debug, Clone, Copy)]
pub struct AxisPropagator {
    phi: [[f64; 2]; 2],
    chol: [[f64; 2]; 2],
    /// Stationary position/velocity standard deviations for state sampling.
    sigma_q: f64,
    sigma_v: f64,
}

impl AxisPropagator {
    /// Build the kernel for angular frequency `omega`, total damping
    /// `gamma`, bath temperature `temperature` (the effective bath of all
    /// damping channels), particle mass `mass` and step `dt`.
    pub fn new(omega: f64, gamma: f64, temperature: f64, mass: f64, dt: f64) -> Result<Self> {
        if !(omega > 0.0) || !(dt > 0.0) || gamma < 0.0 || temperature < 0.0 {
            return Err(Error::InvalidConfig("propagator needs omega, dt > 0 and gamma, T >= 0".into()));
        }
        if gamma >= omega {
            return Err(Error::InvalidConfig(format!(
                "damping {gamma} /s not well below the trap frequency {omega} rad/s; \
                 the underdamped propagator does not apply"
            )));
        }
        let lambda = 0.5 * gamma;
        let omega_d = (omega * omega - lambda * lambda).sqrt();
        let (s, c) = (omega_d * dt).sin_cos();
        let decay = (-lambda * dt).exp();
        let phi = [
            [decay * (c + lambda * s / omega_d), decay * s / omega_d],
            [-decay * omega * omega * s / omega_d, decay * (c - lambda * s / omega_d)],
        ];

        let kt_over_m = crate::constants::KB * temperature / mass;
        let sigma_q2 = kt_over_m / (omega * omega);
        let sigma_v2 = kt_over_m;

        // transition covariance from the stationary covariance:
        // Q = S - Phi S Phi^T with S = diag(sigma_q^2, sigma_v^2)
        let chol = if gamma == 0.0 || temperature == 0.0 {
            [[0.0; 2]; 2]
        } else {
            let q11 = sigma_q2 - (phi[0][0] * phi[0][0] * sigma_q2 + phi[0][1] * phi[0][1] * sigma_v2);
            let q12 = -(phi[0][0] * phi[1][0] * sigma_q2 + phi[0][1] * phi[1][1] * sigma_v2);
            let q22 = sigma_v2 - (phi[1][0] * phi[1][0] * sigma_q2 + phi[1][1] * phi[1][1] * sigma_v2);
            let l11 = q11.max(0.0).sqrt();
            let l21 = if l11 > 0.0 { q12 / l11 } else { 0.0 };
            let l22 = (q22 - l21 * l21).max(0.0).sqrt();
            [[l11, 0.0], [l21, l22]]
        };

        Ok(Self { phi, chol, sigma_q: sigma_q2.sqrt(), sigma_v: sigma_v2.sqrt() })
    }

    /// Advance `(q, v)` by one step.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, q: &mut f64, v: &mut f64, rng: &mut R) {
        let q0 = *q;
        let v0 = *v;
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        *q = self.phi[0][0] * q0 + self.phi[0][1] * v0 + self.chol[0][0] * n1;
        *v = self.phi[1][0] * q0 + self.phi[1][1] * v0 + self.chol[1][0] * n1 + self.chol[1][1] * n2;
    }

    /// Sample a thermal phase-space point at temperature `t_init`, given in
    /// units of this axis's stationary temperature... (q, v) at an arbitrary
    /// temperature is sampled directly from its Gaussian.
    #[inline]
    pub fn sample_thermal_state<R: Rng + ?Sized>(
        omega: f64,
        mass: f64,
        temperature: f64,
        rng: &mut R,
    ) -> (f64, f64) {
        let kt_over_m = crate::constants::KB * temperature / mass;
        let sq = (kt_over_m).sqrt() / omega;
        let sv = kt_over_m.sqrt();
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        (sq * n1, sv * n2)
    }

    pub fn stationary_sigma_q(&self) -> f64 {
        self.sigma_q
    }

    pub fn stationary_sigma_v(&self) -> f64 {
        self.sigma_v
    }
}
