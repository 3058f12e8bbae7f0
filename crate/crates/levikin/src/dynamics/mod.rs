//! Three-axis Langevin dynamics of the trapped sphere.
//!
//! Each axis obeys
//! `M q̈ + M(γ_g + γ_ph^q + γ_fb) q̇ + M ω_q² q = f(t)`
//! with zero-mean Gaussian force noise of variance density
//! `2 M k_B (γ_g T_g + γ_ph^q T_ph^q)`. The gas bath sits at the chamber
//! temperature, the photon bath at half the source's bulk temperature, and
//! the feedback contributes damping at zero temperature. Axes are
//! uncoupled and evolve as independent stochastic harmonic oscillators.

mod ensemble;
mod integrator;
pub mod trace;

pub use ensemble::{
    cm_temperature, record_single_axis, reheat_protocol, relaxation_run, simulate, ReheatResult,
    RelaxationResult, Trajectory, TrajectoryEnsemble,
};
pub use integrator::AxisPropagator;

use crate::axis::{Axis, PerAxis};
use crate::constants::{HBAR, KB};
use crate::environment::{gas_damping, GasState};
use crate::error::{Error, Result};
use crate::photonics::{LightSourceSpec, SourceKind};
use crate::scattering::{doppler_damping_coefficient, ParticleSpec, TrapConfig};

/// How the ensemble is initialized at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Exact Gaussian steady state of the full bath including feedback.
    ///
    /// Statistically identical to running a long burn-in under feedback
    /// (the dynamics are linear), without paying for the burn-in steps.
    FeedbackSteadyState,
    /// Thermal state at the given per-axis temperatures.
    AtTemperature(PerAxis<f64>),
    /// Pinned at the origin with zero velocity.
    AtRest,
}

/// Full configuration of an ensemble run.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub particle: ParticleSpec,
    pub source: LightSourceSpec,
    pub trap: TrapConfig,
    pub gas: GasState,
    /// Feedback damping rate per axis, 1/s.
    pub feedback_damping: PerAxis<f64>,
    /// Integration step, s.
    pub dt: f64,
    /// Length of a `simulate` run, s.
    pub duration: f64,
    pub seed: u64,
    pub n_trajectories: usize,
    /// Declared acceleration factor on the photon damping/noise pair, used
    /// to bring hour-long relaxation times to desk scale while preserving
    /// the fluctuation-dissipation structure. 1.0 means physical rates.
    pub photon_damping_inflation: f64,
    pub initial_state: InitialState,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let dt_max = 2.0 * std::f64::consts::PI / (50.0 * self.trap.max_omega());
        if !(self.dt > 0.0) || self.dt > dt_max {
            return Err(Error::Stability(format!(
                "dt = {:.3e} s exceeds 2pi/(50 max omega) = {:.3e} s",
                self.dt, dt_max
            )));
        }
        if !(self.duration > 0.0) {
            return Err(Error::InvalidConfig("duration must be > 0".into()));
        }
        if self.n_trajectories < 1 {
            return Err(Error::InvalidConfig("need at least one trajectory".into()));
        }
        if !(self.photon_damping_inflation > 0.0) {
            return Err(Error::InvalidConfig("photon damping inflation must be > 0".into()));
        }
        Ok(())
    }

    /// Bath felt by the particle, optionally without the feedback term
    /// (feedback is off during release windows).
    pub fn bath(&self, feedback_on: bool) -> Result<BathSpec> {
        BathSpec::derive(self, feedback_on)
    }
}

/// Per-axis damping/noise pair entering the Langevin equation.
#[derive(Debug, Clone, Copy)]
pub struct BathSpec {
    /// Total damping γ_q per axis, 1/s.
    pub gamma_total: PerAxis<f64>,
    /// Gas damping, 1/s.
    pub gamma_gas: f64,
    /// Photon damping per axis (linearized Doppler coefficient), 1/s.
    pub gamma_photon: PerAxis<f64>,
    /// Photon bath temperature, K.
    pub photon_temperature: f64,
    /// Gas temperature, K.
    pub gas_temperature: f64,
}

impl BathSpec {
    fn derive(cfg: &SimulationConfig, feedback_on: bool) -> Result<Self> {
        let gamma_gas = gas_damping(&cfg.particle, &cfg.gas);
        let gamma_photon = PerAxis::from_fn(|axis| {
            doppler_damping_coefficient(axis, &cfg.particle, &cfg.source, &cfg.trap)
                .map(|g| g * cfg.photon_damping_inflation)
        });
        // surface the first error, if any
        let gamma_photon = PerAxis::new(gamma_photon.x?, gamma_photon.y?, gamma_photon.z?);
        let photon_temperature = match cfg.source.kind() {
            SourceKind::Thermal => cfg.source.bulk_temperature()? / 2.0,
            // recoil-limited effective bath of a coherent source: one photon
            // momentum per event, FD-paired with the recoil damping scale
            SourceKind::Laser => HBAR * cfg.source.laser_frequency()? / (2.0 * KB),
        };
        let fb = if feedback_on { cfg.feedback_damping } else { PerAxis::new(0.0, 0.0, 0.0) };
        let gamma_total = PerAxis::from_fn(|axis| gamma_gas + gamma_photon[axis] + fb[axis]);
        Ok(Self {
            gamma_total,
            gamma_gas,
            gamma_photon,
            photon_temperature,
            gas_temperature: cfg.gas.temperature,
        })
    }

    /// Effective bath temperature per axis,
    /// `(γ_g T_g + γ_ph T_ph)/γ_q` (feedback counts as damping at zero
    /// temperature). This is also the steady-state center-of-mass
    /// temperature.
    pub fn effective_temperature(&self, axis: Axis) -> f64 {
        let num = self.gamma_gas * self.gas_temperature
            + self.gamma_photon[axis] * self.photon_temperature;
        if num == 0.0 {
            return 0.0;
        }
        num / self.gamma_total[axis]
    }

    /// Heating slope at a cold start, K/s: `γ_g T_g + γ_ph T_ph`.
    pub fn cold_heating_rate(&self, axis: Axis) -> f64 {
        self.gamma_gas * self.gas_temperature
            + self.gamma_photon[axis] * self.photon_temperature
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photonics::{GainProfile, DEFAULT_WAIST_AREA};

    pub(crate) fn reference_config() -> SimulationConfig {
        SimulationConfig {
            particle: ParticleSpec::silica(55e-9).unwrap(),
            source: LightSourceSpec::thermal(
                1115e-9,
                1090e-9,
                300.0,
                GainProfile::Constant,
                0.13,
                DEFAULT_WAIST_AREA,
            )
            .unwrap(),
            trap: TrapConfig::new(
                PerAxis::new(
                    2.0 * std::f64::consts::PI * 125e3,
                    2.0 * std::f64::consts::PI * 145e3,
                    2.0 * std::f64::consts::PI * 40e3,
                ),
                0.43,
                0.77,
            )
            .unwrap(),
            gas: GasState::nitrogen_mbar(4e-7).unwrap(),
            feedback_damping: PerAxis::new(3.46, 12.09, 13.18),
            dt: 1e-7,
            duration: 0.01,
            seed: 7,
            n_trajectories: 4,
            photon_damping_inflation: 1.0,
            initial_state: InitialState::FeedbackSteadyState,
        }
    }

    #[test]
    fn rejects_oversized_time_step() {
        let mut cfg = reference_config();
        cfg.dt = 1e-5;
        assert!(matches!(cfg.validate(), Err(Error::Stability(_))));
    }

    #[test]
    fn bath_combines_gas_photon_and_feedback() {
        let cfg = reference_config();
        let with_fb = cfg.bath(true).unwrap();
        let without_fb = cfg.bath(false).unwrap();
        for axis in Axis::ALL {
            assert!(with_fb.gamma_total[axis] > without_fb.gamma_total[axis]);
            assert_eq!(
                without_fb.gamma_total[axis],
                without_fb.gamma_gas + without_fb.gamma_photon[axis]
            );
        }
        assert_eq!(with_fb.photon_temperature, 150.0);
    }

    #[test]
    fn steady_state_is_sub_kelvin_under_feedback() {
        let cfg = reference_config();
        let bath = cfg.bath(true).unwrap();
        for axis in Axis::ALL {
            let t = bath.effective_temperature(axis);
            assert!(t < 1.0, "axis {axis}: {t} K");
            assert!(t > 0.0);
        }
    }
}
