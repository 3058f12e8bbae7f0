//! Rayleigh scattering of trapping light off the levitated sphere.
//!
//! The recoil of scattered photons heats the particle's center-of-mass
//! motion anisotropically: the incident beam direction and the dipole
//! radiation pattern of the scattered field weight the three trap axes
//! differently. This module carries the scattering geometry, the per-axis
//! photon damping rate, the recoil-heating rate (closed form and full 5-D
//! quadrature), the Doppler damping force and the photon-bath equilibrium
//! temperature.
//!
//! # Kernel convention
//!
//! The emission band of the thermal source is narrow compared to its center
//! (`k_BT ≪ ħω_c`). All spectral integrals here follow the narrow-band
//! convention: amplitude factors — the scattering cross section, the photon
//! momentum `ħk`, and the mode-degeneracy factor — are evaluated at the band
//! edge `ω_c`, while the occupation statistics (`n̄`, `Δn²`, gain profile)
//! keep their full frequency dependence. Under this convention the closed
//! forms used throughout (`γ_ph^q`, the recoil prefactor, the linearized
//! Doppler force, `T_ph = T/2`) are exact consequences of the integrals for
//! a flat gain profile, which makes the quadrature and closed-form routes
//! directly comparable at every temperature.

mod doppler;
mod geometry;
mod recoil;

pub use doppler::{
    doppler_damping_coefficient, doppler_force, equilibrium_temperature,
    equilibrium_temperature_balance,
};
pub use geometry::{dipole_pattern, lambda_coefficients};
pub use recoil::{photon_damping, recoil_heating_closed_form, recoil_heating_quadrature};

use crate::axis::PerAxis;
use crate::constants::C;
use crate::error::{Error, Result};

/// Geometry and material of the levitated sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    /// Sphere radius, m.
    pub radius: f64,
    /// Material density, kg/m³.
    pub density: f64,
    /// Refractive index at the trapping wavelength.
    pub refractive_index: f64,
}

/// Fused-silica density, kg/m³ (default material).
pub const SILICA_DENSITY: f64 = 2200.0;
/// Fused-silica refractive index near 1 µm (default material).
pub const SILICA_REFRACTIVE_INDEX: f64 = 1.45;

impl ParticleSpec {
    pub fn new(radius: f64, density: f64, refractive_index: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidConfig("particle radius must be > 0".into()));
        }
        if !(density > 0.0) {
            return Err(Error::InvalidConfig("particle density must be > 0".into()));
        }
        if !(refractive_index > 1.0) {
            return Err(Error::InvalidConfig("refractive index must be > 1".into()));
        }
        Ok(Self { radius, density, refractive_index })
    }

    /// Fused-silica sphere of the given radius.
    pub fn silica(radius: f64) -> Result<Self> {
        Self::new(radius, SILICA_DENSITY, SILICA_REFRACTIVE_INDEX)
    }

    /// Sphere mass `(4/3)πr³ρ`, kg.
    pub fn mass(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3) * self.density
    }

    /// Polarizability volume `α' = r³ (n²−1)/(n²+2)`, m³.
    pub fn polarizability_volume(&self) -> f64 {
        let n2 = self.refractive_index * self.refractive_index;
        self.radius.powi(3) * (n2 - 1.0) / (n2 + 2.0)
    }

    /// Whether the sphere is small enough for the Rayleigh picture at the
    /// given vacuum wavelength (`r < λ/2π`). Advisory only.
    pub fn rayleigh_valid(&self, wavelength: f64) -> bool {
        self.radius < wavelength / (2.0 * std::f64::consts::PI)
    }
}

/// Rayleigh scattering cross section `σ_s = (8π/3) k⁴ α'²` at angular
/// frequency `omega` (`k = ω/c`), m². Scales as `ω⁴` and `r⁶`.
pub fn cross_section(omega: f64, p: &ParticleSpec) -> f64 {
    let k = omega / C;
    let alpha = p.polarizability_volume();
    8.0 * std::f64::consts::PI / 3.0 * k.powi(4) * alpha * alpha
}

/// Trap frequencies and illumination geometry.
///
/// The polarization axis is fixed to `x` by convention; `theta_mx` is the
/// half-angle of the incidence cone of the focused trapping beam around the
/// propagation axis `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    /// Angular trap frequency per axis, rad/s.
    pub omega: PerAxis<f64>,
    /// Incidence-cone half-angle, rad.
    pub theta_mx: f64,
    /// Numerical aperture of the focusing lens. Metadata only; the cone
    /// half-angle is what enters the physics.
    pub numerical_aperture: f64,
}

/// Default incidence-cone half-angle, rad.
pub const DEFAULT_THETA_MX: f64 = 0.43;

impl TrapConfig {
    pub fn new(omega: PerAxis<f64>, theta_mx: f64, numerical_aperture: f64) -> Result<Self> {
        if omega.to_array().iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidConfig("all trap frequencies must be > 0".into()));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_mx) {
            return Err(Error::InvalidConfig(format!(
                "cone half-angle must be in [0, pi/2), got {theta_mx}"
            )));
        }
        Ok(Self { omega, theta_mx, numerical_aperture })
    }

    /// Largest trap frequency, rad/s.
    pub fn max_omega(&self) -> f64 {
        self.omega.to_array().into_iter().fold(0.0, f64::max)
    }
}

/// How a set of heating rates was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    ClosedForm,
    Quadrature,
}

impl RateMethod {
    pub fn label(self) -> &'static str {
        match self {
            RateMethod::ClosedForm => "closed_form",
            RateMethod::Quadrature => "quadrature",
        }
    }
}

/// Axis-resolved photon recoil rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatingRates {
    /// Photon damping rate γ_ph per axis, 1/s.
    pub gamma_ph: PerAxis<f64>,
    /// Center-of-mass heating rate per axis, K/s (energy rate over k_B).
    pub dtdt: PerAxis<f64>,
    /// Heating rates normalized to the x axis.
    pub ratios: PerAxis<f64>,
    pub method: RateMethod,
}

impl HeatingRates {
    pub(crate) fn from_rates(
        gamma_ph: PerAxis<f64>,
        dtdt: PerAxis<f64>,
        method: RateMethod,
    ) -> Self {
        let ratios = dtdt.map(|r| r / dtdt.x);
        Self { gamma_ph, dtdt, ratios, method }
    }
}
