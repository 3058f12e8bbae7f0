//! Scenario configuration: the JSON schema of a run and its conversion to
//! domain objects.
//!
//! Unit conventions are embedded in the key names (`_nm`, `_mbar`, `_mW`,
//! `_kHz`...). Unknown keys are rejected so typos fail loudly, with the
//! path of the offending key in the error.

// struct fields mirror the JSON keys, units and all
#![allow(non_snake_case)]

use serde::Deserialize;

use levikin::dynamics::{InitialState, SimulationConfig};
use levikin::environment::{molecular_mass_from_amu, GasState, DEFAULT_DRAG_SCALE, N2_MOLECULAR_MASS};
use levikin::photonics::{GainProfile, LightSourceSpec, DEFAULT_WAIST_AREA};
use levikin::quadrature::QuadratureSpec;
use levikin::scattering::{ParticleSpec, TrapConfig, DEFAULT_THETA_MX, SILICA_DENSITY, SILICA_REFRACTIVE_INDEX};
use levikin::PerAxis;

/// Error carrying the JSON path of the offending key or value.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub particle: ParticleSection,
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub trap: TrapSection,
    #[serde(default)]
    pub gas: GasSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSection {
    pub radius_nm: f64,
    #[serde(default = "default_density")]
    pub density_kg_m3: f64,
    #[serde(default = "default_refractive_index")]
    pub refractive_index: f64,
}

fn default_density() -> f64 {
    SILICA_DENSITY
}

fn default_refractive_index() -> f64 {
    SILICA_REFRACTIVE_INDEX
}

impl Default for ParticleSection {
    fn default() -> Self {
        Self {
            radius_nm: 55.0,
            density_kg_m3: SILICA_DENSITY,
            refractive_index: SILICA_REFRACTIVE_INDEX,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum SourceSection {
    Thermal {
        #[serde(default = "default_mu_nm")]
        wavelength_mu_nm: f64,
        #[serde(default = "default_cutoff_nm")]
        wavelength_cutoff_nm: f64,
        #[serde(default = "default_bulk_temp")]
        bulk_temp_K: f64,
        #[serde(default)]
        gain: GainSection,
        #[serde(default = "default_power_mw")]
        power_mW: f64,
        #[serde(default = "default_waist_um2")]
        waist_um2: f64,
    },
    Laser {
        #[serde(default = "default_laser_nm")]
        wavelength_nm: f64,
        power_mW: f64,
        #[serde(default = "default_waist_um2")]
        waist_um2: f64,
    },
}

fn default_mu_nm() -> f64 {
    1115.0
}
fn default_cutoff_nm() -> f64 {
    1090.0
}
fn default_bulk_temp() -> f64 {
    300.0
}
fn default_power_mw() -> f64 {
    130.0
}
fn default_waist_um2() -> f64 {
    DEFAULT_WAIST_AREA * 1e12
}
fn default_laser_nm() -> f64 {
    1064.0
}

impl Default for SourceSection {
    fn default() -> Self {
        SourceSection::Thermal {
            wavelength_mu_nm: default_mu_nm(),
            wavelength_cutoff_nm: default_cutoff_nm(),
            bulk_temp_K: default_bulk_temp(),
            gain: GainSection::default(),
            power_mW: default_power_mw(),
            waist_um2: default_waist_um2(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "type")]
pub enum GainSection {
    Constant,
    Gaussian {
        #[serde(default = "default_gain_center")]
        center_nm: f64,
        #[serde(default = "default_gain_fwhm")]
        fwhm_nm: f64,
    },
}

fn default_gain_center() -> f64 {
    1060.0
}
fn default_gain_fwhm() -> f64 {
    30.0
}

impl Default for GainSection {
    fn default() -> Self {
        GainSection::Gaussian {
            center_nm: default_gain_center(),
            fwhm_nm: default_gain_fwhm(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    #[serde(default = "default_fx")]
    pub freq_x_kHz: f64,
    #[serde(default = "default_fy")]
    pub freq_y_kHz: f64,
    #[serde(default = "default_fz")]
    pub freq_z_kHz: f64,
    #[serde(default = "default_theta_mx")]
    pub theta_mx_rad: f64,
    #[serde(default = "default_na")]
    pub numerical_aperture: f64,
}

fn default_fx() -> f64 {
    125.0
}
fn default_fy() -> f64 {
    145.0
}
fn default_fz() -> f64 {
    40.0
}
fn default_theta_mx() -> f64 {
    DEFAULT_THETA_MX
}
fn default_na() -> f64 {
    0.77
}

impl Default for TrapSection {
    fn default() -> Self {
        Self {
            freq_x_kHz: default_fx(),
            freq_y_kHz: default_fy(),
            freq_z_kHz: default_fz(),
            theta_mx_rad: default_theta_mx(),
            numerical_aperture: default_na(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    #[serde(default = "default_pressure_mbar")]
    pub pressure_mbar: f64,
    #[serde(default = "default_bulk_temp")]
    pub gas_temp_K: f64,
    /// Named species ("N2") or see `molar_mass_amu`.
    #[serde(default = "default_gas_name")]
    pub gas: String,
    /// Overrides the named species when set.
    #[serde(default)]
    pub molar_mass_amu: Option<f64>,
    #[serde(default = "default_drag_scale")]
    pub drag_scale: f64,
}

fn default_pressure_mbar() -> f64 {
    4e-7
}
fn default_gas_name() -> String {
    "N2".to_owned()
}
fn default_drag_scale() -> f64 {
    DEFAULT_DRAG_SCALE
}

impl Default for GasSection {
    fn default() -> Self {
        Self {
            pressure_mbar: default_pressure_mbar(),
            gas_temp_K: default_bulk_temp(),
            gas: default_gas_name(),
            molar_mass_amu: None,
            drag_scale: default_drag_scale(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerAxisSection {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(default = "default_dt")]
    pub dt_s: f64,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_n_trajectories")]
    pub n_trajectories: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub feedback_per_s: Option<PerAxisSection>,
    #[serde(default = "default_window")]
    pub window_s: f64,
    #[serde(default = "default_n_repeats")]
    pub n_repeats: usize,
    #[serde(default = "default_n_bins")]
    pub n_bins: usize,
    /// Per-axis initial center-of-mass temperatures; omitted means the
    /// feedback-cooled steady state.
    #[serde(default)]
    pub initial_temps_mK: Option<PerAxisSection>,
    #[serde(default = "default_inflation")]
    pub photon_damping_inflation: f64,
}

fn default_dt() -> f64 {
    1e-7
}
fn default_duration() -> f64 {
    0.15
}
fn default_n_trajectories() -> usize {
    600
}
fn default_seed() -> u64 {
    1
}
fn default_window() -> f64 {
    0.15
}
fn default_n_repeats() -> usize {
    600
}
fn default_n_bins() -> usize {
    30
}
fn default_inflation() -> f64 {
    1.0
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            dt_s: default_dt(),
            duration_s: default_duration(),
            n_trajectories: default_n_trajectories(),
            seed: default_seed(),
            feedback_per_s: None,
            window_s: default_window(),
            n_repeats: default_n_repeats(),
            n_bins: default_n_bins(),
            initial_temps_mK: None,
            photon_damping_inflation: default_inflation(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(default = "default_n_omega")]
    pub n_omega: usize,
    #[serde(default = "default_n_theta_i")]
    pub n_theta_i: usize,
    #[serde(default = "default_n_theta_i")]
    pub n_phi_i: usize,
    #[serde(default = "default_n_theta_s")]
    pub n_theta_s: usize,
    #[serde(default = "default_n_theta_s")]
    pub n_phi_s: usize,
}

fn default_n_omega() -> usize {
    64
}
fn default_n_theta_i() -> usize {
    16
}
fn default_n_theta_s() -> usize {
    32
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self {
            n_omega: default_n_omega(),
            n_theta_i: default_n_theta_i(),
            n_phi_i: default_n_theta_i(),
            n_theta_s: default_n_theta_s(),
            n_phi_s: default_n_theta_s(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_sweep_pressures")]
    pub pressures_mbar: Vec<f64>,
    #[serde(default = "default_sweep_repeats")]
    pub n_repeats: usize,
    #[serde(default = "default_sweep_window")]
    pub window_s: f64,
    #[serde(default = "default_group_yz")]
    pub group_yz: bool,
}

fn default_sweep_pressures() -> Vec<f64> {
    vec![5e-8, 1.6e-7, 5e-7, 1.6e-6, 5e-6, 1.6e-5]
}
fn default_sweep_repeats() -> usize {
    150
}
fn default_sweep_window() -> f64 {
    0.12
}
fn default_group_yz() -> bool {
    true
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            pressures_mbar: default_sweep_pressures(),
            n_repeats: default_sweep_repeats(),
            window_s: default_sweep_window(),
            group_yz: default_group_yz(),
        }
    }
}

impl Scenario {
    /// Parse and validate a scenario file; errors carry the JSON path of
    /// the offending key.
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            ConfigError(format!("config error at `{}`: {}", e.path(), e.inner()))
        })
    }

    pub fn particle(&self) -> Result<ParticleSpec, ConfigError> {
        ParticleSpec::new(
            self.particle.radius_nm * 1e-9,
            self.particle.density_kg_m3,
            self.particle.refractive_index,
        )
        .map_err(|e| ConfigError(format!("config error at `particle`: {e}")))
    }

    pub fn source(&self) -> Result<LightSourceSpec, ConfigError> {
        let build = match &self.source {
            SourceSection::Thermal {
                wavelength_mu_nm,
                wavelength_cutoff_nm,
                bulk_temp_K,
                gain,
                power_mW,
                waist_um2,
            } => LightSourceSpec::thermal(
                wavelength_mu_nm * 1e-9,
                wavelength_cutoff_nm * 1e-9,
                *bulk_temp_K,
                match gain {
                    GainSection::Constant => GainProfile::Constant,
                    GainSection::Gaussian { center_nm, fwhm_nm } => {
                        GainProfile::gaussian_from_wavelength(center_nm * 1e-9, fwhm_nm * 1e-9)
                    }
                },
                power_mW * 1e-3,
                waist_um2 * 1e-12,
            ),
            SourceSection::Laser { wavelength_nm, power_mW, waist_um2 } => {
                LightSourceSpec::laser(wavelength_nm * 1e-9, power_mW * 1e-3, waist_um2 * 1e-12)
            }
        };
        build.map_err(|e| ConfigError(format!("config error at `source`: {e}")))
    }

    pub fn trap(&self) -> Result<TrapConfig, ConfigError> {
        let two_pi = 2.0 * std::f64::consts::PI;
        TrapConfig::new(
            PerAxis::new(
                self.trap.freq_x_kHz * 1e3 * two_pi,
                self.trap.freq_y_kHz * 1e3 * two_pi,
                self.trap.freq_z_kHz * 1e3 * two_pi,
            ),
            self.trap.theta_mx_rad,
            self.trap.numerical_aperture,
        )
        .map_err(|e| ConfigError(format!("config error at `trap`: {e}")))
    }

    pub fn gas(&self) -> Result<GasState, ConfigError> {
        self.gas_at(self.gas.pressure_mbar * 100.0)
    }

    pub fn gas_at(&self, pressure_pa: f64) -> Result<GasState, ConfigError> {
        let mass = match self.gas.molar_mass_amu {
            Some(amu) => molecular_mass_from_amu(amu),
            None => match self.gas.gas.as_str() {
                "N2" => N2_MOLECULAR_MASS,
                other => {
                    return Err(ConfigError(format!(
                        "config error at `gas.gas`: unknown species {other:?}; \
                         set `molar_mass_amu` instead"
                    )))
                }
            },
        };
        GasState::new(pressure_pa, self.gas.gas_temp_K, mass, self.gas.drag_scale)
            .map_err(|e| ConfigError(format!("config error at `gas`: {e}")))
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, ConfigError> {
        let spec = QuadratureSpec {
            n_omega: self.quadrature.n_omega,
            n_theta_i: self.quadrature.n_theta_i,
            n_phi_i: self.quadrature.n_phi_i,
            n_theta_s: self.quadrature.n_theta_s,
            n_phi_s: self.quadrature.n_phi_s,
            check_convergence: true,
        };
        spec.validate()
            .map_err(|e| ConfigError(format!("config error at `quadrature`: {e}")))?;
        Ok(spec)
    }

    /// Full simulation config; `seed_override` wins over the scenario seed.
    pub fn simulation(&self, seed_override: Option<u64>) -> Result<SimulationConfig, ConfigError> {
        let feedback = match &self.simulation.feedback_per_s {
            Some(f) => PerAxis::new(f.x, f.y, f.z),
            None => PerAxis::new(0.0, 0.0, 0.0),
        };
        let initial_state = match &self.simulation.initial_temps_mK {
            Some(t) => InitialState::AtTemperature(PerAxis::new(
                t.x * 1e-3,
                t.y * 1e-3,
                t.z * 1e-3,
            )),
            None => InitialState::FeedbackSteadyState,
        };
        let cfg = SimulationConfig {
            particle: self.particle()?,
            source: self.source()?,
            trap: self.trap()?,
            gas: self.gas()?,
            feedback_damping: feedback,
            dt: self.simulation.dt_s,
            duration: self.simulation.duration_s,
            seed: seed_override.unwrap_or(self.simulation.seed),
            n_trajectories: self.simulation.n_trajectories,
            photon_damping_inflation: self.simulation.photon_damping_inflation,
            initial_state,
        };
        cfg.validate()
            .map_err(|e| ConfigError(format!("config error at `simulation`: {e}")))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_resolves_defaults() {
        let sc = Scenario::from_json(r#"{"particle": {"radius_nm": 70.0}}"#).unwrap();
        let p = sc.particle().unwrap();
        assert!((p.radius - 70e-9).abs() < 1e-18);
        assert!(sc.source().is_ok());
        assert!(sc.simulation(None).is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let err = Scenario::from_json(r#"{"particle": {"radius_nm": 70.0, "colour": "red"}}"#)
            .unwrap_err();
        assert!(err.0.contains("particle"), "{err}");
        assert!(err.0.contains("colour"), "{err}");
    }

    #[test]
    fn source_schema_matches_documented_shape() {
        let sc = Scenario::from_json(
            r#"{
                "source": {"kind": "thermal", "wavelength_mu_nm": 1115, "wavelength_cutoff_nm": 1090,
                           "bulk_temp_K": 300, "gain": {"type": "gaussian", "center_nm": 1060, "fwhm_nm": 30},
                           "power_mW": 130, "waist_um2": 1.0},
                "gas": {"pressure_mbar": 5e-8, "gas_temp_K": 300, "gas": "N2"},
                "quadrature": {"n_omega": 64, "n_theta_i": 16, "n_phi_i": 16, "n_theta_s": 32, "n_phi_s": 32}
            }"#,
        )
        .unwrap();
        let src = sc.source().unwrap();
        assert!((levikin::photonics::focal_intensity(&src) - 1.3e11).abs() / 1.3e11 < 1e-12);
        let gas = sc.gas().unwrap();
        assert!((gas.pressure - 5e-6).abs() < 1e-18);
        assert!(sc.quadrature().is_ok());
    }
}
