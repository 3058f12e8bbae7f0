//! Light-source models.
//!
//! A thermal source (a superluminescent diode) emits amplified spontaneous
//! emission from a biased p-n junction. Its photons follow Bose-Einstein
//! statistics with a chemical potential `μ_c` set by the junction bias, a
//! sharp emission band edge at the cutoff frequency `ω_c > μ_c/ħ`, and a
//! gain profile `G(ω)` shaping the band. A single-mode laser is the
//! Poissonian reference: same focal intensity, photon-number variance `n̄`
//! instead of `n̄ + n̄²`.
//!
//! Device internals (junction area, absolute gain) are never known to the
//! user; all absolute scales are carried by the measured focal power and the
//! focal spot area, and the spectral shape is normalized to the focal power.

use crate::constants::{C, HBAR, KB};
use crate::error::{Error, Result};

/// Photon-statistics class of a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// Bose-Einstein photon statistics (broadband diode source).
    Thermal,
    /// Poissonian photon statistics (single-mode laser).
    Laser,
}

/// Spectral gain profile of a thermal source, multiplying the bare
/// junction emission spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainProfile {
    Constant,
    /// Gaussian gain, parameterized in angular frequency (rad/s).
    Gaussian { center: f64, stddev: f64 },
}

impl GainProfile {
    /// Gaussian gain from a center wavelength and FWHM in meters.
    pub fn gaussian_from_wavelength(center_m: f64, fwhm_m: f64) -> Self {
        let center = crate::constants::omega_from_wavelength(center_m);
        // d omega = 2 pi c d lambda / lambda^2 for a narrow band
        let fwhm_omega = 2.0 * std::f64::consts::PI * C * fwhm_m / (center_m * center_m);
        let stddev = fwhm_omega / (2.0 * (2.0 * 2.0f64.ln()).sqrt());
        GainProfile::Gaussian { center, stddev }
    }

    /// Dimensionless gain value at angular frequency `omega`.
    pub fn value(&self, omega: f64) -> f64 {
        match *self {
            GainProfile::Constant => 1.0,
            GainProfile::Gaussian { center, stddev } => {
                let d = (omega - center) / stddev;
                (-0.5 * d * d).exp()
            }
        }
    }
}

/// Immutable description of a trapping light source.
///
/// Constructed through [`LightSourceSpec::thermal`] or
/// [`LightSourceSpec::laser`]; construction validates all invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSourceSpec {
    kind: SourceKind,
    /// Bulk temperature of the emitting junction, K (thermal only).
    bulk_temperature: f64,
    /// Chemical potential, J (thermal only).
    chemical_potential: f64,
    /// Band-edge (cutoff) angular frequency, rad/s (thermal only).
    cutoff_frequency: f64,
    gain_profile: GainProfile,
    /// Laser angular frequency, rad/s (laser only).
    laser_frequency: f64,
    /// Focal power, W.
    focal_power: f64,
    /// Focal spot cross-section area, m².
    waist_area: f64,
    /// Emission band `[ω_c, ω_hi]` (thermal only).
    band: (f64, f64),
    /// Cached spectral normalization (thermal only).
    norm: f64,
}

/// Default chemical-potential wavelength `2πħc/μ_c`, m.
pub const DEFAULT_MU_WAVELENGTH: f64 = 1115e-9;
/// Default band-edge wavelength `2πc/ω_c`, m.
pub const DEFAULT_CUTOFF_WAVELENGTH: f64 = 1090e-9;
/// Default bulk temperature of the junction, K.
pub const DEFAULT_BULK_TEMPERATURE: f64 = 300.0;
/// Default Gaussian gain center wavelength, m.
pub const DEFAULT_GAIN_CENTER_WAVELENGTH: f64 = 1060e-9;
/// Default Gaussian gain FWHM, m.
pub const DEFAULT_GAIN_FWHM: f64 = 30e-9;

/// Default focal spot area, m².
///
/// Calibration constant: fixed once so that the 70 nm reference scenario
/// (130 mW thermal source at the defaults above) reproduces its measured
/// axial reheat rate of 1.02 K/s, then held fixed across scenarios. The
/// waist only sets absolute rates, never axis ratios.
pub const DEFAULT_WAIST_AREA: f64 = 4.867415672641045e-13;

impl LightSourceSpec {
    /// Thermal (diode) source.
    ///
    /// `mu_wavelength` and `cutoff_wavelength` are the vacuum wavelengths
    /// `2πħc/μ_c` and `2πc/ω_c` in meters; the band edge must lie strictly
    /// above the chemical potential (`ħω_c > μ_c`), which for wavelengths
    /// means `cutoff_wavelength < mu_wavelength`.
    pub fn thermal(
        mu_wavelength: f64,
        cutoff_wavelength: f64,
        bulk_temperature: f64,
        gain_profile: GainProfile,
        focal_power: f64,
        waist_area: f64,
    ) -> Result<Self> {
        if !(mu_wavelength > 0.0) || !(cutoff_wavelength > 0.0) {
            return Err(Error::InvalidConfig("wavelengths must be positive".into()));
        }
        if !(bulk_temperature > 0.0) {
            return Err(Error::InvalidConfig("bulk temperature must be > 0".into()));
        }
        validate_power_waist(focal_power, waist_area)?;
        let chemical_potential = crate::constants::energy_from_wavelength(mu_wavelength);
        let cutoff_frequency = crate::constants::omega_from_wavelength(cutoff_wavelength);
        if HBAR * cutoff_frequency <= chemical_potential {
            return Err(Error::InvalidConfig(format!(
                "band edge must lie strictly above the chemical potential \
                 (cutoff {:.1} nm >= mu {:.1} nm)",
                cutoff_wavelength * 1e9,
                mu_wavelength * 1e9
            )));
        }
        let band = emission_band_for(chemical_potential, cutoff_frequency, bulk_temperature);
        let norm = spectral_norm_for(
            chemical_potential,
            bulk_temperature,
            &gain_profile,
            band,
            focal_power,
            waist_area,
        );
        Ok(Self {
            kind: SourceKind::Thermal,
            bulk_temperature,
            chemical_potential,
            cutoff_frequency,
            gain_profile,
            laser_frequency: 0.0,
            focal_power,
            waist_area,
            band,
            norm,
        })
    }

    /// Thermal source with the default band parameters (1115 nm chemical
    /// potential, 1090 nm band edge, 300 K, Gaussian gain at 1060/30 nm).
    pub fn default_thermal(focal_power: f64, waist_area: f64) -> Result<Self> {
        Self::thermal(
            DEFAULT_MU_WAVELENGTH,
            DEFAULT_CUTOFF_WAVELENGTH,
            DEFAULT_BULK_TEMPERATURE,
            GainProfile::gaussian_from_wavelength(DEFAULT_GAIN_CENTER_WAVELENGTH, DEFAULT_GAIN_FWHM),
            focal_power,
            waist_area,
        )
    }

    /// Single-mode laser at vacuum wavelength `wavelength` (m).
    pub fn laser(wavelength: f64, focal_power: f64, waist_area: f64) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(Error::InvalidConfig("wavelength must be positive".into()));
        }
        validate_power_waist(focal_power, waist_area)?;
        let laser_frequency = crate::constants::omega_from_wavelength(wavelength);
        Ok(Self {
            kind: SourceKind::Laser,
            bulk_temperature: 0.0,
            chemical_potential: 0.0,
            cutoff_frequency: 0.0,
            gain_profile: GainProfile::Constant,
            laser_frequency,
            focal_power,
            waist_area,
            band: (laser_frequency, laser_frequency),
            norm: 0.0,
        })
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    pub fn is_thermal(&self) -> bool {
        self.kind == SourceKind::Thermal
    }

    /// Bulk temperature T (K). Thermal sources only.
    pub fn bulk_temperature(&self) -> Result<f64> {
        self.require_thermal("bulk_temperature")?;
        Ok(self.bulk_temperature)
    }

    /// Chemical potential μ_c (J). Thermal sources only.
    pub fn chemical_potential(&self) -> Result<f64> {
        self.require_thermal("chemical_potential")?;
        Ok(self.chemical_potential)
    }

    /// Band-edge angular frequency ω_c (rad/s). Thermal sources only.
    pub fn cutoff_frequency(&self) -> Result<f64> {
        self.require_thermal("cutoff_frequency")?;
        Ok(self.cutoff_frequency)
    }

    pub fn gain_profile(&self) -> &GainProfile {
        &self.gain_profile
    }

    /// Laser angular frequency ω_L (rad/s). Lasers only.
    pub fn laser_frequency(&self) -> Result<f64> {
        match self.kind {
            SourceKind::Laser => Ok(self.laser_frequency),
            SourceKind::Thermal => Err(Error::UnsupportedOperation("laser_frequency")),
        }
    }

    /// The frequency carrying the photon momentum scale: ω_c for a thermal
    /// source, ω_L for a laser.
    pub fn carrier_frequency(&self) -> f64 {
        match self.kind {
            SourceKind::Thermal => self.cutoff_frequency,
            SourceKind::Laser => self.laser_frequency,
        }
    }

    pub fn focal_power(&self) -> f64 {
        self.focal_power
    }

    pub fn waist_area(&self) -> f64 {
        self.waist_area
    }

    /// Band-edge distance in thermal units: `x₀ = (ħω_c − μ_c)/k_BT`.
    pub fn band_edge_parameter(&self) -> Result<f64> {
        self.require_thermal("band_edge_parameter")?;
        Ok((HBAR * self.cutoff_frequency - self.chemical_potential)
            / (KB * self.bulk_temperature))
    }

    /// Bose enhancement of the recoil energy gain over the bare damping,
    /// `1/(1 − exp[(μ_c − ħω_c)/k_BT]) = 1 + n̄(ω_c)`.
    ///
    /// Diverges as μ_c → ħω_c (photon-condensate regime); that limit is
    /// rejected with [`Error::SingularPrefactor`].
    pub fn recoil_prefactor(&self) -> Result<f64> {
        let x0 = self.band_edge_parameter()?;
        if x0 < 1e-6 {
            return Err(Error::SingularPrefactor);
        }
        Ok(1.0 / (-(-x0).exp_m1()))
    }

    fn require_thermal(&self, what: &'static str) -> Result<()> {
        match self.kind {
            SourceKind::Thermal => Ok(()),
            SourceKind::Laser => Err(Error::UnsupportedOperation(what)),
        }
    }

    /// Emission band `[ω_c, ω_hi]` used for spectral integrals. The upper
    /// edge is where `n̄·ω³` has fallen below 10⁻⁹ of its in-band peak.
    pub fn emission_band(&self) -> Result<(f64, f64)> {
        self.require_thermal("emission_band")?;
        Ok(self.band)
    }

    /// Cached normalization constant `N` such that
    /// `∫ N·G(ω)·ω³·n̄(ω) dω = focal_power / waist_area` over the band.
    fn spectral_norm(&self) -> Result<f64> {
        self.require_thermal("spectral_norm")?;
        Ok(self.norm)
    }
}

/// Walk up from the band edge in thermal-width steps until `n̄·ω³` has
/// decayed to 10⁻⁹ of its in-band peak; the weight falls exponentially so
/// this terminates quickly.
fn emission_band_for(mu: f64, cutoff: f64, temperature: f64) -> (f64, f64) {
    let kt = KB * temperature;
    let du = 0.05;
    let peak = cutoff.powi(3) * bose(HBAR * cutoff - mu, kt);
    let mut u = (HBAR * cutoff - mu) / kt;
    loop {
        u += du;
        let w = (mu + kt * u) / HBAR;
        let val = w.powi(3) * bose(HBAR * w - mu, kt);
        if val < 1e-9 * peak {
            return (cutoff, w);
        }
        if u > 500.0 {
            return (cutoff, (mu + kt * 500.0) / HBAR);
        }
    }
}

/// Composite-Simpson normalization, fine enough that a trapezoid
/// cross-check on a 200k-point grid agrees to 1e-6 relative.
fn spectral_norm_for(
    mu: f64,
    temperature: f64,
    gain: &GainProfile,
    band: (f64, f64),
    focal_power: f64,
    waist_area: f64,
) -> f64 {
    let (lo, hi) = band;
    let kt = KB * temperature;
    let n = 32_768usize;
    let h = (hi - lo) / n as f64;
    let shape = |w: f64| gain.value(w) * w.powi(3) * bose(HBAR * w - mu, kt);
    let mut sum = shape(lo) + shape(hi);
    for i in 1..n {
        let w = lo + i as f64 * h;
        sum += shape(w) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let integral = sum * h / 3.0;
    focal_power / waist_area / integral
}

fn validate_power_waist(focal_power: f64, waist_area: f64) -> Result<()> {
    if !(focal_power >= 0.0) || !focal_power.is_finite() {
        return Err(Error::InvalidConfig("focal power must be finite and >= 0".into()));
    }
    if !(waist_area > 0.0) {
        return Err(Error::InvalidConfig("waist area must be > 0".into()));
    }
    Ok(())
}

#[inline]
fn bose(delta_e: f64, kt: f64) -> f64 {
    1.0 / (delta_e / kt).exp_m1()
}

/// Mean Bose-Einstein occupation `n̄ = 1/(exp[(ħω − μ_c)/k_BT] − 1)` of a
/// mode at angular frequency `omega` of a thermal source.
///
/// Strictly positive and strictly decreasing in `omega`; requires
/// `ħω > μ_c`.
pub fn mean_occupation(omega: f64, src: &LightSourceSpec) -> Result<f64> {
    let mu = src.chemical_potential()?;
    let t = src.bulk_temperature()?;
    if HBAR * omega <= mu {
        return Err(Error::Domain(format!(
            "photon energy {:.4e} J not above the chemical potential {:.4e} J",
            HBAR * omega,
            mu
        )));
    }
    Ok(bose(HBAR * omega - mu, KB * t))
}

/// Photon-number variance of a mode with mean occupation `n_bar`:
/// `n̄ + n̄²` for a thermal source, `n̄` for a laser.
pub fn photon_number_variance(n_bar: f64, kind: SourceKind) -> Result<f64> {
    if !(n_bar >= 0.0) {
        return Err(Error::Domain(format!("mean occupation must be >= 0, got {n_bar}")));
    }
    Ok(match kind {
        SourceKind::Thermal => n_bar + n_bar * n_bar,
        SourceKind::Laser => n_bar,
    })
}

/// Spectral intensity of a thermal source at `omega`, W·s/m² per unit
/// angular frequency: `N·G(ω)·ω³·n̄(ω)` above the band edge, zero below it.
///
/// The normalization `N` absorbs all device internals: the profile
/// integrates to `focal_power/waist_area`.
pub fn spectral_intensity(omega: f64, src: &LightSourceSpec) -> Result<f64> {
    let wc = src.cutoff_frequency()?;
    if omega < wc {
        return Ok(0.0);
    }
    let n = src.spectral_norm()?;
    let kt = KB * src.bulk_temperature()?;
    Ok(n * src.gain_profile().value(omega)
        * omega.powi(3)
        * bose(HBAR * omega - src.chemical_potential()?, kt))
}

/// Intensity at the focus, `I = P/A_w` (W/m²), for either source kind.
pub fn focal_intensity(src: &LightSourceSpec) -> f64 {
    src.focal_power() / src.waist_area()
}

/// Detector noise power spectral density (V²/Hz) as a function of optical
/// power on a balanced photodiode: `a + bP` for a laser, `a + bP²` for a
/// thermal source. `a` is the electronic noise floor.
pub fn shot_noise_psd(power: f64, kind: SourceKind, a: f64, b: f64) -> f64 {
    match kind {
        SourceKind::Laser => a + b * power,
        SourceKind::Thermal => a + b * power * power,
    }
}
