//! Physical constants (CODATA 2018, SI units) and wavelength conversions.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.62607015e-34;

/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380649e-23;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.99792458e8;

/// Unified atomic mass unit, kg.
pub const AMU: f64 = 1.66053906660e-27;

/// Angular frequency (rad/s) of light with the given vacuum wavelength (m).
pub fn omega_from_wavelength(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / lambda
}

/// Photon energy (J) at the given vacuum wavelength (m).
pub fn energy_from_wavelength(lambda: f64) -> f64 {
    PLANCK * C / lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_conversions_are_consistent() {
        let lambda = 1090e-9;
        let omega = omega_from_wavelength(lambda);
        // hbar and h are rounded independently; they agree to ~3e-10 relative
        let e = energy_from_wavelength(lambda);
        assert!(((HBAR * omega - e) / e).abs() < 1e-9);
        assert!((2.0 * std::f64::consts::PI * C / omega - lambda).abs() / lambda < 1e-15);
    }
}
