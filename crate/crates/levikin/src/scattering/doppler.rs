//! Doppler damping by thermal light and the photon-bath equilibrium
//! temperature.
//!
//! A particle moving with velocity `v` sees the incident thermal field
//! blue/red-shifted along the incident direction and emits into a shifted
//! spectrum along the scattered direction. Both shifts tilt the Bose
//! occupation against the motion, producing a viscous force. Its linearized
//! coefficient per axis is `2 γ_ph^q/(1 − exp[(μ_c − ħω_c)/k_BT])`, and
//! balancing it against the recoil energy gain pins the center-of-mass
//! equilibrium at half the source temperature.

use rayon::prelude::*;

use crate::axis::Axis;
use crate::constants::{C, HBAR, KB};
use crate::error::{Error, Result};
use crate::photonics::{focal_intensity, LightSourceSpec, SourceKind};
use crate::quadrature::{pairwise_sum, QuadratureSpec};

use super::geometry::AngularGrid;
use super::recoil::{recoil_heating_quadrature, OmegaGrid};
use super::{cross_section, photon_damping, ParticleSpec, TrapConfig};

/// Doppler force of the thermal field on a particle moving at `v` (m/s per
/// component), with the static radiation pressure subtracted: the value at
/// `v = 0` is zero by construction, and the force is odd in `v` up to
/// quadrature error.
///
/// Velocities above 10⁻³ c are outside the linear-response regime this
/// kernel is meant for and are rejected.
pub fn doppler_force(
    v: [f64; 3],
    p: &ParticleSpec,
    src: &LightSourceSpec,
    trap: &TrapConfig,
    grid: &QuadratureSpec,
) -> Result<[f64; 3]> {
    let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if speed > 1e-3 * C {
        return Err(Error::OutOfRegime(format!(
            "|v| = {speed:.3e} m/s exceeds 1e-3 c; the Doppler kernel is linear-response only"
        )));
    }
    if src.kind() != SourceKind::Thermal {
        return Err(Error::UnsupportedOperation("doppler_force (thermal sources only)"));
    }
    grid.validate()?;

    let angular =
        AngularGrid::new(trap.theta_mx, grid.n_theta_i, grid.n_phi_i, grid.n_theta_s, grid.n_phi_s);
    let og = OmegaGrid::new(src, grid.n_omega)?;
    let at_v = force_quadrature(&v, p, src, &angular, &og)?;
    let at_rest = force_quadrature(&[0.0; 3], p, src, &angular, &og)?;
    Ok([at_v[0] - at_rest[0], at_v[1] - at_rest[1], at_v[2] - at_rest[2]])
}

/// Raw momentum-flux quadrature of the Doppler kernel (static pressure
/// included), N per component.
fn force_quadrature(
    v: &[f64; 3],
    p: &ParticleSpec,
    src: &LightSourceSpec,
    angular: &AngularGrid,
    og: &OmegaGrid,
) -> Result<[f64; 3]> {
    let sigma = cross_section(src.cutoff_frequency()?, p);
    let intensity = focal_intensity(src);
    // carrier Doppler scale: a velocity beta shifts the occupation exponent
    // by beta * hbar*omega_c/kT
    let chi = HBAR * src.cutoff_frequency()? / (KB * src.bulk_temperature()?);
    let prefactor = sigma * intensity / (C * og.boltzmann_norm);

    let slabs: Vec<[f64; 3]> = (0..og.weights.len())
        .into_par_iter()
        .map(|i| {
            let u = og.u[i];
            let spectral = og.weights[i] * og.gain[i];
            let mut acc = [0.0; 3];
            for &(wi, ti) in &angular.incident {
                let beta_i = (v[0] * ti[0] + v[1] * ti[1] + v[2] * ti[2]) / C;
                let n_i = 1.0 / (u + chi * beta_i).exp_m1();
                for &(ws, ts) in &angular.scattered {
                    let beta_s = (v[0] * ts[0] + v[1] * ts[1] + v[2] * ts[2]) / C;
                    let n_s = 1.0 / (u + chi * beta_s).exp_m1();
                    let w = wi * ws * spectral;
                    for q in 0..3 {
                        acc[q] += w * (ti[q] * n_i + ts[q] * n_s);
                    }
                }
            }
            acc
        })
        .collect();

    let per = |q: usize| prefactor * pairwise_sum(&slabs.iter().map(|s| s[q]).collect::<Vec<_>>());
    Ok([per(0), per(1), per(2)])
}

/// Linearized Doppler damping coefficient along `axis`, 1/s:
/// `F_q ≈ −M γ_dopp^q v_q` with `γ_dopp^q = 2 γ_ph^q/(1 − exp[(μ_c − ħω_c)/k_BT])`.
///
/// For a laser the same pairing holds with the prefactor replaced by 1; the
/// coefficient is then the (tiny) recoil damping rate scale used by the
/// dynamics bath.
pub fn doppler_damping_coefficient(
    axis: Axis,
    p: &ParticleSpec,
    src: &LightSourceSpec,
    trap: &TrapConfig,
) -> Result<f64> {
    let gamma = photon_damping(axis, p, src, trap)?;
    Ok(match src.kind() {
        SourceKind::Thermal => 2.0 * gamma * src.recoil_prefactor()?,
        SourceKind::Laser => 2.0 * gamma,
    })
}

/// Equilibrium center-of-mass temperature set by the photon bath: `T/2`
/// for a thermal source of bulk temperature `T`.
pub fn equilibrium_temperature(src: &LightSourceSpec) -> Result<f64> {
    // reject the condensate limit where heating and damping both diverge
    let _ = src.recoil_prefactor()?;
    Ok(src.bulk_temperature()? / 2.0)
}

/// Cross-check of [`equilibrium_temperature`] by numerical power balance:
/// bisects the temperature `T'` at which the Doppler damping power at the
/// thermal speed `v_q = sqrt(k_B T'/M)` equals the recoil energy gain, both
/// evaluated by quadrature.
pub fn equilibrium_temperature_balance(
    p: &ParticleSpec,
    src: &LightSourceSpec,
    trap: &TrapConfig,
    grid: &QuadratureSpec,
) -> Result<f64> {
    let heating = recoil_heating_quadrature(p, src, trap, grid)?;
    let gain = heating.dtdt.z * KB; // W, axis z
    let mass = p.mass();

    let angular =
        AngularGrid::new(trap.theta_mx, grid.n_theta_i, grid.n_phi_i, grid.n_theta_s, grid.n_phi_s);
    let og = OmegaGrid::new(src, grid.n_omega)?;
    let rest = force_quadrature(&[0.0; 3], p, src, &angular, &og)?;

    // damping power exceeds the gain iff T' is above equilibrium
    let excess = |t: f64| -> Result<f64> {
        let v = (KB * t / mass).sqrt();
        let f = force_quadrature(&[0.0, 0.0, v], p, src, &angular, &og)?;
        Ok(-(f[2] - rest[2]) * v - gain)
    };

    let t_source = src.bulk_temperature()?;
    let (mut lo, mut hi) = (1e-3 * t_source, 2.0 * t_source);
    if excess(lo)? > 0.0 || excess(hi)? < 0.0 {
        return Err(Error::Domain("power balance not bracketed".into()));
    }
    while (hi - lo) > 1e-3 * t_source {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
