//! Angular structure of the scattering problem: the dipole radiation
//! pattern of the scattered field and the per-axis projection coefficients
//! of the recoil kicks.

use crate::quadrature::GaussLegendre;

/// Angular distribution of Rayleigh-scattered photons for x-polarized
/// light, `P_r = (3/8π)(cos²θ_s cos²φ_s + sin²φ_s)`, 1/sr.
///
/// `theta_s` is measured from the propagation axis `z`, `phi_s` from the
/// polarization axis `x`. Normalized: the integral over the sphere is 1.
pub fn dipole_pattern(theta_s: f64, phi_s: f64) -> f64 {
    let ct = theta_s.cos();
    let cp = phi_s.cos();
    let sp = phi_s.sin();
    3.0 / (8.0 * std::f64::consts::PI) * (ct * ct * cp * cp + sp * sp)
}

/// Per-axis grid of incident/scattered direction projections used by the
/// angular quadratures.
pub(crate) struct AngularGrid {
    /// Incident directions: (weight, [Θ_x, Θ_y, Θ_z]); weights sum to 1
    /// (uniform average over the incidence cone).
    pub incident: Vec<(f64, [f64; 3])>,
    /// Scattered directions: (weight·P_r·sinθ, [Θ_x, Θ_y, Θ_z]); weights sum
    /// to 1 up to quadrature error (the pattern is normalized).
    pub scattered: Vec<(f64, [f64; 3])>,
}

impl AngularGrid {
    /// Build the cone/pattern grids. A cone half-angle of (numerically)
    /// zero degenerates to a single plane-wave direction along `z`.
    pub fn new(theta_mx: f64, n_theta_i: usize, n_phi_i: usize, n_theta_s: usize, n_phi_s: usize) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;

        let incident = if theta_mx < 1e-9 {
            vec![(1.0, [0.0, 0.0, 1.0])]
        } else {
            // uniform over solid angle up to theta_mx: weight sinθ/Ω_mx
            let solid_angle = two_pi * (1.0 - theta_mx.cos());
            let th = GaussLegendre::on_interval(n_theta_i, 0.0, theta_mx);
            let ph = GaussLegendre::on_interval(n_phi_i, 0.0, two_pi);
            let mut grid = Vec::with_capacity(n_theta_i * n_phi_i);
            for (&t, &wt) in th.nodes.iter().zip(&th.weights) {
                let (st, ct) = t.sin_cos();
                for (&p, &wp) in ph.nodes.iter().zip(&ph.weights) {
                    let (sp, cp) = p.sin_cos();
                    let w = wt * wp * st / solid_angle;
                    grid.push((w, [st * cp, st * sp, ct]));
                }
            }
            grid
        };

        let th = GaussLegendre::on_interval(n_theta_s, 0.0, std::f64::consts::PI);
        let ph = GaussLegendre::on_interval(n_phi_s, 0.0, two_pi);
        let mut scattered = Vec::with_capacity(n_theta_s * n_phi_s);
        for (&t, &wt) in th.nodes.iter().zip(&th.weights) {
            let (st, ct) = t.sin_cos();
            for (&p, &wp) in ph.nodes.iter().zip(&ph.weights) {
                let (sp, cp) = p.sin_cos();
                let w = wt * wp * st * dipole_pattern(t, p);
                scattered.push((w, [st * cp, st * sp, ct]));
            }
        }

        Self { incident, scattered }
    }

    /// Cone-and-pattern average of `(Θ_i,q + Θ_s,q)²` per axis. The cross
    /// terms vanish by symmetry but are retained so the quadrature itself is
    /// what is being averaged.
    pub fn recoil_weights(&self) -> [f64; 3] {
        let mut w = [0.0; 3];
        for &(wi, ti) in &self.incident {
            for &(ws, ts) in &self.scattered {
                let weight = wi * ws;
                for q in 0..3 {
                    let s = ti[q] + ts[q];
                    w[q] += weight * s * s;
                }
            }
        }
        w
    }
}

/// Per-axis geometric projection coefficients `Λ^q` of the photon recoil,
/// for an incidence cone of half-angle `theta_mx` and the dipole pattern of
/// the scattered light, normalized so that `ΣΛ = 1`.
///
/// For a plane wave (`theta_mx → 0`) the coefficients are `[0.1, 0.2, 0.7]`,
/// i.e. heating ratios `[1, 2, 7]`.
pub fn lambda_coefficients(theta_mx: f64) -> [f64; 3] {
    let grid = AngularGrid::new(theta_mx, 16, 16, 32, 32);
    let w = grid.recoil_weights();
    let total: f64 = w.iter().sum();
    [w[0] / total, w[1] / total, w[2] / total]
}
