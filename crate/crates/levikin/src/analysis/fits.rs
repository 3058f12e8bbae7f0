//! Linear and nonlinear fitting: weighted least squares with analytic
//! normal equations for the linear models, Levenberg-Marquardt with a
//! numeric Jacobian for the nonlinear ones.

use crate::axis::{Axis, PerAxis};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// small dense linear algebra

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Fit("singular normal equations".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (entry, pivot) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= f * pivot;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

fn invert(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut inv = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let x = solve(a.to_vec(), e)?;
        for row in 0..n {
            inv[row][col] = x[row];
        }
    }
    Ok(inv)
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt

pub(crate) struct LmOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iter: 200, rel_tol: 1e-10 }
    }
}

#[allow(dead_code)] // cost/covariance are diagnostics; not every caller reads them
pub(crate) struct LmFit {
    pub params: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    /// (JᵀJ)⁻¹ scaled by the residual variance.
    pub covariance: Vec<Vec<f64>>,
}

/// Minimize `|r(p)|²` for a residual function `r`, starting at `p0`.
pub(crate) fn levenberg_marquardt(
    residuals: impl Fn(&[f64], &mut Vec<f64>),
    p0: &[f64],
    opts: &LmOptions,
) -> Result<LmFit> {
    let n_par = p0.len();
    let mut params = p0.to_vec();
    let mut r = Vec::new();
    residuals(&params, &mut r);
    let n_data = r.len();
    if n_data <= n_par {
        return Err(Error::Fit("fewer data points than parameters".into()));
    }
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut jac = vec![vec![0.0; n_data]; n_par];
    let mut r_probe = Vec::new();
    let mut iterations = 0;

    for iter in 0..opts.max_iter {
        iterations = iter + 1;
        // forward-difference Jacobian
        for j in 0..n_par {
            let h = 1e-7 * params[j].abs().max(1e-9);
            let mut probe = params.clone();
            probe[j] += h;
            residuals(&probe, &mut r_probe);
            for i in 0..n_data {
                jac[j][i] = (r_probe[i] - r[i]) / h;
            }
        }
        // normal equations with damping
        let mut jtj = vec![vec![0.0; n_par]; n_par];
        let mut jtr = vec![0.0; n_par];
        for a in 0..n_par {
            for b in a..n_par {
                let s: f64 = (0..n_data).map(|i| jac[a][i] * jac[b][i]).sum();
                jtj[a][b] = s;
                jtj[b][a] = s;
            }
            jtr[a] = (0..n_data).map(|i| jac[a][i] * r[i]).sum();
        }

        let mut improved = false;
        for _ in 0..20 {
            let mut damped = jtj.clone();
            for d in 0..n_par {
                damped[d][d] += lambda * jtj[d][d].max(1e-300);
            }
            let step = match solve(damped, jtr.clone()) {
                Ok(s) => s,
                Err(_) => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let candidate: Vec<f64> =
                params.iter().zip(&step).map(|(p, s)| p - s).collect();
            residuals(&candidate, &mut r_probe);
            let new_cost: f64 = r_probe.iter().map(|v| v * v).sum();
            if new_cost.is_finite() && new_cost < cost {
                let rel = (cost - new_cost) / cost.max(1e-300);
                params = candidate;
                std::mem::swap(&mut r, &mut r_probe);
                cost = new_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if rel < opts.rel_tol {
                    let cov = covariance_from(&jac, cost, n_data, n_par)?;
                    return Ok(LmFit { params, cost, iterations, covariance: cov });
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    let cov = covariance_from(&jac, cost, n_data, n_par)?;
    Ok(LmFit { params, cost, iterations, covariance: cov })
}

fn covariance_from(
    jac: &[Vec<f64>],
    cost: f64,
    n_data: usize,
    n_par: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut jtj = vec![vec![0.0; n_par]; n_par];
    for a in 0..n_par {
        for b in a..n_par {
            let s: f64 = (0..n_data).map(|i| jac[a][i] * jac[b][i]).sum();
            jtj[a][b] = s;
            jtj[b][a] = s;
        }
    }
    let sigma2 = cost / (n_data - n_par) as f64;
    let inv = invert(&jtj)?;
    Ok(inv.into_iter().map(|row| row.into_iter().map(|v| v * sigma2).collect()).collect())
}

// ---------------------------------------------------------------------------
// weighted linear reheat fit

/// Weighted straight-line fit `T(t) = a0 + a1 t`.
#[derive(Debug, Clone)]
pub struct LinearFitResult {
    /// Offset, K.
    pub a0: f64,
    /// Slope (reheat rate), K/s.
    pub a1: f64,
    /// 2×2 covariance of (a0, a1).
    pub covariance: [[f64; 2]; 2],
    /// Weighted residual variance (χ² per degree of freedom).
    pub residual_variance: f64,
}

/// Weighted least squares of time-binned reheat temperatures.
/// `stderr` entries must be positive (or all zero for an unweighted fit).
pub fn linear_reheat_fit(t: &[f64], temps: &[f64], stderr: &[f64]) -> Result<LinearFitResult> {
    let n = t.len();
    if n < 5 {
        return Err(Error::Fit(format!("need at least 5 time bins, got {n}")));
    }
    if temps.len() != n || stderr.len() != n {
        return Err(Error::Fit("mismatched input lengths".into()));
    }
    let unweighted = stderr.iter().all(|&s| s == 0.0);
    if !unweighted && stderr.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::Fit("degenerate weights: non-positive standard error".into()));
    }
    let w: Vec<f64> = if unweighted {
        vec![1.0; n]
    } else {
        stderr.iter().map(|&s| 1.0 / (s * s)).collect()
    };
    let sw: f64 = w.iter().sum();
    let swt: f64 = w.iter().zip(t).map(|(&w, &t)| w * t).sum();
    let swtt: f64 = w.iter().zip(t).map(|(&w, &t)| w * t * t).sum();
    let swy: f64 = w.iter().zip(temps).map(|(&w, &y)| w * y).sum();
    let swty: f64 = w.iter().zip(t.iter().zip(temps)).map(|(&w, (&t, &y))| w * t * y).sum();
    let det = sw * swtt - swt * swt;
    if det.abs() < 1e-300 {
        return Err(Error::Fit("degenerate design matrix".into()));
    }
    let a0 = (swtt * swy - swt * swty) / det;
    let a1 = (sw * swty - swt * swy) / det;
    let covariance = [[swtt / det, -swt / det], [-swt / det, sw / det]];
    let chi2: f64 = w
        .iter()
        .zip(t.iter().zip(temps))
        .map(|(&w, (&t, &y))| {
            let r = y - a0 - a1 * t;
            w * r * r
        })
        .sum();
    Ok(LinearFitResult { a0, a1, covariance, residual_variance: chi2 / (n - 2) as f64 })
}

// ---------------------------------------------------------------------------
// pressure sweep decomposition

/// One reheat-rate measurement at one pressure.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    /// Gas pressure, Pa.
    pub pressure: f64,
    pub axis: Axis,
    /// Measured reheat rate, K/s.
    pub rate: f64,
    /// Standard error of the rate, K/s (0 for unweighted).
    pub stderr: f64,
}

/// Decomposition of reheat rates into per-axis photon intercepts and a
/// shared gas slope: `rate_q(P) = a_ph^q + a2·P`.
#[derive(Debug, Clone)]
pub struct SweepFitResult {
    /// Photon heating intercept per axis, K/s (y and z share one value when
    /// fitted grouped).
    pub a_ph: PerAxis<f64>,
    pub a_ph_stderr: PerAxis<f64>,
    /// Gas heating slope, K/s/Pa.
    pub a2: f64,
    pub a2_stderr: f64,
    /// Whether y and z shared an intercept.
    pub grouped_yz: bool,
}

impl SweepFitResult {
    /// Pressure (Pa) at which gas heating overtakes the photon heating of
    /// the given axis.
    pub fn crossover_pressure(&self, axis: Axis) -> f64 {
        self.a_ph[axis] / self.a2
    }
}

/// Joint fit of reheat rates across axes and pressures, sharing the gas
/// slope. Requires at least 3 distinct pressures spanning a decade.
///
/// `group_yz` fits one intercept for the y and z axes together (their
/// recoil rates are closest and they are often reported as one line).
/// Negative photon intercepts are clamped to zero and the remaining
/// parameters refitted.
pub fn pressure_sweep_fit(points: &[SweepPoint], group_yz: bool) -> Result<SweepFitResult> {
    let mut pressures: Vec<f64> = points.iter().map(|p| p.pressure).collect();
    pressures.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pressures.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a.abs().max(1e-300));
    if pressures.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 distinct pressures, got {}",
            pressures.len()
        )));
    }
    let span = pressures.last().unwrap() / pressures.first().unwrap();
    if span < 10.0 {
        return Err(Error::Fit(format!(
            "pressure span {span:.2}x is below the required decade"
        )));
    }

    // parameter layout: intercepts then the shared slope
    let slot = |axis: Axis| -> usize {
        match (group_yz, axis) {
            (_, Axis::X) => 0,
            (true, _) => 1,
            (false, Axis::Y) => 1,
            (false, Axis::Z) => 2,
        }
    };
    let n_intercepts = if group_yz { 2 } else { 3 };
    let n_par = n_intercepts + 1;

    let fit_with = |fixed_zero: &[bool]| -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let mut ata = vec![vec![0.0; n_par]; n_par];
        let mut atb = vec![0.0; n_par];
        for p in points {
            let w = if p.stderr > 0.0 { 1.0 / (p.stderr * p.stderr) } else { 1.0 };
            let i = slot(p.axis);
            let mut row = vec![0.0; n_par];
            if !fixed_zero[i] {
                row[i] = 1.0;
            }
            row[n_par - 1] = p.pressure;
            for a in 0..n_par {
                for b in 0..n_par {
                    ata[a][b] += w * row[a] * row[b];
                }
                atb[a] += w * row[a] * p.rate;
            }
        }
        // pinned intercepts get an identity row
        for (i, &z) in fixed_zero.iter().enumerate() {
            if z {
                ata[i][i] = 1.0;
                atb[i] = 0.0;
            }
        }
        let sol = solve(ata.clone(), atb)?;
        let cov = invert(&ata)?;
        Ok((sol, cov))
    };

    let mut fixed = vec![false; n_par];
    let (mut sol, mut cov) = fit_with(&fixed)?;
    // non-negativity of the photon intercepts by clamp-and-refit
    for _ in 0..n_intercepts {
        let mut changed = false;
        for i in 0..n_intercepts {
            if !fixed[i] && sol[i] < 0.0 {
                fixed[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        (sol, cov) = fit_with(&fixed)?;
    }

    let get = |axis: Axis| sol[slot(axis)];
    let get_err = |axis: Axis| cov[slot(axis)][slot(axis)].max(0.0).sqrt();
    Ok(SweepFitResult {
        a_ph: PerAxis::from_fn(get),
        a_ph_stderr: PerAxis::from_fn(get_err),
        a2: sol[n_par - 1],
        a2_stderr: cov[n_par - 1][n_par - 1].max(0.0).sqrt(),
        grouped_yz: group_yz,
    })
}

// ---------------------------------------------------------------------------
// shot-noise scaling model selection

/// Which power law the detector-noise data follow.
#[derive(Debug, Clone, Copy)]
pub struct NoiseScalingFit {
    /// Selected exponent: 1.0 (linear, laser-like) or 2.0 (quadratic,
    /// thermal-like).
    pub exponent: f64,
    pub a: f64,
    pub b: f64,
    pub rss_linear: f64,
    pub rss_quadratic: f64,
    /// Set when the two models describe the data comparably well.
    pub ambiguous: bool,
}

/// Fit `S = a + bP` and `S = a + bP²`, select by residual.
pub fn noise_scaling_fit(power: &[f64], psd: &[f64]) -> Result<NoiseScalingFit> {
    let n = power.len();
    if n < 5 || psd.len() != n {
        return Err(Error::Fit(format!("need at least 5 power points, got {n}")));
    }
    let fit_poly = |transform: fn(f64) -> f64| -> Result<(f64, f64, f64)> {
        let sx: f64 = power.iter().map(|&p| transform(p)).sum();
        let sxx: f64 = power.iter().map(|&p| transform(p) * transform(p)).sum();
        let sy: f64 = psd.iter().sum();
        let sxy: f64 = power.iter().zip(psd).map(|(&p, &s)| transform(p) * s).sum();
        let nf = n as f64;
        let det = nf * sxx - sx * sx;
        if det.abs() < 1e-300 {
            return Err(Error::Fit("degenerate power grid".into()));
        }
        let a = (sxx * sy - sx * sxy) / det;
        let b = (nf * sxy - sx * sy) / det;
        let rss: f64 = power
            .iter()
            .zip(psd)
            .map(|(&p, &s)| {
                let r = s - a - b * transform(p);
                r * r
            })
            .sum();
        Ok((a, b, rss))
    };
    let (a1, b1, rss1) = fit_poly(|p| p)?;
    let (a2, b2, rss2) = fit_poly(|p| p * p)?;
    let (exponent, a, b) = if rss1 <= rss2 { (1.0, a1, b1) } else { (2.0, a2, b2) };
    let ratio = rss1.min(rss2) / rss1.max(rss2).max(1e-300);
    Ok(NoiseScalingFit {
        exponent,
        a,
        b,
        rss_linear: rss1,
        rss_quadratic: rss2,
        ambiguous: ratio > 0.5,
    })
}

// ---------------------------------------------------------------------------
// exponential relaxation

/// Fit of `T(t) = T_∞ + (T_i − T_∞) e^{−γt}`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialFit {
    pub t_equilibrium: f64,
    pub t_initial: f64,
    /// Relaxation rate γ, 1/s.
    pub gamma: f64,
}

/// Nonlinear fit of a relaxation curve.
pub fn exponential_relaxation_fit(t: &[f64], temps: &[f64]) -> Result<ExponentialFit> {
    let n = t.len();
    if n < 8 || temps.len() != n {
        return Err(Error::Fit("need at least 8 bins for the relaxation fit".into()));
    }
    let t_init = temps[0];
    let t_inf = *temps.last().unwrap();
    let span = t.last().unwrap() - t[0];
    let scale_t = temps.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1e-300);
    // crossing time of 63% of the gap for the rate guess
    let target = t_init + 0.632 * (t_inf - t_init);
    let crossing = t
        .iter()
        .zip(temps)
        .find(|(_, &v)| (t_inf > t_init && v >= target) || (t_inf <= t_init && v <= target))
        .map(|(&tt, _)| tt)
        .unwrap_or(0.5 * span);
    let gamma0 = 1.0 / crossing.max(1e-6 * span);

    let residuals = |p: &[f64], out: &mut Vec<f64>| {
        let (tinf, tini, g) = (p[0] * scale_t, p[1] * scale_t, p[2] * gamma0);
        out.clear();
        for (&tt, &v) in t.iter().zip(temps) {
            let m = tinf + (tini - tinf) * (-g * tt).exp();
            out.push((m - v) / scale_t);
        }
    };
    let fit = levenberg_marquardt(
        residuals,
        &[t_inf / scale_t, t_init / scale_t, 1.0],
        &LmOptions::default(),
    )?;
    let gamma = fit.params[2] * gamma0;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Fit("relaxation fit diverged".into()));
    }
    Ok(ExponentialFit {
        t_equilibrium: fit.params[0] * scale_t,
        t_initial: fit.params[1] * scale_t,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_line_is_recovered_exactly() {
        let t: Vec<f64> = (0..30).map(|i| i as f64 * 0.005).collect();
        let y: Vec<f64> = t.iter().map(|&tt| 0.05 + 0.5 * tt).collect();
        let err = vec![1e-3; 30];
        let fit = linear_reheat_fit(&t, &y, &err).unwrap();
        assert!((fit.a0 - 0.05).abs() < 1e-12);
        assert!((fit.a1 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn noise_around_constant_has_slope_consistent_with_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t: Vec<f64> = (0..40).map(|i| i as f64 * 0.01).collect();
        let sigma = 0.01;
        let y: Vec<f64> = t
            .iter()
            .map(|_| 0.3 + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let err = vec![sigma; 40];
        let fit = linear_reheat_fit(&t, &y, &err).unwrap();
        let slope_sigma = fit.covariance[1][1].sqrt();
        assert!(fit.a1.abs() < 2.0 * slope_sigma, "slope {} vs sigma {slope_sigma}", fit.a1);
    }

    #[test]
    fn too_few_bins_or_bad_weights_are_rejected() {
        let t = [0.0, 1.0, 2.0, 3.0];
        assert!(linear_reheat_fit(&t, &[0.0; 4], &[1.0; 4]).is_err());
        let t5 = [0.0, 1.0, 2.0, 3.0, 4.0];
        let bad_err = [1.0, 1.0, -1.0, 1.0, 1.0];
        assert!(linear_reheat_fit(&t5, &[0.0; 5], &bad_err).is_err());
    }

    #[test]
    fn fit_coverage_is_calibrated() {
        // 1000 synthetic datasets: the 1-sigma interval on the slope must
        // cover the truth at the nominal 68% rate
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let t: Vec<f64> = (0..25).map(|i| i as f64 * 0.006).collect();
        let (a0, a1, sigma) = (0.04, 0.5, 0.008);
        let mut covered = 0usize;
        let repeats = 1000;
        for _ in 0..repeats {
            let y: Vec<f64> = t
                .iter()
                .map(|&tt| a0 + a1 * tt + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            let fit = linear_reheat_fit(&t, &y, &vec![sigma; t.len()]).unwrap();
            if (fit.a1 - a1).abs() <= fit.covariance[1][1].sqrt() {
                covered += 1;
            }
        }
        let frac = covered as f64 / repeats as f64;
        assert!(frac >= 0.68, "coverage {frac}");
        assert!(frac < 0.72, "coverage suspiciously high: {frac}");
    }

    #[test]
    fn sweep_fit_recovers_forward_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let truth_aph = PerAxis::new(0.09, 0.17, 0.49);
        let a2 = 2460.0; // K/s/Pa
        let pressures = [5e-6, 1.6e-5, 5e-5, 1.6e-4, 5e-4, 1.6e-3];
        let sigma = 0.02;
        let mut points = Vec::new();
        for &p in &pressures {
            for axis in Axis::ALL {
                let rate = truth_aph[axis]
                    + a2 * p
                    + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
                points.push(SweepPoint { pressure: p, axis, rate, stderr: sigma });
            }
        }
        let fit = pressure_sweep_fit(&points, false).unwrap();
        for axis in Axis::ALL {
            let pull = (fit.a_ph[axis] - truth_aph[axis]).abs() / fit.a_ph_stderr[axis];
            assert!(pull < 3.0, "axis {axis}: pull {pull}");
        }
        assert!((fit.a2 - a2).abs() / fit.a2_stderr < 3.0);

        let grouped = pressure_sweep_fit(&points, true).unwrap();
        assert_eq!(grouped.a_ph.y, grouped.a_ph.z);
        assert!(grouped.a_ph.x < grouped.a_ph.y);
    }

    #[test]
    fn sweep_fit_intercepts_are_unit_invariant() {
        // fitting in Pa or in mbar must give the same intercepts
        let truth_aph = PerAxis::new(0.09, 0.17, 0.49);
        let a2_pa = 2460.0;
        let pressures_pa = [5e-6, 2e-5, 8e-5, 3e-4, 1.2e-3];
        let mut pa_points = Vec::new();
        let mut mbar_points = Vec::new();
        for &p in &pressures_pa {
            for axis in Axis::ALL {
                let rate = truth_aph[axis] + a2_pa * p;
                pa_points.push(SweepPoint { pressure: p, axis, rate, stderr: 0.01 });
                mbar_points.push(SweepPoint { pressure: p / 100.0, axis, rate, stderr: 0.01 });
            }
        }
        let fit_pa = pressure_sweep_fit(&pa_points, false).unwrap();
        let fit_mbar = pressure_sweep_fit(&mbar_points, false).unwrap();
        for axis in Axis::ALL {
            assert!((fit_pa.a_ph[axis] - fit_mbar.a_ph[axis]).abs() < 1e-9);
        }
        assert!((fit_pa.a2 * 100.0 - fit_mbar.a2).abs() / fit_mbar.a2 < 1e-9);
        // crossovers agree after unit conversion
        assert!(
            (fit_pa.crossover_pressure(Axis::Z) / 100.0 / fit_mbar.crossover_pressure(Axis::Z)
                - 1.0)
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn sweep_fit_clamps_negative_intercepts_to_zero() {
        // x data generated with a negative intercept: the constrained fit
        // must pin a_ph^x at zero, not go negative
        let a2 = 2000.0;
        let pressures = [1e-5, 1e-4, 1e-3];
        let mut points = Vec::new();
        for &p in &pressures {
            for axis in Axis::ALL {
                let intercept = match axis {
                    Axis::X => -0.05,
                    Axis::Y => 0.2,
                    Axis::Z => 0.5,
                };
                points.push(SweepPoint { pressure: p, axis, rate: intercept + a2 * p, stderr: 0.01 });
            }
        }
        let fit = pressure_sweep_fit(&points, false).unwrap();
        assert_eq!(fit.a_ph.x, 0.0);
        assert!(fit.a_ph.y > 0.0 && fit.a_ph.z > 0.0);
    }

    #[test]
    fn sweep_fit_needs_a_pressure_decade() {
        let points: Vec<SweepPoint> = [1e-5, 2e-5, 4e-5]
            .iter()
            .map(|&p| SweepPoint { pressure: p, axis: Axis::X, rate: 0.1, stderr: 0.01 })
            .collect();
        assert!(pressure_sweep_fit(&points, false).is_err());
        let single: Vec<SweepPoint> = (0..3)
            .map(|_| SweepPoint { pressure: 1e-5, axis: Axis::X, rate: 0.1, stderr: 0.01 })
            .collect();
        assert!(pressure_sweep_fit(&single, false).is_err());
    }

    #[test]
    fn noise_scaling_selects_the_right_law() {
        let power: Vec<f64> = (1..=12).map(|i| i as f64 * 1e-3).collect();
        let laser: Vec<f64> =
            power.iter().map(|&p| crate::photonics::shot_noise_psd(p, crate::photonics::SourceKind::Laser, 1e-10, 3e-6)).collect();
        let thermal: Vec<f64> =
            power.iter().map(|&p| crate::photonics::shot_noise_psd(p, crate::photonics::SourceKind::Thermal, 1e-10, 4e-3)).collect();
        let f1 = noise_scaling_fit(&power, &laser).unwrap();
        assert_eq!(f1.exponent, 1.0);
        assert!(!f1.ambiguous);
        let f2 = noise_scaling_fit(&power, &thermal).unwrap();
        assert_eq!(f2.exponent, 2.0);
        assert!(!f2.ambiguous);
    }

    #[test]
    fn mixed_noise_data_is_flagged_ambiguous() {
        // crossover mix of the two pure laws, weighted so that neither
        // model wins decisively on this grid
        let power: Vec<f64> = (1..=12).map(|i| i as f64 * 1e-3).collect();
        let b1 = 3e-6;
        let b2 = b1 / 6.5e-3;
        let s: Vec<f64> = power
            .iter()
            .map(|&p| 1e-10 + 0.7 * b1 * p + 0.3 * b2 * p * p)
            .collect();
        let fit = noise_scaling_fit(&power, &s).unwrap();
        assert!(fit.ambiguous, "rss lin {:.3e} quad {:.3e}", fit.rss_linear, fit.rss_quadratic);
    }

    #[test]
    fn exponential_fit_recovers_relaxation() {
        let gamma = 0.63;
        let (t_inf, t_init) = (150.0, 0.4);
        let t: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> =
            t.iter().map(|&tt| t_inf + (t_init - t_inf) * (-gamma * tt).exp()).collect();
        let fit = exponential_relaxation_fit(&t, &y).unwrap();
        assert!(((fit.gamma - gamma) / gamma).abs() < 1e-6);
        assert!(((fit.t_equilibrium - t_inf) / t_inf).abs() < 1e-8);
        assert!((fit.t_initial - t_init).abs() < 1e-6);
    }
}
