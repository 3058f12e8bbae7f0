//! Ensemble simulation, center-of-mass thermometry and the release–reheat
//! protocol.
//!
//! Trajectories are independent work units. Each draws its noise from its
//! own counter-based RNG stream (`ChaCha8`, stream = trajectory index), so
//! an ensemble is bit-exact for a given `(config, seed)` regardless of how
//! rayon schedules the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::axis::{Axis, PerAxis};
use crate::constants::KB;
use crate::error::{Error, Result};

use super::integrator::AxisPropagator;
use super::{BathSpec, InitialState, SimulationConfig};

/// Position/velocity series of a single trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub position: PerAxis<Vec<f64>>,
    pub velocity: PerAxis<Vec<f64>>,
}

/// A simulated ensemble with its seed lineage.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    pub dt: f64,
    pub seed: u64,
    pub trajectories: Vec<Trajectory>,
}

impl TrajectoryEnsemble {
    pub fn n_steps(&self) -> usize {
        self.trajectories.first().map_or(0, |t| t.position.x.len())
    }
}

fn rng_for_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn initial_state(
    cfg: &SimulationConfig,
    bath: &BathSpec,
    rng: &mut ChaCha8Rng,
) -> PerAxis<(f64, f64)> {
    let mass = cfg.particle.mass();
    PerAxis::from_fn(|axis| match cfg.initial_state {
        InitialState::AtRest => (0.0, 0.0),
        InitialState::AtTemperature(t) => {
            AxisPropagator::sample_thermal_state(cfg.trap.omega[axis], mass, t[axis], rng)
        }
        InitialState::FeedbackSteadyState => AxisPropagator::sample_thermal_state(
            cfg.trap.omega[axis],
            mass,
            bath.effective_temperature(axis),
            rng,
        ),
    })
}

fn propagators(cfg: &SimulationConfig, bath: &BathSpec, dt: f64) -> Result<PerAxis<AxisPropagator>> {
    let mass = cfg.particle.mass();
    let built = PerAxis::from_fn(|axis| {
        AxisPropagator::new(
            cfg.trap.omega[axis],
            bath.gamma_total[axis],
            bath.effective_temperature(axis),
            mass,
            dt,
        )
    });
    Ok(PerAxis::new(built.x?, built.y?, built.z?))
}

/// Integrate the configured ensemble with feedback on, storing full
/// position and velocity series.
///
/// Memory guard: refuses ensembles above ~2 GB of stored samples; use the
/// streaming protocol runners for long or wide configurations.
pub fn simulate(cfg: &SimulationConfig) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    let n_steps = (cfg.duration / cfg.dt).round() as usize;
    if n_steps == 0 {
        return Err(Error::InvalidConfig("duration shorter than one step".into()));
    }
    let bytes = cfg.n_trajectories as u128 * n_steps as u128 * 6 * 8;
    if bytes > 2_000_000_000 {
        return Err(Error::InvalidConfig(format!(
            "ensemble would hold {bytes} bytes of samples; reduce n_trajectories or duration, \
             or use the streaming runners"
        )));
    }
    let bath = cfg.bath(true)?;
    let props = propagators(cfg, &bath, cfg.dt)?;

    let trajectories: Vec<Trajectory> = (0..cfg.n_trajectories as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = rng_for_stream(cfg.seed, stream);
            let mut state = initial_state(cfg, &bath, &mut rng);
            let mut pos = PerAxis::from_fn(|_| Vec::with_capacity(n_steps));
            let mut vel = PerAxis::from_fn(|_| Vec::with_capacity(n_steps));
            for _ in 0..n_steps {
                for axis in Axis::ALL {
                    let (q, v) = &mut state[axis];
                    props[axis].step(q, v, &mut rng);
                    pos[axis].push(*q);
                    vel[axis].push(*v);
                }
            }
            Trajectory { position: pos, velocity: vel }
        })
        .collect();

    Ok(TrajectoryEnsemble { dt: cfg.dt, seed: cfg.seed, trajectories })
}

/// Record one decimated position series along `axis` with feedback on
/// (streaming; memory goes as `n_steps/decimate`).
pub fn record_single_axis(cfg: &SimulationConfig, axis: Axis, decimate: usize) -> Result<(f64, Vec<f64>)> {
    cfg.validate()?;
    if decimate == 0 {
        return Err(Error::InvalidConfig("decimation factor must be >= 1".into()));
    }
    let n_steps = (cfg.duration / cfg.dt).round() as usize;
    let bath = cfg.bath(true)?;
    let props = propagators(cfg, &bath, cfg.dt)?;
    let mut rng = rng_for_stream(cfg.seed, 0);
    let mut state = initial_state(cfg, &bath, &mut rng);
    let mut out = Vec::with_capacity(n_steps / decimate + 1);
    for step in 0..n_steps {
        for ax in Axis::ALL {
            let (q, v) = &mut state[ax];
            props[ax].step(q, v, &mut rng);
        }
        if step % decimate == 0 {
            out.push(state[axis].0);
        }
    }
    Ok((cfg.dt * decimate as f64, out))
}

/// Ensemble-and-time averaged center-of-mass temperature
/// `T_cm = M ω_q² ⟨q²⟩ / k_B` over the sample range `range` of every
/// trajectory.
///
/// The range must span at least 10 oscillation periods of the axis, else
/// the phase of the oscillation biases the variance estimate.
pub fn cm_temperature(
    ensemble: &TrajectoryEnsemble,
    cfg: &SimulationConfig,
    range: std::ops::Range<usize>,
    axis: Axis,
) -> Result<f64> {
    let n_steps = ensemble.n_steps();
    if range.end > n_steps || range.start >= range.end {
        return Err(Error::InvalidConfig(format!(
            "sample range {range:?} outside the ensemble (0..{n_steps})"
        )));
    }
    let omega = cfg.trap.omega[axis];
    let span = (range.end - range.start) as f64 * ensemble.dt;
    let min_span = 10.0 * 2.0 * std::f64::consts::PI / omega;
    if span < min_span {
        return Err(Error::EstimatorVariance(format!(
            "segment of {span:.3e} s covers fewer than 10 periods ({min_span:.3e} s) of axis {axis}"
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for traj in &ensemble.trajectories {
        for &q in &traj.position[axis][range.clone()] {
            sum += q * q;
            count += 1;
        }
    }
    let mean_q2 = sum / count as f64;
    Ok(cfg.particle.mass() * omega * omega * mean_q2 / KB)
}

/// Time-binned reheat curves averaged over release repeats.
#[derive(Debug, Clone)]
pub struct ReheatResult {
    /// Bin centers, s (time since feedback switch-off).
    pub time: Vec<f64>,
    /// Mean center-of-mass temperature per axis and bin, K.
    pub mean: PerAxis<Vec<f64>>,
    /// Standard error of the mean per axis and bin, K.
    pub stderr: PerAxis<Vec<f64>>,
    /// Per-repeat, per-bin temperatures (repeat-major), for resampling.
    pub per_repeat: PerAxis<Vec<Vec<f64>>>,
    /// Set when the window is long enough that the linear-regime reading of
    /// the curves starts to bend (window vs 2π/γ_q).
    pub linear_regime_warning: Option<String>,
}

impl ReheatResult {
    /// Ordinary least squares slope of the binned means, K/s (quick look;
    /// the analysis module holds the weighted fit).
    pub fn slope(&self, axis: Axis) -> f64 {
        let t_mean = self.time.iter().sum::<f64>() / self.time.len() as f64;
        let y = &self.mean[axis];
        let y_mean = y.iter().sum::<f64>() / y.len() as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for (t, v) in self.time.iter().zip(y) {
            num += (t - t_mean) * (v - y_mean);
            den += (t - t_mean) * (t - t_mean);
        }
        num / den
    }
}

/// Release–reheat protocol: prepare the feedback-cooled steady state,
/// switch feedback off, record `window` seconds of free heating, repeat
/// `n_repeats` times and average the time-binned center-of-mass
/// temperatures.
///
/// Repeats are realized as independent ensemble members (the dynamics are
/// ergodic and linear, so sequential releases of one particle and an
/// ensemble of releases have identical statistics).
pub fn reheat_protocol(
    cfg: &SimulationConfig,
    n_repeats: usize,
    window: f64,
    n_bins: usize,
) -> Result<ReheatResult> {
    if !(window > 0.0) {
        return Err(Error::InvalidConfig("release window must be > 0".into()));
    }
    if n_repeats == 0 || n_bins == 0 {
        return Err(Error::InvalidConfig("need at least one repeat and one bin".into()));
    }
    let mut probe = cfg.clone();
    probe.duration = window;
    probe.n_trajectories = n_repeats;
    probe.validate()?;

    let bath_cooled = cfg.bath(true)?;
    let bath_free = cfg.bath(false)?;
    let props = propagators(cfg, &bath_free, cfg.dt)?;
    let n_steps = (window / cfg.dt).round() as usize;
    let steps_per_bin = (n_steps / n_bins).max(1);
    let n_bins = n_steps / steps_per_bin;
    let mass = cfg.particle.mass();

    // repeat-major per-bin mean of q^2 for each axis
    let per_repeat_raw: Vec<PerAxis<Vec<f64>>> = (0..n_repeats as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = rng_for_stream(cfg.seed, stream);
            let mut state = initial_state(cfg, &bath_cooled, &mut rng);
            let mut bins = PerAxis::from_fn(|_| vec![0.0f64; n_bins]);
            for step in 0..n_bins * steps_per_bin {
                let bin = step / steps_per_bin;
                for axis in Axis::ALL {
                    let (q, v) = &mut state[axis];
                    props[axis].step(q, v, &mut rng);
                    bins[axis][bin] += *q * *q;
                }
            }
            bins.map(|b| b.iter().map(|&s| s / steps_per_bin as f64).collect())
        })
        .collect();

    let time: Vec<f64> =
        (0..n_bins).map(|b| (b as f64 + 0.5) * steps_per_bin as f64 * cfg.dt).collect();

    let mut mean = PerAxis::from_fn(|_| vec![0.0; n_bins]);
    let mut stderr = PerAxis::from_fn(|_| vec![0.0; n_bins]);
    let mut per_repeat = PerAxis::from_fn(|_| Vec::with_capacity(n_repeats));
    for axis in Axis::ALL {
        let omega2 = cfg.trap.omega[axis] * cfg.trap.omega[axis];
        let to_kelvin = mass * omega2 / KB;
        let rows: Vec<Vec<f64>> = per_repeat_raw
            .iter()
            .map(|r| r[axis].iter().map(|&q2| q2 * to_kelvin).collect())
            .collect();
        for b in 0..n_bins {
            let vals: Vec<f64> = rows.iter().map(|r| r[b]).collect();
            let m = vals.iter().sum::<f64>() / n_repeats as f64;
            let var = if n_repeats > 1 {
                vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n_repeats - 1) as f64
            } else {
                0.0
            };
            mean[axis][b] = m;
            stderr[axis][b] = (var / n_repeats as f64).sqrt();
        }
        per_repeat[axis] = rows;
    }

    // linear-regime check: window must stay well below the relaxation time
    let mut warning = None;
    for axis in Axis::ALL {
        let relax = 2.0 * std::f64::consts::PI / bath_free.gamma_total[axis];
        if window >= 0.01 * relax {
            warning = Some(format!(
                "window {window:.3} s is not small against the relaxation time 2pi/gamma = {relax:.3} s \
                 on axis {axis}; the reheat curve bends away from a line"
            ));
        }
    }

    Ok(ReheatResult { time, mean, stderr, per_repeat, linear_regime_warning: warning })
}

/// Time-binned free relaxation of one axis from the configured initial
/// state towards the bath equilibrium (feedback off).
#[derive(Debug, Clone)]
pub struct RelaxationResult {
    pub time: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// Free evolution of `axis` over `duration`, binned into `n_bins`
/// temperatures. Streaming: memory is O(n_repeats × n_bins).
pub fn relaxation_run(
    cfg: &SimulationConfig,
    axis: Axis,
    duration: f64,
    n_bins: usize,
    n_repeats: usize,
) -> Result<RelaxationResult> {
    let mut probe = cfg.clone();
    probe.duration = duration;
    probe.n_trajectories = n_repeats;
    probe.validate()?;

    let bath_cooled = cfg.bath(true)?;
    let bath_free = cfg.bath(false)?;
    let prop = {
        let all = propagators(cfg, &bath_free, cfg.dt)?;
        all[axis]
    };
    let n_steps = (duration / cfg.dt).round() as usize;
    let steps_per_bin = (n_steps / n_bins).max(1);
    let n_bins = n_steps / steps_per_bin;
    let mass = cfg.particle.mass();
    let omega = cfg.trap.omega[axis];

    let rows: Vec<Vec<f64>> = (0..n_repeats as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = rng_for_stream(cfg.seed, stream);
            let full = initial_state(cfg, &bath_cooled, &mut rng);
            let (mut q, mut v) = full[axis];
            let mut bins = vec![0.0f64; n_bins];
            for step in 0..n_bins * steps_per_bin {
                prop.step(&mut q, &mut v, &mut rng);
                bins[step / steps_per_bin] += q * q;
            }
            let to_kelvin = mass * omega * omega / (KB * steps_per_bin as f64);
            bins.into_iter().map(|s| s * to_kelvin).collect()
        })
        .collect();

    let time: Vec<f64> =
        (0..n_bins).map(|b| (b as f64 + 0.5) * steps_per_bin as f64 * cfg.dt).collect();
    let mut mean = vec![0.0; n_bins];
    let mut stderr = vec![0.0; n_bins];
    for b in 0..n_bins {
        let vals: Vec<f64> = rows.iter().map(|r| r[b]).collect();
        let m = vals.iter().sum::<f64>() / n_repeats as f64;
        let var = if n_repeats > 1 {
            vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n_repeats - 1) as f64
        } else {
            0.0
        };
        mean[b] = m;
        stderr[b] = (var / n_repeats as f64).sqrt();
    }
    Ok(RelaxationResult { time, mean, stderr })
}
