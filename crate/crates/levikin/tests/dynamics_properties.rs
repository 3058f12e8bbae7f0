//! Distribution-level properties of the simulated dynamics: the steady
//! state spectrum against the analytic line shape, and step-size
//! independence of the reheat slope.

use levikin::analysis::{stats::ks_test_unit_exponential, welch_psd, Window};
use levikin::dynamics::{record_single_axis, reheat_protocol, InitialState, SimulationConfig};
use levikin::environment::GasState;
use levikin::photonics::{GainProfile, LightSourceSpec, DEFAULT_WAIST_AREA};
use levikin::scattering::{ParticleSpec, TrapConfig};
use levikin::{Axis, PerAxis};

fn base_config() -> SimulationConfig {
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
        gas: GasState::nitrogen_mbar(5.0).unwrap(),
        feedback_damping: PerAxis::new(0.0, 0.0, 0.0),
        dt: 1e-7,
        duration: 0.1,
        seed: 1,
        n_trajectories: 1,
        photon_damping_inflation: 1.0,
        initial_state: InitialState::FeedbackSteadyState,
    }
}

/// Whitened periodogram of the steady-state motion at 5 mbar follows the
/// unit exponential, i.e. the simulated spectrum matches the analytic
/// damped-oscillator line shape bin by bin.
#[test]
fn steady_state_psd_matches_analytic_lorentzian() {
    let mut cfg = base_config();
    cfg.seed = 20_24;
    let decimate = 4usize;
    let n_samples = 1usize << 20;
    cfg.duration = n_samples as f64 * decimate as f64 * cfg.dt;
    let (dt_eff, series) = record_single_axis(&cfg, Axis::X, decimate).unwrap();
    assert!(series.len() >= n_samples);

    // single Hann-windowed periodogram
    let psd = welch_psd(&series[..n_samples], dt_eff, 1, Window::Hann).unwrap();
    let bath = cfg.bath(true).unwrap();
    let gamma = bath.gamma_total.x;
    let t_eff = bath.effective_temperature(Axis::X);
    let mass = cfg.particle.mass();
    let omega0 = cfg.trap.omega.x;

    // the sampled process carries the folded spectrum; a few images cover
    // the 1/omega^4 tails
    let fs = 1.0 / dt_eff;
    let folded_model = |f: f64| -> f64 {
        (-3i32..=3)
            .map(|j| {
                let fj = (f + j as f64 * fs).abs();
                levikin::analysis::lorentzian_psd_model(fj, mass, omega0, gamma, t_eff)
            })
            .sum()
    };
    // every 3rd bin: Hann spectral leakage correlates neighbours up to
    // offset 2, bins at stride 3 are uncorrelated
    let whitened: Vec<f64> = (1..psd.psd.len() - 1)
        .step_by(3)
        .map(|k| psd.psd[k] / folded_model(psd.frequency[k]))
        .collect();
    let mean = whitened.iter().sum::<f64>() / whitened.len() as f64;
    assert!(
        (mean - 1.0).abs() < 0.01,
        "whitened periodogram mean {mean} (spectral scale off)"
    );
    let p = ks_test_unit_exponential(&whitened);
    assert!(p > 0.01, "KS p-value {p:.4} on {} bins", whitened.len());
}

/// The exact propagator carries no step-size bias: the same reheat slope
/// (within ensemble noise) emerges at dt and dt/2.
#[test]
fn reheat_slope_independent_of_time_step() {
    let mut cfg = base_config();
    // inflated photon damping at a softened trap brings the relaxation to
    // desk scale so the slope is measured quickly
    cfg.trap = TrapConfig::new(
        PerAxis::new(
            2.0 * std::f64::consts::PI * 1.5e3,
            2.0 * std::f64::consts::PI * 1.5e3,
            2.0 * std::f64::consts::PI * 1.5e3,
        ),
        0.43,
        0.77,
    )
    .unwrap();
    cfg.gas = GasState::nitrogen_mbar(4e-7).unwrap();
    cfg.photon_damping_inflation = 300.0;
    cfg.initial_state = InitialState::AtRest;
    cfg.seed = 5;

    let window = 0.02;
    let mut slopes = Vec::new();
    for dt in [1e-5, 5e-6] {
        cfg.dt = dt;
        let res = reheat_protocol(&cfg, 50_000, window, 10).unwrap();
        slopes.push(res.slope(Axis::Z));
    }
    let rel = (slopes[0] / slopes[1] - 1.0).abs();
    assert!(
        rel < 0.01,
        "slope at dt {} vs dt/2 {} K/s: {:.3}% apart",
        slopes[0],
        slopes[1],
        rel * 100.0
    );
}
