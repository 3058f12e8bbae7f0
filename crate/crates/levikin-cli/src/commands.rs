//! The six subcommands: rates, simulate, reheat, sweep, psd, fit.

use std::path::Path;

use serde_json::json;

use levikin::analysis::{
    linear_reheat_fit, lorentzian_fit, pressure_sweep_fit, radius_from_linewidth, welch_psd,
    SweepPoint, Window,
};
use levikin::dynamics::{reheat_protocol, simulate, trace, SimulationConfig};
use levikin::photonics::{focal_intensity, SourceKind};
use levikin::scattering::{
    equilibrium_temperature, equilibrium_temperature_balance, lambda_coefficients,
    recoil_heating_closed_form, recoil_heating_quadrature, HeatingRates,
};
use levikin::{Axis, Error, PerAxis};

use crate::output::{fmt, OutDir};
use crate::scenario::Scenario;

pub type RunResult = Result<(), RunError>;

/// Post-parse failures, split by exit code: configuration/usage problems
/// exit 2, numeric and convergence problems exit 3.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numeric(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) | RunError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::Stability(_) => RunError::Config(e.to_string()),
            other => RunError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Numeric(format!("io error: {e}"))
    }
}

fn rates_rows(rates: &HeatingRates) -> Vec<String> {
    Axis::ALL
        .iter()
        .map(|&axis| {
            format!(
                "{},{},{},{},{}",
                axis,
                fmt(rates.gamma_ph[axis]),
                fmt(rates.dtdt[axis]),
                fmt(rates.ratios[axis]),
                rates.method.label()
            )
        })
        .collect()
}

fn rates_json(rates: &HeatingRates) -> serde_json::Value {
    json!({
        "method": rates.method.label(),
        "gamma_ph_per_s": {"x": rates.gamma_ph.x, "y": rates.gamma_ph.y, "z": rates.gamma_ph.z},
        "dTdt_K_per_s": {"x": rates.dtdt.x, "y": rates.dtdt.y, "z": rates.dtdt.z},
        "ratio_to_x": {"x": rates.ratios.x, "y": rates.ratios.y, "z": rates.ratios.z},
    })
}

/// `rates`: closed-form and quadrature recoil rates, ratios, prefactor and
/// equilibrium temperature.
pub fn cmd_rates(scenario: &Scenario, out: &OutDir, oracle: bool) -> RunResult {
    let particle = scenario.particle().map_err(|e| RunError::Config(e.0))?;
    let source = scenario.source().map_err(|e| RunError::Config(e.0))?;
    let trap = scenario.trap().map_err(|e| RunError::Config(e.0))?;
    let grid = scenario.quadrature().map_err(|e| RunError::Config(e.0))?;

    let closed = recoil_heating_closed_form(&particle, &source, &trap)?;
    let quad = recoil_heating_quadrature(&particle, &source, &trap, &grid)?;

    let mut rows = rates_rows(&closed);
    rows.extend(rates_rows(&quad));
    let csv = out.write_csv(
        "rates.csv",
        "axis,gamma_ph_per_s,dTdt_K_per_s,ratio_to_x,method",
        &rows,
    )?;

    let lambda = lambda_coefficients(trap.theta_mx);
    let mut summary = json!({
        "lambda": {"x": lambda[0], "y": lambda[1], "z": lambda[2]},
        "focal_intensity_W_per_m2": focal_intensity(&source),
        "closed_form": rates_json(&closed),
        "quadrature": rates_json(&quad),
    });
    if source.kind() == SourceKind::Thermal {
        summary["recoil_prefactor"] = json!(source.recoil_prefactor()?);
        summary["equilibrium_temperature_K"] = json!(equilibrium_temperature(&source)?);
    }
    if oracle {
        let fine = recoil_heating_quadrature(&particle, &source, &trap, &grid.doubled())?;
        let rel = PerAxis::from_fn(|axis| ((quad.dtdt[axis] - fine.dtdt[axis]) / fine.dtdt[axis]).abs());
        summary["oracle"] = json!({
            "doubled_grid": rates_json(&fine),
            "relative_change": {"x": rel.x, "y": rel.y, "z": rel.z},
        });
        if source.kind() == SourceKind::Thermal {
            let balance = equilibrium_temperature_balance(&particle, &source, &trap, &grid)?;
            summary["oracle"]["equilibrium_balance_K"] = json!(balance);
        }
    }
    let js = out.write_json("rates.json", &summary)?;
    eprintln!("wrote {} and {}", csv.display(), js.display());
    Ok(())
}

fn binned_csv_rows(time: &[f64], mean: &PerAxis<Vec<f64>>, stderr: &PerAxis<Vec<f64>>) -> Vec<String> {
    let mut rows = Vec::with_capacity(time.len() * 3);
    for (i, &t) in time.iter().enumerate() {
        for axis in Axis::ALL {
            rows.push(format!(
                "{},{},{},{}",
                fmt(t),
                axis,
                fmt(mean[axis][i]),
                fmt(stderr[axis][i])
            ));
        }
    }
    rows
}

/// `simulate`: feedback-on ensemble, binned center-of-mass temperatures,
/// optional binary trace of the first trajectory.
pub fn cmd_simulate(
    scenario: &Scenario,
    out: &OutDir,
    seed: Option<u64>,
    trace_path: Option<&Path>,
) -> RunResult {
    let cfg = scenario.simulation(seed).map_err(|e| RunError::Config(e.0))?;
    let ens = simulate(&cfg)?;
    let n_bins = scenario.simulation.n_bins.max(1);
    let n_steps = ens.n_steps();
    let steps_per_bin = (n_steps / n_bins).max(1);
    let n_bins = n_steps / steps_per_bin;
    let mass = cfg.particle.mass();

    let mut time = Vec::with_capacity(n_bins);
    let mut mean = PerAxis::from_fn(|_| vec![0.0; n_bins]);
    let mut stderr = PerAxis::from_fn(|_| vec![0.0; n_bins]);
    for b in 0..n_bins {
        time.push((b as f64 + 0.5) * steps_per_bin as f64 * cfg.dt);
        for axis in Axis::ALL {
            let omega2 = cfg.trap.omega[axis] * cfg.trap.omega[axis];
            let to_kelvin = mass * omega2 / levikin::constants::KB;
            let vals: Vec<f64> = ens
                .trajectories
                .iter()
                .map(|tr| {
                    let seg = &tr.position[axis][b * steps_per_bin..(b + 1) * steps_per_bin];
                    to_kelvin * seg.iter().map(|q| q * q).sum::<f64>() / steps_per_bin as f64
                })
                .collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = if vals.len() > 1 {
                vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (vals.len() - 1) as f64
            } else {
                0.0
            };
            mean[axis][b] = m;
            stderr[axis][b] = (var / vals.len() as f64).sqrt();
        }
    }
    let csv = out.write_csv(
        "simulate.csv",
        "time_s,axis,T_cm_K,stderr_K",
        &binned_csv_rows(&time, &mean, &stderr),
    )?;
    eprintln!("wrote {}", csv.display());

    if let Some(path) = trace_path {
        let first = &ens.trajectories[0];
        let axes = vec![
            first.position.x.clone(),
            first.position.y.clone(),
            first.position.z.clone(),
        ];
        trace::write_trace(path, ens.dt, &axes)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// `reheat`: release–reheat protocol, time-binned temperatures per axis.
pub fn cmd_reheat(scenario: &Scenario, out: &OutDir, seed: Option<u64>) -> RunResult {
    let cfg = scenario.simulation(seed).map_err(|e| RunError::Config(e.0))?;
    let res = reheat_protocol(
        &cfg,
        scenario.simulation.n_repeats,
        scenario.simulation.window_s,
        scenario.simulation.n_bins,
    )?;
    if let Some(w) = &res.linear_regime_warning {
        eprintln!("warning: {w}");
    }
    let csv = out.write_csv(
        "reheat.csv",
        "time_s,axis,T_cm_K,stderr_K",
        &binned_csv_rows(&res.time, &res.mean, &res.stderr),
    )?;
    eprintln!("wrote {}", csv.display());
    Ok(())
}

/// `sweep`: reheat slopes across pressures plus the shared-slope fit.
pub fn cmd_sweep(
    scenario: &Scenario,
    out: &OutDir,
    seed: Option<u64>,
    pressures_override: Option<(Vec<f64>, PressureUnit)>,
) -> RunResult {
    let base = scenario.simulation(seed).map_err(|e| RunError::Config(e.0))?;
    let pressures_pa: Vec<f64> = match &pressures_override {
        Some((values, unit)) => values.iter().map(|&p| unit.to_pa(p)).collect(),
        None => scenario.sweep.pressures_mbar.iter().map(|&p| p * 100.0).collect(),
    };
    if pressures_pa.is_empty() {
        return Err(RunError::Config("sweep needs at least one pressure".into()));
    }

    let mut rows = Vec::new();
    let mut points = Vec::new();
    for (i, &p_pa) in pressures_pa.iter().enumerate() {
        let mut cfg: SimulationConfig = base.clone();
        cfg.gas = scenario.gas_at(p_pa).map_err(|e| RunError::Config(e.0))?;
        cfg.seed = base.seed.wrapping_add(i as u64 * 1_000_003);
        let res = reheat_protocol(
            &cfg,
            scenario.sweep.n_repeats,
            scenario.sweep.window_s,
            scenario.simulation.n_bins,
        )?;
        for axis in Axis::ALL {
            let fit = linear_reheat_fit(&res.time, &res.mean[axis], &res.stderr[axis])?;
            let stderr = fit.covariance[1][1].sqrt();
            rows.push(format!(
                "{},{},{},{},{}",
                fmt(p_pa / 100.0),
                fmt(p_pa),
                axis,
                fmt(fit.a1),
                fmt(stderr)
            ));
            points.push(SweepPoint { pressure: p_pa, axis, rate: fit.a1, stderr });
        }
    }
    let csv = out.write_csv(
        "sweep.csv",
        "pressure_mbar,pressure_pa,axis,reheat_rate_K_per_s,stderr_K_per_s",
        &rows,
    )?;

    let fit = pressure_sweep_fit(&points, scenario.sweep.group_yz)?;
    let summary = json!({
        "a_ph": {"x": fit.a_ph.x, "y": fit.a_ph.y, "z": fit.a_ph.z},
        "a_ph_stderr": {"x": fit.a_ph_stderr.x, "y": fit.a_ph_stderr.y, "z": fit.a_ph_stderr.z},
        "a2_K_per_s_per_Pa": fit.a2,
        "a2_stderr": fit.a2_stderr,
        "a2_K_per_s_per_mbar": fit.a2 * 100.0,
        "grouped_yz": fit.grouped_yz,
        "crossover_mbar": {
            "x": fit.crossover_pressure(Axis::X) / 100.0,
            "y": fit.crossover_pressure(Axis::Y) / 100.0,
            "z": fit.crossover_pressure(Axis::Z) / 100.0,
        },
    });
    let js = out.write_json("sweep_fit.json", &summary)?;
    eprintln!("wrote {} and {}", csv.display(), js.display());
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureUnit {
    Mbar,
    Pa,
}

impl PressureUnit {
    fn to_pa(self, v: f64) -> f64 {
        match self {
            PressureUnit::Mbar => v * 100.0,
            PressureUnit::Pa => v,
        }
    }
}

impl std::str::FromStr for PressureUnit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mbar" => Ok(PressureUnit::Mbar),
            "pa" => Ok(PressureUnit::Pa),
            other => Err(format!("unknown pressure unit {other:?} (use mbar or pa)")),
        }
    }
}

/// `psd`: spectral density of a single recorded trajectory plus the
/// Lorentzian line fit and the implied sphere radius.
pub fn cmd_psd(
    scenario: &Scenario,
    out: &OutDir,
    seed: Option<u64>,
    axis: Axis,
    decimate: usize,
    n_segments: usize,
) -> RunResult {
    let cfg = scenario.simulation(seed).map_err(|e| RunError::Config(e.0))?;
    let (dt_eff, series) = levikin::dynamics::record_single_axis(&cfg, axis, decimate)?;
    let psd = welch_psd(&series, dt_eff, n_segments, Window::Hann)?;
    let rows: Vec<String> = psd
        .frequency
        .iter()
        .zip(&psd.psd)
        .map(|(&f, &s)| format!("{},{}", fmt(f), fmt(s)))
        .collect();
    let csv = out.write_csv("psd.csv", "frequency_hz,psd_m2_per_hz", &rows)?;

    let mut summary = json!({
        "axis": axis.label(),
        "n_segments": psd.n_segments,
        "df_hz": psd.df,
        "parseval_ratio": psd.parseval_ratio,
    });
    match lorentzian_fit(&psd) {
        Ok(fit) => {
            let radius = radius_from_linewidth(fit.gamma, &cfg.gas, cfg.particle.density)?;
            summary["lorentzian"] = json!({
                "omega0_rad_per_s": fit.omega0,
                "f0_hz": fit.omega0 / (2.0 * std::f64::consts::PI),
                "gamma_rad_per_s": fit.gamma,
                "linewidth_hz": fit.gamma / (2.0 * std::f64::consts::PI),
                "plateau": fit.plateau,
                "radius_from_linewidth_nm": radius * 1e9,
            });
        }
        Err(e) => {
            summary["lorentzian_error"] = json!(e.to_string());
        }
    }
    let js = out.write_json("psd_fit.json", &summary)?;
    eprintln!("wrote {} and {}", csv.display(), js.display());
    Ok(())
}

/// `fit`: refit CSV output of `reheat` or `sweep`.
pub fn cmd_fit(input: &Path, out: &OutDir, mode: FitMode, group_yz: bool) -> RunResult {
    let text = std::fs::read_to_string(input)
        .map_err(|e| RunError::Config(format!("cannot read {}: {e}", input.display())))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| RunError::Config("empty input".into()))?;
    match mode {
        FitMode::Reheat => {
            if header != "time_s,axis,T_cm_K,stderr_K" {
                return Err(RunError::Config(format!("unexpected reheat header: {header}")));
            }
            let mut per_axis: PerAxis<(Vec<f64>, Vec<f64>, Vec<f64>)> = PerAxis::default();
            for line in lines {
                let mut parts = line.split(',');
                let t: f64 = parse_field(&mut parts, line)?;
                let axis: Axis = parts
                    .next()
                    .ok_or_else(|| RunError::Config(format!("short row: {line}")))?
                    .parse()
                    .map_err(RunError::Config)?;
                let v: f64 = parse_field(&mut parts, line)?;
                let e: f64 = parse_field(&mut parts, line)?;
                per_axis[axis].0.push(t);
                per_axis[axis].1.push(v);
                per_axis[axis].2.push(e);
            }
            let mut summary = json!({});
            for axis in Axis::ALL {
                let (t, v, e) = &per_axis[axis];
                let fit = linear_reheat_fit(t, v, e)?;
                summary[axis.label()] = json!({
                    "a0_K": fit.a0,
                    "a1_K_per_s": fit.a1,
                    "cov": fit.covariance,
                    "residual_variance": fit.residual_variance,
                });
            }
            let js = out.write_json("reheat_fit.json", &summary)?;
            eprintln!("wrote {}", js.display());
        }
        FitMode::Sweep => {
            if header != "pressure_mbar,pressure_pa,axis,reheat_rate_K_per_s,stderr_K_per_s" {
                return Err(RunError::Config(format!("unexpected sweep header: {header}")));
            }
            let mut points = Vec::new();
            for line in lines {
                let mut parts = line.split(',');
                let _p_mbar: f64 = parse_field(&mut parts, line)?;
                let p_pa: f64 = parse_field(&mut parts, line)?;
                let axis: Axis = parts
                    .next()
                    .ok_or_else(|| RunError::Config(format!("short row: {line}")))?
                    .parse()
                    .map_err(RunError::Config)?;
                let rate: f64 = parse_field(&mut parts, line)?;
                let stderr: f64 = parse_field(&mut parts, line)?;
                points.push(SweepPoint { pressure: p_pa, axis, rate, stderr });
            }
            let fit = pressure_sweep_fit(&points, group_yz)?;
            let summary = json!({
                "a_ph": {"x": fit.a_ph.x, "y": fit.a_ph.y, "z": fit.a_ph.z},
                "a2": fit.a2,
                "cov": {
                    "a_ph_stderr": {"x": fit.a_ph_stderr.x, "y": fit.a_ph_stderr.y, "z": fit.a_ph_stderr.z},
                    "a2_stderr": fit.a2_stderr,
                },
                "grouped_yz": fit.grouped_yz,
            });
            let js = out.write_json("sweep_fit.json", &summary)?;
            eprintln!("wrote {}", js.display());
        }
    }
    Ok(())
}

fn parse_field<'a>(
    parts: &mut impl Iterator<Item = &'a str>,
    line: &str,
) -> Result<f64, RunError> {
    parts
        .next()
        .ok_or_else(|| RunError::Config(format!("short row: {line}")))?
        .parse()
        .map_err(|e| RunError::Config(format!("bad number in row {line:?}: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMode {
    Reheat,
    Sweep,
}

impl std::str::FromStr for FitMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "reheat" => Ok(FitMode::Reheat),
            "sweep" => Ok(FitMode::Sweep),
            other => Err(format!("unknown fit mode {other:?} (use reheat or sweep)")),
        }
    }
}
