//! `levikin` — scenario-driven front end for recoil-heating rates,
//! Langevin ensembles, the release–reheat protocol, pressure sweeps,
//! spectral estimation and fits.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric or convergence
//! error.

mod commands;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{FitMode, PressureUnit};
use levikin::Axis;
use output::OutDir;
use scenario::Scenario;

#[derive(Parser)]
#[command(name = "levikin", version, about = "Thermal-light levitation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and quadrature recoil-heating rates.
    Rates {
        #[command(flatten)]
        common: Common,
        /// Re-run at doubled quadrature resolution and report convergence.
        #[arg(long)]
        oracle: bool,
    },
    /// Feedback-on ensemble with binned center-of-mass temperatures.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Dump the first trajectory as a binary trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Release–reheat protocol.
    Reheat {
        #[command(flatten)]
        common: Common,
    },
    /// Reheat slopes across a pressure sweep plus the shared-slope fit.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated pressures overriding the scenario sweep list.
        #[arg(long, value_delimiter = ',')]
        pressures: Option<Vec<f64>>,
        /// Unit of --pressures.
        #[arg(long, default_value = "mbar")]
        pressure_unit: PressureUnit,
    },
    /// Power spectral density of one recorded axis plus the line fit.
    Psd {
        #[command(flatten)]
        common: Common,
        /// Which axis to record.
        #[arg(long, default_value = "x")]
        axis: Axis,
        /// Keep every n-th sample.
        #[arg(long, default_value_t = 8)]
        decimate: usize,
        /// Welch segments.
        #[arg(long, default_value_t = 32)]
        segments: usize,
    },
    /// Refit CSV output of `reheat` or `sweep`.
    Fit {
        /// Input CSV.
        #[arg(long)]
        input: PathBuf,
        /// reheat or sweep.
        #[arg(long)]
        mode: FitMode,
        /// Share one intercept between y and z (sweep mode).
        #[arg(long, default_value_t = false)]
        group_yz: bool,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        // ignore failure if a pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn load(common: &Common) -> Result<(Scenario, OutDir), ExitCode> {
    let scenario = match Scenario::from_path(&common.config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return Err(ExitCode::from(2));
        }
    };
    let out = match OutDir::new(&common.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cannot create output directory: {e}");
            return Err(ExitCode::from(2));
        }
    };
    init_threads(common.threads);
    Ok((scenario, out))
}

fn finish(result: commands::RunResult) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Rates { common, oracle } => {
            let (scenario, out) = match load(&common) {
                Ok(v) => v,
                Err(code) => return code,
            };
            finish(commands::cmd_rates(&scenario, &out, oracle))
        }
        Command::Simulate { common, trace } => {
            let (scenario, out) = match load(&common) {
                Ok(v) => v,
                Err(code) => return code,
            };
            finish(commands::cmd_simulate(&scenario, &out, common.seed, trace.as_deref()))
        }
        Command::Reheat { common } => {
            let (scenario, out) = match load(&common) {
                Ok(v) => v,
                Err(code) => return code,
            };
            finish(commands::cmd_reheat(&scenario, &out, common.seed))
        }
        Command::Sweep { common, pressures, pressure_unit } => {
            let (scenario, out) = match load(&common) {
                Ok(v) => v,
                Err(code) => return code,
            };
            let over = pressures.map(|p| (p, pressure_unit));
            finish(commands::cmd_sweep(&scenario, &out, common.seed, over))
        }
        Command::Psd { common, axis, decimate, segments } => {
            let (scenario, out) = match load(&common) {
                Ok(v) => v,
                Err(code) => return code,
            };
            finish(commands::cmd_psd(&scenario, &out, common.seed, axis, decimate, segments))
        }
        Command::Fit { input, mode, group_yz, out } => {
            let out = match OutDir::new(&out) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("cannot create output directory: {e}");
                    return ExitCode::from(2);
                }
            };
            finish(commands::cmd_fit(&input, &out, mode, group_yz))
        }
    }
}
