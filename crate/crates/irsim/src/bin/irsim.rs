//! Batch CLI for the simulator. Every command emits one CSV document to
//! stdout or `--out`. Exit codes: 0 success, 2 configuration/usage error,
//! 3 infeasible power control under `--strict`.

use clap::{Parser, Subcommand, ValueEnum};
use irsim::montecarlo::{ErrorMode, McConfig};
use irsim::report::{
    run_analyze, run_compare, run_power_control, run_preset, run_simulate, run_sweep,
    PresetOptions, SweepParam, SweepSpec,
};
use irsim::scenario::ScenarioConfig;
use irsim::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "irsim",
    version,
    about = "Location-aided multi-IRS downlink analyzer",
    after_help = "Scenario files are flat `key = value` documents; every key \
                  defaults to the built-in reference deployment. See the \
                  repository README and scenarios/ for the schema."
)]
struct Cli {
    /// Scenario document; omitted means the built-in reference deployment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the scenario's RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Monte Carlo location-error draws [default: 200; presets have their own].
    #[arg(long = "mc-loc", global = true)]
    mc_loc: Option<usize>,

    /// Monte Carlo fading draws per location draw [default: 1000; presets
    /// have their own].
    #[arg(long = "mc-fade", global = true)]
    mc_fade: Option<usize>,

    /// Angle-error model used by Monte Carlo runs.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Linearized)]
    mode: ModeArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Linearized,
    Exact,
}

impl From<ModeArg> for ErrorMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Linearized => ErrorMode::LinearizedError,
            ModeArg::Exact => ErrorMode::ExactGeometry,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form rate breakdown of the scenario.
    Analyze,
    /// Monte Carlo estimate of the rate breakdown.
    Simulate,
    /// Closed form and Monte Carlo side by side with relative gaps.
    Compare,
    /// Minimum-power allocation for common per-user rate targets.
    Power {
        /// Rate targets in bits/s/Hz, e.g. `--targets 0.5,1,1.5`.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<f64>,
        /// Exit with code 3 if any target is infeasible.
        #[arg(long)]
        strict: bool,
    },
    /// Reproduce a named figure: fig2..fig8.
    Preset { name: String },
    /// Sweep one parameter over explicit values.
    Sweep {
        /// One of rho_d_dbm, upsilon, m, n, v, rate_target.
        #[arg(long)]
        param: String,
        /// Comma-separated values; `inf` is accepted for `v`.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
}

fn load(cli: &Cli) -> Result<ScenarioConfig> {
    let mut sc = match &cli.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::table1(),
    };
    if let Some(seed) = cli.seed {
        sc.seed = seed;
    }
    Ok(sc)
}

fn mc_config(cli: &Cli, sc: &ScenarioConfig) -> McConfig {
    McConfig {
        n_location_draws: cli.mc_loc.unwrap_or(200),
        n_fading_draws: cli.mc_fade.unwrap_or(1000),
        seed: sc.seed,
        mode: cli.mode.into(),
    }
}

fn emit(cli: &Cli, csv: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| {
            Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze => {
            let sc = load(cli)?;
            emit(cli, &run_analyze(&sc)?)?;
        }
        Command::Simulate => {
            let sc = load(cli)?;
            emit(cli, &run_simulate(&sc, &mc_config(cli, &sc))?)?;
        }
        Command::Compare => {
            let sc = load(cli)?;
            emit(cli, &run_compare(&sc, &mc_config(cli, &sc))?)?;
        }
        Command::Power { targets, strict } => {
            let sc = load(cli)?;
            let power = run_power_control(&sc, targets)?;
            emit(cli, &power.csv)?;
            if *strict && power.any_infeasible {
                return Ok(3);
            }
        }
        Command::Preset { name } => {
            let opts = PresetOptions {
                seed: cli.seed,
                mc_loc: cli.mc_loc,
                mc_fade: cli.mc_fade,
                mode: Some(cli.mode.into()),
            };
            emit(cli, &run_preset(name, &opts)?)?;
        }
        Command::Sweep { param, values } => {
            let sc = load(cli)?;
            let parsed: Result<Vec<f64>> = values
                .iter()
                .map(|v| {
                    if v.eq_ignore_ascii_case("inf") {
                        Ok(f64::INFINITY)
                    } else {
                        v.parse::<f64>().map_err(|_| {
                            Error::InvalidArgument(format!("bad sweep value `{v}`"))
                        })
                    }
                })
                .collect();
            let spec = SweepSpec {
                param: SweepParam::parse(param)?,
                values: parsed?,
            };
            emit(cli, &run_sweep(&sc, &spec, &mc_config(cli, &sc))?)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config { .. } | Error::InvalidArgument(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
