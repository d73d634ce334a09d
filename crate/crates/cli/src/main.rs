// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use tclq_cli::commands::{self, Mode, RunOptions};
use tclq_cli::{CliError, Exit, Format};
use tclq_core::EnvironmentParams;

/// Qubit dynamics and Lyapunov state transfer under a time-convolutionless
/// master equation.
#[derive(Debug, Parser)]
#[command(name = "tclq", version)]
struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print β(t), its envelope and optionally γ(t), Δ(t) as CSV on stdout.
    Coeffs(CoeffsArgs),
    /// Run an uncontrolled scenario.
    Free(RunArgs),
    /// Run a Lyapunov transfer scenario.
    Control(ControlArgs),
    /// Run a scenario family on the worker pool.
    Sweep(SweepArgs),
    /// List the builtin scenarios.
    List,
    /// Run the acceptance checks.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    /// Cut-off ratio ω_c/ω₀.
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    /// Temperature as an energy.
    #[arg(long = "kT", default_value_t = 300.0)]
    kt: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 50.0)]
    tmax: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Add gamma and delta columns.
    #[arg(long)]
    rates: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Builtin scenario name (see `tclq list`).
    #[arg(long)]
    scenario: Option<String>,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Output formats; repeat or comma-separate.
    #[arg(long = "format", value_enum, value_delimiter = ',')]
    formats: Vec<Format>,
    /// Exit 0 even if a run leaves the physical state space.
    #[arg(long)]
    allow_nonphysical: bool,
}

#[derive(Debug, Args)]
struct ControlArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Exit 1 if any transfer misses its target error.
    #[arg(long)]
    require_converged: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// fig2, fig3 or r_sensitivity.
    #[arg(long)]
    family: String,
    #[arg(long, default_value = "out")]
    output_dir: PathBuf,
    #[arg(long = "format", value_enum, value_delimiter = ',', default_value = "csv")]
    formats: Vec<Format>,
    #[arg(long)]
    allow_nonphysical: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Run only these criteria.
    #[arg(long = "criterion", value_delimiter = ',')]
    criteria: Vec<u8>,
    /// Random initial states for the relaxation check (0 disables it).
    #[arg(long, default_value_t = tclq_cli::config::DEFAULT_RANDOM_STATES)]
    random_states: usize,
    /// Emit results as JSON.
    #[arg(long)]
    json: bool,
}

fn overrides(args: &RunArgs) -> Map<String, Value> {
    let mut m = Map::new();
    if let Some(s) = &args.scenario {
        m.insert("scenario".into(), json!(s));
    }
    if let Some(d) = &args.output_dir {
        m.insert("output_dir".into(), json!(d));
    }
    if !args.formats.is_empty() {
        m.insert("formats".into(), json!(args.formats));
    }
    m
}

fn init_logging(level: u8) {
    let filter = match level {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(filter)
        .parse_default_env()
        .try_init();
}

fn init_threads() {
    if let Some(n) = std::env::var("TCLQ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let verbose = cli.verbose;
    let result = match cli.command {
        Command::Coeffs(a) => {
            init_logging(verbose);
            let env = EnvironmentParams {
                alpha: a.alpha,
                omega0: a.omega0,
                kt: a.kt,
                r: a.r,
            };
            commands::coeffs(&env, a.tmax, a.dt, a.rates, &mut out)
        }
        Command::Free(a) => {
            let opts = RunOptions {
                require_converged: false,
                allow_nonphysical: a.allow_nonphysical,
            };
            run_scenario(&a, Mode::Free, opts, verbose, &mut out)
        }
        Command::Control(a) => {
            let opts = RunOptions {
                require_converged: a.require_converged,
                allow_nonphysical: a.run.allow_nonphysical,
            };
            run_scenario(&a.run, Mode::Control, opts, verbose, &mut out)
        }
        Command::Sweep(a) => {
            init_logging(verbose);
            let opts = RunOptions {
                require_converged: false,
                allow_nonphysical: a.allow_nonphysical,
            };
            commands::sweep(&a.family, &a.output_dir, &a.formats, opts, &mut out)
        }
        Command::List => commands::list(&mut out),
        Command::Check(a) => {
            init_logging(verbose);
            commands::check(&a.criteria, a.random_states, a.json, &mut out)
        }
    };
    out.flush()?;
    result
}

fn run_scenario(args: &RunArgs, mode: Mode, opts: RunOptions, verbose: u8, out: &mut dyn Write) -> Result<Exit, CliError> {
    let cfg = commands::load_config(args.config.as_deref(), overrides(args))?;
    init_logging(verbose.max(cfg.verbosity));
    commands::run_configured(&cfg, mode, opts, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let exit = match run(cli) {
        Ok(e) => e,
        Err(e) if e.is_broken_pipe() => Exit::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    };
    ExitCode::from(exit.code() as u8)
}
