//! `gaussfid`: fidelity trajectories, parameter sweeps and self-verification as CSV.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
//! 3 I/O failure.

mod commands;
mod output;
mod params;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use params::{Axis, ModelArgs};

#[derive(Debug, Parser)]
#[command(
    name = "gaussfid",
    version,
    about = "Gaussian-state fidelity under damped-oscillator dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments over time. Columns: t,q_mean,p_mean,var_qq,var_pp,cov_pq,sigma_t
    Evolve(RunArgs),
    /// Fidelity to the initial state over time. Columns: t,F,sigma_t,q_mean,p_mean
    Fidelity(RunArgs),
    /// Long-time fidelity. Columns: delta,r,C,q0,p0,F_inf,E_inf,F_inf_displaced,F_late_pipeline
    Asymptote(RunArgs),
    /// Grid over a parameter (and time). Columns: t,<axis>,F,status; with
    /// --asymptote: <axis>[,<axis2>],F_inf,status
    Sweep(SweepArgs),
    /// Cross-check closed forms against the RK4 oracle and each other
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Write CSV here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Swept parameter (defaults to the preset's)
    #[arg(long, value_enum)]
    axis: Option<Axis>,
    /// Axis range start (defaults to the preset's)
    #[arg(long)]
    axis_min: Option<f64>,
    /// Axis range end (defaults to the preset's)
    #[arg(long)]
    axis_max: Option<f64>,
    /// Samples on the axis, endpoints included
    #[arg(long, default_value_t = 41)]
    axis_points: usize,
    /// Second axis, asymptote grids only
    #[arg(long, value_enum)]
    axis2: Option<Axis>,
    /// Second axis range start
    #[arg(long)]
    axis2_min: Option<f64>,
    /// Second axis range end
    #[arg(long)]
    axis2_max: Option<f64>,
    /// Samples on the second axis
    #[arg(long, default_value_t = 41)]
    axis2_points: usize,
    /// Tabulate F(∞) instead of F(t)
    #[arg(long)]
    asymptote: bool,
    /// Write CSV here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// 10 samples instead of 100
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Perturb propagator entry (0,0) by this amount; the suite must then fail
    #[arg(long, hide = true)]
    inject_fault: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(gaussfid::Error),
    Usage(String),
    Io(std::io::Error),
    VerifyFailed,
}

impl From<gaussfid::Error> for CliError {
    fn from(e: gaussfid::Error) -> Self {
        CliError::Invalid(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Invalid(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(a) => commands::evolve(&a.model)?.emit(a.output.as_deref())?,
        Command::Fidelity(a) => commands::fidelity(&a.model)?.emit(a.output.as_deref())?,
        Command::Asymptote(a) => commands::asymptote(&a.model)?.emit(a.output.as_deref())?,
        Command::Sweep(a) => {
            let spec = commands::SweepSpec::resolve(&a)?;
            commands::sweep(&a.model, &spec)?.emit(a.output.as_deref())?
        }
        Command::Verify(a) => {
            let mut opts = if a.quick {
                gaussfid::verify::VerifyOptions::quick()
            } else {
                gaussfid::verify::VerifyOptions::default()
            };
            if let Some(n) = a.samples {
                opts.samples = n;
            }
            opts.seed = a.seed;
            opts.fault = a.inject_fault.map(gaussfid::verify::Fault::PropagatorEntry);
            if !commands::verify(&opts) {
                return Err(CliError::VerifyFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Invalid(err) => eprintln!("error: {err}"),
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Io(err) => eprintln!("error: i/o: {err}"),
                CliError::VerifyFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
