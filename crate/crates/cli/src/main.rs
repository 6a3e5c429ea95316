use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sse_fd::{presets, run, CliError, CliResult, Command, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "sse-fd",
    version,
    about = "Frequency doubling by surface-state electrons on liquid helium"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML), or a run manifest to repeat a run.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario: fig1a, fig1b, fig2, natural-atom.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "SSE_FD_WORKERS")]
    workers: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the effective drive parameters.
    Params,
    /// Coherent two-level trajectory.
    Rabi,
    /// Master-equation trajectory.
    Lindblad,
    /// Steady state and the intensity lineshape.
    Steady {
        /// Override lineshape.omega_l_over_k.
        #[arg(long = "omega-L-over-K")]
        omega_l_over_k: Option<f64>,
    },
    /// Spectrum of the lab-frame dipole.
    Spectrum,
    /// Surface-state levels, wavefunctions and matrix elements.
    Hydrogenic {
        /// Print the report on stdout.
        #[arg(long)]
        report: bool,
    },
    /// Steady-state sweep over the [sweep] axis.
    Sweep,
}

fn workers(arg: Option<&str>) -> CliResult<usize> {
    match arg {
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Config(format!(
                "worker count must be a positive integer, got {s:?}"
            ))),
        },
    }
}

fn main_inner(cli: Cli) -> CliResult<()> {
    let c = cli.common;
    let mut config = match (&c.config, &c.preset) {
        (Some(path), _) => ScenarioConfig::load(path)?,
        (None, Some(name)) => presets::preset(name)?,
        (None, None) => return Err(CliError::Config("give --config <path> or --preset <name>".into())),
    };
    let (cmd, print) = match cli.command {
        Cmd::Params => (Command::Params, true),
        Cmd::Rabi => (Command::Rabi, true),
        Cmd::Lindblad => (Command::Lindblad, true),
        Cmd::Steady { omega_l_over_k } => {
            if let Some(v) = omega_l_over_k {
                config.lineshape.omega_l_over_k = v;
                config.validate()?;
            }
            (Command::Steady, true)
        }
        Cmd::Spectrum => (Command::Spectrum, true),
        Cmd::Hydrogenic { report } => (Command::Hydrogenic, report),
        Cmd::Sweep => (Command::Sweep, true),
    };
    let opts = RunOptions {
        config,
        preset: c.preset,
        config_path: c.config,
        out: c.out,
        workers: workers(c.workers.as_deref())?,
        arguments: std::env::args().skip(1).collect(),
    };
    let text = run(cmd, &opts)?;
    if print {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sse-fd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
