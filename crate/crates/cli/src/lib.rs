//! Command-line harness around `sse-fd-core`: scenario configs, presets,
//! CSV outputs, run manifests and parallel sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod presets;
pub mod sweep;

use std::path::PathBuf;
use std::time::Instant;

pub use config::ScenarioConfig;
pub use error::{CliError, CliResult};

use manifest::{ParamsRecord, RunManifest};
use output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Params,
    Rabi,
    Lindblad,
    Steady,
    Spectrum,
    Hydrogenic,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Params => "params",
            Command::Rabi => "rabi",
            Command::Lindblad => "lindblad",
            Command::Steady => "steady",
            Command::Spectrum => "spectrum",
            Command::Hydrogenic => "hydrogenic",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: ScenarioConfig,
    pub preset: Option<String>,
    pub config_path: Option<PathBuf>,
    /// `params` writes files only when this is set.
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub arguments: Vec<String>,
}

pub const DEFAULT_OUT: &str = "sse-fd-out";

/// Run one command, write its outputs and manifest, and return stdout text.
pub fn run(cmd: Command, opts: &RunOptions) -> CliResult<String> {
    let start = Instant::now();
    let cfg = &opts.config;
    let mut out = match (&opts.out, cmd) {
        (None, Command::Params) => None,
        (dir, _) => Some(OutputDir::create(dir.as_deref().unwrap_or(DEFAULT_OUT.as_ref()))?),
    };
    let text = match (cmd, out.as_mut()) {
        (Command::Params, o) => commands::params(cfg, o)?,
        (Command::Rabi, Some(o)) => commands::rabi(cfg, o)?,
        (Command::Lindblad, Some(o)) => commands::lindblad(cfg, o)?,
        (Command::Steady, Some(o)) => commands::steady(cfg, o)?,
        (Command::Spectrum, Some(o)) => commands::spectrum(cfg, o)?,
        (Command::Hydrogenic, Some(o)) => commands::hydrogenic(cfg, o)?,
        (Command::Sweep, Some(o)) => {
            let (bytes, failed) = sweep::sweep_csv(cfg, opts.workers)?;
            o.write("sweep.csv", &bytes)?;
            let rows = cfg.sweep.as_ref().map_or(0, |s| s.count);
            format!("sweep: {rows} points, {failed} failed\n")
        }
        (_, None) => unreachable!("output directory exists for file-producing commands"),
    };
    if let Some(o) = out.as_mut() {
        let mut m = RunManifest::new(cmd.name(), cfg);
        m.arguments = opts.arguments.clone();
        m.preset = opts.preset.clone();
        m.config_path = opts.config_path.as_ref().map(|p| p.display().to_string());
        m.effective_params = cfg
            .resolve()
            .ok()
            .and_then(|r| r.params)
            .as_ref()
            .map(ParamsRecord::from);
        m.workers = (cmd == Command::Sweep).then_some(opts.workers);
        m.write(o, start.elapsed())?;
    }
    Ok(text)
}
