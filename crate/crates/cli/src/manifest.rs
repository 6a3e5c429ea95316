use std::time::Duration;

use serde::Serialize;
use sse_fd_core::model::EffectiveParams;

use crate::config::ScenarioConfig;
use crate::error::CliResult;
use crate::output::OutputDir;

pub const MANIFEST_FILE: &str = "run_manifest.json";

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsRecord {
    pub omega_r: f64,
    pub omega_tilde: f64,
    pub delta: f64,
    pub nu: f64,
    pub omega_l: f64,
    pub delta_prime: f64,
    pub omega_e: f64,
    pub omega_drive: f64,
    pub xi: f64,
}

impl From<&EffectiveParams> for ParamsRecord {
    fn from(p: &EffectiveParams) -> Self {
        Self {
            omega_r: p.omega_r,
            omega_tilde: p.omega_tilde,
            delta: p.delta,
            nu: p.nu,
            omega_l: p.omega_l,
            delta_prime: p.delta_prime,
            omega_e: p.omega_e,
            omega_drive: p.omega_drive,
            xi: p.xi(),
        }
    }
}

/// Everything needed to repeat a run: `sse-fd <command> --config run_manifest.json`
/// reloads the embedded config snapshot.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub preset: Option<String>,
    pub config_path: Option<String>,
    pub config_toml: String,
    pub config: ScenarioConfig,
    pub effective_params: Option<ParamsRecord>,
    pub outputs: Vec<String>,
    pub workers: Option<usize>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, config: &ScenarioConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            arguments: Vec::new(),
            preset: None,
            config_path: None,
            config_toml: config.to_toml(),
            config: config.clone(),
            effective_params: None,
            outputs: Vec::new(),
            workers: None,
            wall_clock_seconds: 0.0,
        }
    }

    pub fn write(mut self, out: &mut OutputDir, elapsed: Duration) -> CliResult<()> {
        self.outputs = out.files.clone();
        self.wall_clock_seconds = elapsed.as_secs_f64();
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        out.write(MANIFEST_FILE, json.as_bytes())
    }
}
