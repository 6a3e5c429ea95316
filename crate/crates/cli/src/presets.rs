use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

pub const PRESETS: [(&str, &str); 4] = [
    ("fig1a", include_str!("../presets/fig1a.toml")),
    ("fig1b", include_str!("../presets/fig1b.toml")),
    ("fig2", include_str!("../presets/fig2.toml")),
    ("natural-atom", include_str!("../presets/natural-atom.toml")),
];

pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn preset(name: &str) -> CliResult<ScenarioConfig> {
    let src = preset_source(name).ok_or_else(|| {
        let known: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset {name:?}; known presets: {}", known.join(", ")))
    })?;
    ScenarioConfig::parse(src)
}
