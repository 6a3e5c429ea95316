//! Scenario configuration: a TOML file with one table per concern. Unknown
//! keys are rejected.

use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sse_fd_core::coherent::{Frame, PropagationConfig, PureState2, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use sse_fd_core::constants::{bohr_radius, NANOSECOND, V_PER_CM};
use sse_fd_core::hydrogenic::{SurfaceStateBasis, DEFAULT_POINTS_PER_RB, DEFAULT_STARK_STEP};
use sse_fd_core::lindblad::DissipationRates;
use sse_fd_core::model::{derive_drive_params, DriveField, EffectiveParams, TwoLevelSystem};
use sse_fd_core::radiation::{SpectrumConfig, SpectrumSource};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default)]
    pub rates: RatesSection,
    #[serde(default)]
    pub propagation: PropagationSection,
    #[serde(default)]
    pub lineshape: LineshapeSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub hydrogenic: HydrogenicSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

/// Lengths in Bohr radii, frequencies in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSection {
    pub omega_e: f64,
    pub z11_rb: f64,
    pub z22_rb: f64,
    pub z12_rb: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        let s = TwoLevelSystem::surface_state_default();
        let rb = bohr_radius();
        Self {
            omega_e: s.omega_e,
            z11_rb: s.z11 / rb,
            z22_rb: s.z22 / rb,
            z12_rb: s.z12 / rb,
        }
    }
}

/// Drive frequency: a value in rad/s, or `"auto"` for the Δ′ = 0 resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveFrequency {
    Auto,
    Value(f64),
}

impl Serialize for DriveFrequency {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DriveFrequency::Auto => s.serialize_str("auto"),
            DriveFrequency::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for DriveFrequency {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = DriveFrequency;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angular frequency in rad/s or \"auto\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(DriveFrequency::Value(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(DriveFrequency::Value(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(DriveFrequency::Value(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "auto" {
                    Ok(DriveFrequency::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    pub amplitude_v_per_cm: f64,
    pub omega_l: DriveFrequency,
    pub phase: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            amplitude_v_per_cm: 15.0,
            omega_l: DriveFrequency::Auto,
            phase: 0.0,
        }
    }
}

/// Each rate is given either in rad/s or relative to Ω_L, not both.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RatesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dephasing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_over_omega_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dephasing_over_omega_l: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameChoice {
    Lab,
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    Ground,
    Excited,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagationSection {
    pub t_end_ns: f64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub frame: FrameChoice,
    pub initial: InitialState,
    /// Add the amplitude columns to coherent trajectories.
    pub amplitudes: bool,
}

impl Default for PropagationSection {
    fn default() -> Self {
        Self {
            t_end_ns: 20.0,
            samples: 4001,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            frame: FrameChoice::Lab,
            initial: InitialState::Ground,
            amplitudes: false,
        }
    }
}

/// Dimensionless lineshape in units of K = (Γ + γ)/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LineshapeSection {
    pub omega_l_over_k: f64,
    /// Γ/K; 1 means Γ = γ.
    pub decay_over_k: f64,
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub samples: usize,
}

impl Default for LineshapeSection {
    fn default() -> Self {
        Self {
            omega_l_over_k: 0.1,
            decay_over_k: 1.0,
            detuning_min: -5.0,
            detuning_max: 5.0,
            samples: 101,
        }
    }
}

impl LineshapeSection {
    /// Rates with K = 1.
    pub fn unit_rates(&self) -> CliResult<DissipationRates> {
        if !(self.decay_over_k > 0.0 && self.decay_over_k <= 2.0) {
            return Err(CliError::Config("lineshape.decay_over_k must lie in (0, 2]".into()));
        }
        DissipationRates::new(self.decay_over_k, 2.0 - self.decay_over_k).map_err(config_error)
    }

    pub fn params(&self, detuning_over_k: f64) -> EffectiveParams {
        EffectiveParams::from_effective(self.omega_l_over_k, detuning_over_k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceChoice {
    Coherent,
    Dissipative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub t_end_ns: f64,
    pub samples_per_period: usize,
    pub discard_fraction: f64,
    pub zero_pad: usize,
    pub source: SourceChoice,
    /// Also run the natural atom and report the second-harmonic contrast.
    pub natural_control: bool,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            t_end_ns: 160.0,
            samples_per_period: 8,
            discard_fraction: 0.5,
            zero_pad: 8,
            source: SourceChoice::Dissipative,
            natural_control: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HydrogenicSection {
    pub n_max: usize,
    pub holding_field_v_per_cm: f64,
    pub points_per_rb: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_max_rb: Option<f64>,
    pub stark_step_v_per_cm: f64,
    /// Write every n-th grid node to the wavefunction table.
    pub output_stride: usize,
}

impl Default for HydrogenicSection {
    fn default() -> Self {
        Self {
            n_max: 3,
            holding_field_v_per_cm: 0.0,
            points_per_rb: DEFAULT_POINTS_PER_RB,
            z_max_rb: None,
            stark_step_v_per_cm: DEFAULT_STARK_STEP / V_PER_CM,
            output_stride: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Δ′/K on the dimensionless lineshape.
    DeltaPrimeOverK,
    /// Ω_L/K on the dimensionless lineshape at Δ′ = 0.
    OmegaLOverK,
    /// Field amplitude; ω_l follows the drive section.
    AmplitudeVPerCm,
    /// Drive frequency in rad/s.
    OmegaL,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::DeltaPrimeOverK => "delta_prime_over_k",
            SweepParameter::OmegaLOverK => "omega_l_over_k",
            SweepParameter::AmplitudeVPerCm => "amplitude_v_per_cm",
            SweepParameter::OmegaL => "omega_l",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepSection {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

/// Physical scenario resolved from the config.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub sys: TwoLevelSystem,
    pub drive: DriveField,
    /// `None` where the effective description is singular (ω_l = ω_e).
    pub params: Option<EffectiveParams>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        // A run manifest carries its config snapshot.
        if path.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let snapshot = v
                .get("config_toml")
                .and_then(|s| s.as_str())
                .ok_or_else(|| CliError::Config(format!("{}: no config_toml entry", path.display())))?;
            return Self::parse(snapshot);
        }
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        let p = &self.propagation;
        if !(p.t_end_ns > 0.0 && p.t_end_ns.is_finite()) {
            return bad("propagation.t_end_ns must be positive");
        }
        if p.samples < 2 {
            return bad("propagation.samples must be at least 2");
        }
        if !(p.rel_tol > 0.0 && p.abs_tol > 0.0) {
            return bad("propagation tolerances must be positive");
        }
        let r = &self.rates;
        if r.decay.is_some() && r.decay_over_omega_l.is_some() {
            return bad("rates: give decay or decay_over_omega_l, not both");
        }
        if r.dephasing.is_some() && r.dephasing_over_omega_l.is_some() {
            return bad("rates: give dephasing or dephasing_over_omega_l, not both");
        }
        for v in [r.decay, r.dephasing, r.decay_over_omega_l, r.dephasing_over_omega_l]
            .into_iter()
            .flatten()
        {
            if !(v >= 0.0 && v.is_finite()) {
                return bad("rates must be finite and non-negative");
            }
        }
        let l = &self.lineshape;
        if l.samples < 2 || !(l.detuning_max > l.detuning_min) {
            return bad("lineshape needs samples ≥ 2 and detuning_max > detuning_min");
        }
        if !(l.omega_l_over_k >= 0.0 && l.omega_l_over_k.is_finite()) {
            return bad("lineshape.omega_l_over_k must be finite and non-negative");
        }
        l.unit_rates()?;
        let s = &self.spectrum;
        if !(s.t_end_ns > 0.0) || s.samples_per_period < 4 || s.zero_pad < 1 {
            return bad("spectrum needs t_end_ns > 0, samples_per_period ≥ 4 and zero_pad ≥ 1");
        }
        if !(0.0..0.95).contains(&s.discard_fraction) {
            return bad("spectrum.discard_fraction must lie in [0, 0.95)");
        }
        let h = &self.hydrogenic;
        if h.n_max < 1 || h.output_stride < 1 {
            return bad("hydrogenic.n_max and hydrogenic.output_stride must be at least 1");
        }
        if let Some(sw) = &self.sweep {
            if sw.count < 2 {
                return bad("sweep.count must be at least 2");
            }
            if !(sw.min.is_finite() && sw.max.is_finite()) {
                return bad("sweep bounds must be finite");
            }
        }
        Ok(())
    }

    pub fn system(&self) -> CliResult<TwoLevelSystem> {
        let rb = bohr_radius();
        let s = &self.system;
        TwoLevelSystem::new(s.omega_e, s.z11_rb * rb, s.z22_rb * rb, s.z12_rb * rb).map_err(config_error)
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        let sys = self.system()?;
        let d = &self.drive;
        let amplitude = d.amplitude_v_per_cm * V_PER_CM;
        let drive = match d.omega_l {
            DriveFrequency::Auto => DriveField::second_harmonic_resonant(&sys, amplitude, d.phase)
                .map_err(|e| CliError::Config(format!("drive.omega_l = \"auto\": {e}")))?,
            DriveFrequency::Value(w) => DriveField::new(amplitude, w, d.phase).map_err(config_error)?,
        };
        Ok(Resolved {
            sys,
            drive,
            params: derive_drive_params(&sys, &drive).ok(),
        })
    }

    /// Rates in rad/s; relative rates scale with |Ω_L|. Unset rates are zero.
    pub fn rates(&self, params: Option<&EffectiveParams>) -> CliResult<DissipationRates> {
        let r = &self.rates;
        let pick = |abs: Option<f64>, rel: Option<f64>, name: &str| -> CliResult<f64> {
            match (abs, rel) {
                (Some(v), _) => Ok(v),
                (None, Some(f)) => match params {
                    Some(p) => Ok(f * p.omega_l.abs()),
                    None => Err(CliError::Config(format!(
                        "rates.{name}_over_omega_l needs a finite Ω_L"
                    ))),
                },
                (None, None) => Ok(0.0),
            }
        };
        let decay = pick(r.decay, r.decay_over_omega_l, "decay")?;
        let dephasing = pick(r.dephasing, r.dephasing_over_omega_l, "dephasing")?;
        DissipationRates::new(decay, dephasing).map_err(config_error)
    }

    pub fn propagation(&self) -> PropagationConfig {
        let p = &self.propagation;
        let frame = match p.frame {
            FrameChoice::Lab => Frame::Lab,
            FrameChoice::Effective => Frame::EffectiveSecondHarmonic,
        };
        PropagationConfig {
            rel_tol: p.rel_tol,
            abs_tol: p.abs_tol,
            ..PropagationConfig::new(p.t_end_ns * NANOSECOND, p.samples, frame)
        }
    }

    pub fn initial_state(&self) -> PureState2 {
        match self.propagation.initial {
            InitialState::Ground => PureState2::ground(),
            InitialState::Excited => PureState2::excited(),
        }
    }

    pub fn spectrum(&self, rates: DissipationRates) -> SpectrumConfig {
        let s = &self.spectrum;
        let source = match s.source {
            SourceChoice::Coherent => SpectrumSource::Coherent,
            SourceChoice::Dissipative => SpectrumSource::Dissipative(rates),
        };
        SpectrumConfig {
            samples_per_period: s.samples_per_period,
            discard_fraction: s.discard_fraction,
            zero_pad: s.zero_pad,
            rel_tol: self.propagation.rel_tol,
            abs_tol: self.propagation.abs_tol,
            ..SpectrumConfig::new(s.t_end_ns * NANOSECOND, source)
        }
    }

    pub fn basis(&self) -> CliResult<SurfaceStateBasis> {
        let h = &self.hydrogenic;
        let field = h.holding_field_v_per_cm * V_PER_CM;
        let default = SurfaceStateBasis::default_for(h.n_max, field).map_err(config_error)?;
        if h.points_per_rb == DEFAULT_POINTS_PER_RB && h.z_max_rb.is_none() {
            return Ok(default);
        }
        let rb = bohr_radius();
        let z_max = h.z_max_rb.map_or(*default.grid.last().expect("grid"), |z| z * rb);
        let points = ((z_max / rb) * h.points_per_rb as f64).round() as usize;
        SurfaceStateBasis::uniform(h.n_max, z_max, points, field).map_err(config_error)
    }
}

fn config_error(e: sse_fd_core::Error) -> CliError {
    CliError::Config(e.to_string())
}
