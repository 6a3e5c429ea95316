//! Second-harmonic observables: the polarization wave radiated by the steady
//! coherence, the |ρ21|² lineshape, and lab-frame spectra of ⟨z(t)⟩.

use std::f64::consts::{PI, TAU};

use crate::coherent::{propagate_lab, Frame, PropagationConfig, PureState2, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::constants::{bohr_radius, ELEMENTARY_CHARGE};
use crate::lindblad::{evolve_master, steady_state, DensityMatrix2, DissipationRates, Generator};
use crate::model::{derive_drive_params, DriveField, EffectiveParams, TwoLevelSystem};
use crate::spectral::{power_spectrum, Peak, Window};
use crate::{Error, Result};

/// `P(t) = A cos(2ω_l t − θ)`, the oscillating part of the dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationWave {
    /// C·m
    pub amplitude: f64,
    pub phase: f64,
    /// Always 2ω_l.
    pub carrier: f64,
    /// e(ρ11 z11 + ρ22 z22), C·m; not part of the wave.
    pub static_dipole: f64,
}

pub fn polarization_wave(sys: &TwoLevelSystem, steady: &DensityMatrix2, drive: &DriveField) -> PolarizationWave {
    let carrier = 2.0 * drive.omega_l;
    let static_dipole = ELEMENTARY_CHARGE * (steady.rho11 * sys.z11 + steady.rho22 * sys.z22);
    let modulus = steady.rho21.norm();
    if modulus == 0.0 {
        return PolarizationWave {
            amplitude: 0.0,
            phase: 0.0,
            carrier,
            static_dipole,
        };
    }
    PolarizationWave {
        amplitude: ELEMENTARY_CHARGE * sys.z12.abs() * modulus,
        phase: steady.rho21.im.atan2(steady.rho21.re) + 2.0 * drive.phase,
        carrier,
        static_dipole,
    }
}

/// Weak-saturation Lorentzian
/// `(Ω_L/K)² / [1 + (Δ′/K)² + 8Ω_L²/(KΓ)]`.
pub fn weak_drive_intensity(omega_l: f64, delta_prime: f64, rates: &DissipationRates) -> f64 {
    let k = rates.k();
    let x = omega_l / k;
    let d = delta_prime / k;
    x * x / (1.0 + d * d + 8.0 * omega_l * omega_l / (k * rates.decay))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensityCurve {
    /// Δ′/K
    pub detuning_axis: Vec<f64>,
    /// |ρ21|² of the exact steady state.
    pub intensity: Vec<f64>,
    /// Weak-saturation Lorentzian on the same axis.
    pub intensity_approx: Vec<f64>,
}

impl IntensityCurve {
    pub fn peak(&self) -> (f64, f64) {
        self.detuning_axis
            .iter()
            .zip(&self.intensity)
            .fold(
                (f64::NAN, f64::NEG_INFINITY),
                |best, (&d, &i)| if i > best.1 { (d, i) } else { best },
            )
    }
}

/// |ρ21|² against Δ′/K on `samples` evenly spaced points of `range`.
/// Only `params.omega_l` is used; Δ′ comes from the axis.
pub fn intensity_lorentzian(
    params: &EffectiveParams,
    rates: &DissipationRates,
    range: (f64, f64),
    samples: usize,
) -> Result<IntensityCurve> {
    if samples < 2 || !(range.1 > range.0) {
        return Err(Error::InvalidParameter(
            "need ≥ 2 samples on an increasing range".into(),
        ));
    }
    let k = rates.k();
    let axis: Vec<f64> = (0..samples)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64)
        .collect();
    let mut intensity = Vec::with_capacity(samples);
    let mut approx = Vec::with_capacity(samples);
    for &d in &axis {
        let p = EffectiveParams {
            delta_prime: d * k,
            ..*params
        };
        intensity.push(steady_state(&p, rates, 0.0)?.rho21.norm_sqr());
        approx.push(weak_drive_intensity(params.omega_l, d * k, rates));
    }
    Ok(IntensityCurve {
        detuning_axis: axis,
        intensity,
        intensity_approx: approx,
    })
}

/// Dynamics feeding the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumSource {
    Coherent,
    /// Lab-frame master equation; with a settled transient the coherence is
    /// a clean steady response.
    Dissipative(DissipationRates),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub t_end: f64,
    /// Samples per drive period 2π/ω_l.
    pub samples_per_period: usize,
    /// Leading fraction of the record dropped before the transform.
    pub discard_fraction: f64,
    pub zero_pad: usize,
    pub source: SpectrumSource,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl SpectrumConfig {
    pub fn new(t_end: f64, source: SpectrumSource) -> Self {
        Self {
            t_end,
            samples_per_period: 8,
            discard_fraction: match source {
                SpectrumSource::Coherent => 0.0,
                SpectrumSource::Dissipative(_) => 0.5,
            },
            zero_pad: 8,
            source,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub omega_drive: f64,
    /// Power spectrum of ⟨z⟩/r_B.
    pub omegas: Vec<f64>,
    pub power: Vec<f64>,
    /// Native bin width 2π/T of the analysed record.
    pub resolution: f64,
    /// Strongest line above ω_l/4.
    pub dominant: Peak,
    pub power_at_drive: f64,
    pub power_at_second_harmonic: f64,
    pub power_at_third_harmonic: f64,
    /// Time average of ⟨z⟩, m.
    pub mean_dipole: f64,
}

impl SpectralReport {
    /// Offset of the dominant line from 2ω_l in native bins.
    pub fn second_harmonic_offset_bins(&self) -> f64 {
        (self.dominant.omega - 2.0 * self.omega_drive) / self.resolution
    }
}

/// Lower edge of the band searched for the dominant line, in units of ω_l.
pub const NON_DC_CUTOFF: f64 = 0.25;
/// Minimum analysed length in slow periods.
pub const MIN_PERIODS: f64 = 20.0;

/// ⟨z⟩ = ρ11 z11 + ρ22 z22 + 2 z12 Re ρ21 for a lab-frame state.
pub fn dipole_expectation(sys: &TwoLevelSystem, rho: &DensityMatrix2) -> f64 {
    rho.rho11 * sys.z11 + rho.rho22 * sys.z22 + 2.0 * sys.z12 * rho.rho21.re
}

/// Lab-frame ⟨z(t)⟩ from |1⟩ under the configured dynamics, Hann-windowed and
/// transformed.
pub fn spectrum_from_dynamics(
    sys: &TwoLevelSystem,
    drive: &DriveField,
    cfg: &SpectrumConfig,
) -> Result<SpectralReport> {
    drive.validate()?;
    if cfg.samples_per_period < 4 {
        return Err(Error::Resolution("need at least 4 samples per drive period".into()));
    }
    if !(0.0..0.95).contains(&cfg.discard_fraction) {
        return Err(Error::InvalidParameter("discard fraction must be in [0, 0.95)".into()));
    }
    let period = TAU / drive.omega_l;
    let dt = period / cfg.samples_per_period as f64;
    let n = (cfg.t_end / dt).round() as usize + 1;
    let analysed = cfg.t_end * (1.0 - cfg.discard_fraction);
    let slow = match derive_drive_params(sys, drive) {
        Ok(p) if p.omega_l != 0.0 => PI / p.omega_l.abs(),
        _ => period,
    };
    if analysed < MIN_PERIODS * slow {
        return Err(Error::Resolution(format!(
            "analysed record of {analysed:e} s is shorter than {MIN_PERIODS} slow periods ({:e} s)",
            MIN_PERIODS * slow
        )));
    }
    let mut prop = PropagationConfig::new(dt * (n - 1) as f64, n, Frame::Lab);
    prop.rel_tol = cfg.rel_tol;
    prop.abs_tol = cfg.abs_tol;
    let states: Vec<DensityMatrix2> = match cfg.source {
        SpectrumSource::Coherent => propagate_lab(sys, drive, PureState2::ground(), &prop)?
            .states
            .expect("lab propagation keeps states")
            .iter()
            .map(DensityMatrix2::from_pure)
            .collect(),
        SpectrumSource::Dissipative(rates) => {
            evolve_master(
                &Generator::Lab {
                    sys: *sys,
                    drive: *drive,
                },
                &rates,
                DensityMatrix2::ground(),
                &prop,
            )?
            .states
        }
    };
    let skip = (cfg.discard_fraction * n as f64).round() as usize;
    let rb = bohr_radius();
    let signal: Vec<f64> = states[skip..].iter().map(|s| dipole_expectation(sys, s) / rb).collect();
    let mean_dipole = rb * signal.iter().sum::<f64>() / signal.len() as f64;
    let spec = power_spectrum(&signal, dt, Window::Hann, cfg.zero_pad)?;
    let dominant = spec
        .peak_in(NON_DC_CUTOFF * drive.omega_l, PI / dt)
        .ok_or_else(|| Error::Resolution("no spectral line above the DC band".into()))?;
    let res = spec.resolution;
    Ok(SpectralReport {
        omega_drive: drive.omega_l,
        power_at_drive: spec.power_near(drive.omega_l, res),
        power_at_second_harmonic: spec.power_near(2.0 * drive.omega_l, res),
        power_at_third_harmonic: spec.power_near(3.0 * drive.omega_l, res),
        omegas: spec.omegas,
        power: spec.power,
        resolution: res,
        dominant,
        mean_dipole,
    })
}
