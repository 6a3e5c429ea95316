//! One-parameter sweeps of the steady state. Points are independent and are
//! written in axis order whatever the worker count.

use rayon::prelude::*;
use sse_fd_core::constants::V_PER_CM;
use sse_fd_core::lindblad::{steady_state, DensityMatrix2};
use sse_fd_core::model::{derive_drive_params, DriveField, EffectiveParams};

use crate::config::{DriveFrequency, ScenarioConfig, SweepParameter, SweepSection};
use crate::error::{CliError, CliResult};
use crate::output::{num, CsvTable};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub outcome: Result<(EffectiveParams, DensityMatrix2), String>,
}

fn point(cfg: &ScenarioConfig, axis: SweepParameter, value: f64) -> CliResult<(EffectiveParams, DensityMatrix2)> {
    match axis {
        SweepParameter::DeltaPrimeOverK | SweepParameter::OmegaLOverK => {
            let l = &cfg.lineshape;
            let rates = l.unit_rates()?;
            let p = if axis == SweepParameter::DeltaPrimeOverK {
                EffectiveParams::from_effective(l.omega_l_over_k, value)
            } else {
                EffectiveParams::from_effective(value, 0.0)
            };
            Ok((p, steady_state(&p, &rates, 0.0)?))
        }
        SweepParameter::AmplitudeVPerCm | SweepParameter::OmegaL => {
            let sys = cfg.system()?;
            let d = &cfg.drive;
            let amplitude = if axis == SweepParameter::AmplitudeVPerCm {
                value
            } else {
                d.amplitude_v_per_cm
            } * V_PER_CM;
            let drive = match (axis, d.omega_l) {
                (SweepParameter::OmegaL, _) => DriveField::new(amplitude, value, d.phase)?,
                (_, DriveFrequency::Auto) => DriveField::second_harmonic_resonant(&sys, amplitude, d.phase)?,
                (_, DriveFrequency::Value(w)) => DriveField::new(amplitude, w, d.phase)?,
            };
            let p = derive_drive_params(&sys, &drive)?;
            let rates = cfg.rates(Some(&p))?;
            Ok((p, steady_state(&p, &rates, drive.phase)?))
        }
    }
}

pub fn run_points(cfg: &ScenarioConfig, sweep: &SweepSection, workers: usize) -> CliResult<Vec<SweepPoint>> {
    let values = sweep.values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        values
            .par_iter()
            .map(|&value| SweepPoint {
                value,
                outcome: point(cfg, sweep.parameter, value).map_err(|e| e.to_string()),
            })
            .collect()
    }))
}

/// Columns: index, axis value, Ω_L, Δ′, ρ22, |ρ21|², Re ρ21, Im ρ21, error.
/// Lineshape axes work in units of K.
pub fn to_csv(sweep: &SweepSection, points: &[SweepPoint]) -> Vec<u8> {
    let mut csv = CsvTable::new(&[
        "index",
        sweep.parameter.name(),
        "omega_l_eff",
        "delta_prime",
        "rho22",
        "intensity",
        "re_rho21",
        "im_rho21",
        "error",
    ]);
    for (i, p) in points.iter().enumerate() {
        let mut row = vec![i.to_string(), num(p.value)];
        match &p.outcome {
            Ok((params, s)) => {
                row.extend(
                    [
                        params.omega_l,
                        params.delta_prime,
                        s.rho22,
                        s.rho21.norm_sqr(),
                        s.rho21.re,
                        s.rho21.im,
                    ]
                    .map(num),
                );
                row.push(String::new());
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), 6));
                row.push(e.clone());
            }
        }
        csv.row(&row);
    }
    csv.into_bytes()
}

pub fn sweep_csv(cfg: &ScenarioConfig, workers: usize) -> CliResult<(Vec<u8>, usize)> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("the sweep command needs a [sweep] section".into()))?;
    let points = run_points(cfg, sweep, workers)?;
    let failed = points.iter().filter(|p| p.outcome.is_err()).count();
    Ok((to_csv(sweep, &points), failed))
}
