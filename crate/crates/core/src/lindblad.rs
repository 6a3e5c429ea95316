//! Damped dynamics of the driven electron under decay Γ (|2⟩ → |1⟩) and pure
//! dephasing γ of |2⟩, and the closed-form steady state.
//!
//! Density matrices are integrated in the four real components
//! `(ρ11, ρ22, Re ρ21, Im ρ21)`.

use num_complex::Complex64;

use crate::coherent::{Frame, LabCoupling, PropagationConfig, PureState2};
use crate::integrate::integrate_dense;
use crate::model::{DriveField, EffectiveParams, TwoLevelSystem};
use crate::{Error, Result};

/// Tolerance on trace and positivity along a trajectory.
pub const DENSITY_BUDGET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub rho11: f64,
    pub rho22: f64,
    pub rho21: Complex64,
}

impl DensityMatrix2 {
    pub fn ground() -> Self {
        Self {
            rho11: 1.0,
            rho22: 0.0,
            rho21: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            rho11: 0.0,
            rho22: 1.0,
            rho21: Complex64::new(0.0, 0.0),
        }
    }

    pub fn from_pure(s: &PureState2) -> Self {
        Self {
            rho11: s.c1.norm_sqr(),
            rho22: s.c2.norm_sqr(),
            rho21: s.rho21(),
        }
    }

    pub fn rho12(&self) -> Complex64 {
        self.rho21.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    /// Smaller eigenvalue of the 2×2 matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let tr = self.trace();
        let diff = self.rho11 - self.rho22;
        0.5 * (tr - (diff * diff + 4.0 * self.rho21.norm_sqr()).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        let trace_err = (self.trace() - 1.0).abs();
        if trace_err > DENSITY_BUDGET {
            return Err(Error::InvalidParameter(format!(
                "trace deviates from 1 by {trace_err:e}"
            )));
        }
        if self.rho21.norm_sqr() > self.rho11 * self.rho22 + DENSITY_BUDGET {
            return Err(Error::InvalidParameter("density matrix is not positive".into()));
        }
        Ok(())
    }

    fn to_real(self) -> [f64; 4] {
        [self.rho11, self.rho22, self.rho21.re, self.rho21.im]
    }

    fn from_real(y: &[f64; 4]) -> Self {
        Self {
            rho11: y[0],
            rho22: y[1],
            rho21: Complex64::new(y[2], y[3]),
        }
    }

    /// Largest absolute difference over the independent real components.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.rho11 - other.rho11,
            self.rho22 - other.rho22,
            self.rho21.re - other.rho21.re,
            self.rho21.im - other.rho21.im,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Decay rate Γ and dephasing rate γ, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationRates {
    pub decay: f64,
    pub dephasing: f64,
}

impl DissipationRates {
    pub fn new(decay: f64, dephasing: f64) -> Result<Self> {
        if !(decay.is_finite() && decay >= 0.0 && dephasing.is_finite() && dephasing >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rates must be non-negative, got Γ = {decay}, γ = {dephasing}"
            )));
        }
        Ok(Self { decay, dephasing })
    }

    /// Coherence decay rate K = (Γ + γ)/2.
    pub fn k(&self) -> f64 {
        0.5 * (self.decay + self.dephasing)
    }
}

/// Hamiltonian part of the master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// Full lab-frame Hamiltonian; the coherence is reported in the lab frame.
    Lab { sys: TwoLevelSystem, drive: DriveField },
    /// Second-order effective Hamiltonian H_L in its rotating frame.
    Effective { params: EffectiveParams, phase: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix2>,
}

impl DensityTrajectory {
    pub fn rho22(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.rho22).collect()
    }

    pub fn last(&self) -> &DensityMatrix2 {
        self.states.last().expect("trajectory has at least two samples")
    }

    pub fn max_trace_error(&self) -> f64 {
        self.states.iter().map(|s| (s.trace() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Time derivative of `(ρ11, ρ22, Re ρ21, Im ρ21)` under H_L and the two
/// dissipators:
///
/// ```text
/// ρ̇22 = iΩ_L(e^{−2iφ}ρ12 − e^{2iφ}ρ21) − Γρ22
/// ρ̇21 = iΩ_L e^{−2iφ}(ρ11 − ρ22) − iΔ′ρ21 − Kρ21
/// ```
pub fn effective_rhs(
    params: &EffectiveParams,
    phase: f64,
    rates: &DissipationRates,
    rho: &DensityMatrix2,
) -> DensityMatrix2 {
    let om = params.omega_l;
    let w = Complex64::from_polar(1.0, 2.0 * phase) * rho.rho21;
    // i(conj(w) − w) = 2 Im w
    let pump = 2.0 * om * w.im;
    let d22 = pump - rates.decay * rho.rho22;
    let d21 = Complex64::new(0.0, om) * Complex64::from_polar(1.0, -2.0 * phase) * (rho.rho11 - rho.rho22)
        - Complex64::new(rates.k(), params.delta_prime) * rho.rho21;
    DensityMatrix2 {
        rho11: -d22,
        rho22: d22,
        rho21: d21,
    }
}

/// Lab-frame generator in the diagonal interaction picture of
/// [`LabCoupling`]; `rho21` here is `e^{−2iΦ}` times the lab coherence.
fn lab_interaction_rhs(lab: &LabCoupling, rates: &DissipationRates, t: f64, rho: &DensityMatrix2) -> DensityMatrix2 {
    let (_, _, h12) = lab.hamiltonian(t);
    let v = Complex64::from_polar(h12, 2.0 * lab.diagonal_phase(t));
    let d22 = -2.0 * (v * rho.rho21).im - rates.decay * rho.rho22;
    let d21 = Complex64::new(0.0, -1.0) * v.conj() * (rho.rho11 - rho.rho22) - rates.k() * rho.rho21;
    DensityMatrix2 {
        rho11: -d22,
        rho22: d22,
        rho21: d21,
    }
}

pub fn evolve_master(
    generator: &Generator,
    rates: &DissipationRates,
    init: DensityMatrix2,
    cfg: &PropagationConfig,
) -> Result<DensityTrajectory> {
    cfg.validate()?;
    init.validate()?;
    let times = cfg.times();
    let ctl = cfg.step_control();
    let states: Vec<DensityMatrix2> = match generator {
        Generator::Effective { params, phase } => {
            if cfg.frame == Frame::Lab {
                return Err(Error::InvalidParameter(
                    "effective generator needs an effective frame".into(),
                ));
            }
            let rhs =
                |_: f64, y: &[f64; 4]| effective_rhs(params, *phase, rates, &DensityMatrix2::from_real(y)).to_real();
            let (ys, _) = integrate_dense(rhs, init.to_real(), &times, &ctl)?;
            ys.iter().map(DensityMatrix2::from_real).collect()
        }
        Generator::Lab { sys, drive } => {
            if cfg.frame != Frame::Lab {
                return Err(Error::InvalidParameter("lab generator needs the lab frame".into()));
            }
            let lab = LabCoupling::new(sys, drive)?;
            let rhs =
                |t: f64, y: &[f64; 4]| lab_interaction_rhs(&lab, rates, t, &DensityMatrix2::from_real(y)).to_real();
            let (ys, _) = integrate_dense(rhs, init.to_real(), &times, &ctl)?;
            times
                .iter()
                .zip(&ys)
                .map(|(&t, y)| {
                    let mut s = DensityMatrix2::from_real(y);
                    s.rho21 *= Complex64::from_polar(1.0, 2.0 * lab.diagonal_phase(t));
                    s
                })
                .collect()
        }
    };
    let traj = DensityTrajectory { times, states };
    let trace_err = traj.max_trace_error();
    if trace_err > DENSITY_BUDGET {
        return Err(Error::Accuracy {
            what: "trace drift".into(),
            achieved: trace_err,
            budget: DENSITY_BUDGET,
        });
    }
    let min_eig = traj.min_eigenvalue();
    if min_eig < -DENSITY_BUDGET {
        return Err(Error::Accuracy {
            what: "positivity".into(),
            achieved: -min_eig,
            budget: DENSITY_BUDGET,
        });
    }
    Ok(traj)
}

/// Closed-form stationary state of the H_L master equation.
pub fn steady_state(params: &EffectiveParams, rates: &DissipationRates, phase: f64) -> Result<DensityMatrix2> {
    let om = params.omega_l;
    let gamma = rates.decay;
    if om == 0.0 {
        if gamma == 0.0 {
            return Err(Error::InvalidParameter(
                "Ω_L = 0 and Γ = 0: every state is stationary".into(),
            ));
        }
        return Ok(DensityMatrix2::ground());
    }
    if gamma == 0.0 {
        return Err(Error::NoSteadyState(
            "Γ = 0 with Ω_L ≠ 0 has no population balance".into(),
        ));
    }
    let k = rates.k();
    let dp = params.delta_prime;
    let lorentz = k * k + dp * dp;
    let rho22 = 2.0 * om * om * k / (gamma * lorentz + 4.0 * om * om * k);
    let rho11 = 1.0 - rho22;
    let rho21 = Complex64::from_polar(om, -2.0 * phase) * (rho11 - rho22) * Complex64::new(dp, k) / lorentz;
    Ok(DensityMatrix2 { rho11, rho22, rho21 })
}

#[derive(Debug, Clone)]
pub struct SteadyConsistency {
    pub t_final: f64,
    pub steady: DensityMatrix2,
    pub long_time: DensityMatrix2,
    pub max_difference: f64,
    pub converged: bool,
}

pub const STEADY_TOLERANCE: f64 = 1e-6;

/// Integrate H_L from |1⟩ to t = 20/Γ and compare with [`steady_state`].
pub fn steady_vs_longtime(
    params: &EffectiveParams,
    rates: &DissipationRates,
    phase: f64,
    cfg: &PropagationConfig,
) -> Result<SteadyConsistency> {
    if !(rates.decay > 0.0) {
        return Err(Error::InvalidParameter("steady_vs_longtime needs Γ > 0".into()));
    }
    let steady = steady_state(params, rates, phase)?;
    let t_final = 20.0 / rates.decay;
    let run = PropagationConfig {
        t_end: t_final,
        frame: Frame::EffectiveSecondHarmonic,
        ..*cfg
    };
    let traj = evolve_master(
        &Generator::Effective { params: *params, phase },
        rates,
        DensityMatrix2::ground(),
        &run,
    )?;
    let long_time = *traj.last();
    let max_difference = long_time.max_abs_diff(&steady);
    Ok(SteadyConsistency {
        t_final,
        steady,
        long_time,
        max_difference,
        converged: max_difference < STEADY_TOLERANCE,
    })
}
