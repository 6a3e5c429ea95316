//! Driven two-level model of a surface-state electron and the closed-form
//! effective parameters of its first- and second-order rotating-frame
//! Hamiltonians.

use crate::constants::{bohr_radius, ELEMENTARY_CHARGE, GRAD_PER_S, HBAR, V_PER_CM};
use crate::{Error, Result};

/// Lowest two levels of the electron and their dipole matrix elements.
///
/// The diagonal elements `z11`, `z22` are nonzero because the wavefunctions
/// live on one side of the helium surface. `z12 = z21` is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelSystem {
    pub omega_e: f64,
    pub z11: f64,
    pub z22: f64,
    pub z12: f64,
}

impl TwoLevelSystem {
    pub fn new(omega_e: f64, z11: f64, z22: f64, z12: f64) -> Result<Self> {
        let sys = Self { omega_e, z11, z22, z12 };
        sys.validate()?;
        Ok(sys)
    }

    /// The working point used for the like-Rabi demonstration:
    /// ω_e = 220 Grad/s, z12 = 0.5 r_B, z22 − z11 = 2.3 r_B.
    ///
    /// `z11` is set to the bare ground-state value 1.5 r_B; only the
    /// difference enters the dynamics.
    pub fn surface_state_default() -> Self {
        let rb = bohr_radius();
        Self {
            omega_e: 220.0 * GRAD_PER_S,
            z11: 1.5 * rb,
            z22: 3.8 * rb,
            z12: 0.5 * rb,
        }
    }

    /// Same transition, parity-symmetric dipole (`z11 = z22`).
    pub fn natural_atom(&self) -> Self {
        Self { z22: self.z11, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_e.is_finite() && self.omega_e > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_e must be positive, got {}",
                self.omega_e
            )));
        }
        if !(self.z12.is_finite() && self.z12 != 0.0) {
            return Err(Error::InvalidParameter("z12 must be nonzero".into()));
        }
        if !(self.z11.is_finite() && self.z22.is_finite()) {
            return Err(Error::InvalidParameter("z11, z22 must be finite".into()));
        }
        Ok(())
    }

    /// Permanent-dipole difference z22 − z11.
    pub fn dipole_difference(&self) -> f64 {
        self.z22 - self.z11
    }
}

/// Classical microwave drive `E cos(ω_l t + φ)` along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    /// V/m
    pub amplitude: f64,
    pub omega_l: f64,
    pub phase: f64,
}

impl DriveField {
    pub fn new(amplitude: f64, omega_l: f64, phase: f64) -> Result<Self> {
        let d = Self {
            amplitude,
            omega_l,
            phase,
        };
        d.validate()?;
        Ok(d)
    }

    /// Drive tuned to the second-harmonic resonance Δ′ = 0, using the
    /// untruncated level shift.
    pub fn second_harmonic_resonant(sys: &TwoLevelSystem, amplitude: f64, phase: f64) -> Result<Self> {
        let omega_r = rabi_frequency(sys, amplitude);
        let delta = resonant_delta_exact(sys, omega_r)?;
        Self::new(amplitude, omega_l_for_delta(sys.omega_e, delta), phase)
    }

    pub fn amplitude_v_per_cm(&self) -> f64 {
        self.amplitude / V_PER_CM
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "drive amplitude must be non-negative, got {}",
                self.amplitude
            )));
        }
        if !(self.omega_l.is_finite() && self.omega_l > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_l must be positive, got {}",
                self.omega_l
            )));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter("phase must be finite".into()));
        }
        Ok(())
    }
}

/// Derived couplings of the driven system, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// Ω_R = z12 e E / (2ħ)
    pub omega_r: f64,
    /// Ω̃ = (z22 − z11) e E / (4ħ)
    pub omega_tilde: f64,
    /// δ = 2ω_l − ω_e
    pub delta: f64,
    /// Drive-induced shift of the transition.
    pub nu: f64,
    /// Second-order (two-photon) Rabi frequency.
    pub omega_l: f64,
    /// Δ′ = ν − δ
    pub delta_prime: f64,
    pub omega_e: f64,
    pub omega_drive: f64,
}

impl EffectiveParams {
    /// Ordinary detuning Δ = ω_e − ω_l of the first-order RWA frame.
    pub fn detuning(&self) -> f64 {
        self.omega_e - self.omega_drive
    }

    /// Weak-drive parameter ξ = max(|Ω_R|, |Ω̃|) / min(ω_l, ω_e).
    pub fn xi(&self) -> f64 {
        self.omega_r.abs().max(self.omega_tilde.abs()) / self.omega_drive.min(self.omega_e)
    }

    /// Effective parameters for the dimensionless H_L problem, where only
    /// Ω_L and Δ′ matter.
    pub fn from_effective(omega_l: f64, delta_prime: f64) -> Self {
        Self {
            omega_r: 0.0,
            omega_tilde: 0.0,
            delta: 0.0,
            nu: delta_prime,
            omega_l,
            delta_prime,
            omega_e: f64::NAN,
            omega_drive: f64::NAN,
        }
    }
}

/// Ω_R for a drive amplitude in V/m.
pub fn rabi_frequency(sys: &TwoLevelSystem, amplitude: f64) -> f64 {
    sys.z12 * ELEMENTARY_CHARGE * amplitude / (2.0 * HBAR)
}

/// Ω̃ for a drive amplitude in V/m.
pub fn stark_frequency(sys: &TwoLevelSystem, amplitude: f64) -> f64 {
    sys.dipole_difference() * ELEMENTARY_CHARGE * amplitude / (4.0 * HBAR)
}

/// Level shift ν(δ) = 4Ω_R² [1/(ω_e − δ) + 1/(3ω_e + δ)].
pub fn level_shift(omega_e: f64, omega_r: f64, delta: f64) -> f64 {
    4.0 * omega_r * omega_r * (1.0 / (omega_e - delta) + 1.0 / (3.0 * omega_e + delta))
}

/// ω_l such that 2ω_l − ω_e = δ.
pub fn omega_l_for_delta(omega_e: f64, delta: f64) -> f64 {
    0.5 * (omega_e + delta)
}

pub fn derive_drive_params(sys: &TwoLevelSystem, drive: &DriveField) -> Result<EffectiveParams> {
    sys.validate()?;
    drive.validate()?;
    let omega_e = sys.omega_e;
    let delta = 2.0 * drive.omega_l - omega_e;
    let pole = omega_e * omega_e - delta * delta;
    if pole.abs() <= 1e-12 * omega_e * omega_e {
        return Err(Error::Singular(format!(
            "δ² = ω_e² (δ = {delta:e} rad/s) is a pole of Ω_L"
        )));
    }
    let omega_r = rabi_frequency(sys, drive.amplitude);
    let omega_tilde = stark_frequency(sys, drive.amplitude);
    let nu = level_shift(omega_e, omega_r, delta);
    let omega_l = 4.0 * omega_r * omega_tilde * omega_e / pole;
    Ok(EffectiveParams {
        omega_r,
        omega_tilde,
        delta,
        nu,
        omega_l,
        delta_prime: nu - delta,
        omega_e,
        omega_drive: drive.omega_l,
    })
}

/// Closed-form Δ′ = 0 point from the first-order expansion of ν in δ/ω_e.
///
/// Returns `(δ, ω_l)` with δ = 48ω_eΩ_R²/(9ω_e² − 32Ω_R²).
pub fn resonant_delta(sys: &TwoLevelSystem, omega_r: f64) -> Result<(f64, f64)> {
    sys.validate()?;
    let we = sys.omega_e;
    let r2 = omega_r * omega_r;
    let denom = 9.0 * we * we - 32.0 * r2;
    if !(denom > 0.0) {
        return Err(Error::Regime(format!(
            "9ω_e² − 32Ω_R² = {denom:e} ≤ 0: drive too strong for the small-δ expansion"
        )));
    }
    let omega_l = we / 2.0 + 24.0 * we * r2 / denom;
    Ok((2.0 * omega_l - we, omega_l))
}

/// Root of ν(δ) − δ = 0 on (0, ω_e/2) with the untruncated level shift.
pub fn resonant_delta_exact(sys: &TwoLevelSystem, omega_r: f64) -> Result<f64> {
    sys.validate()?;
    let we = sys.omega_e;
    if omega_r == 0.0 {
        return Ok(0.0);
    }
    let f = |d: f64| level_shift(we, omega_r, d) - d;
    let (mut lo, mut hi) = (0.0, 0.5 * we);
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::NoResonance(format!(
            "ν(δ) − δ has no sign change on (0, ω_e/2): f(0) = {flo:e}, f(ω_e/2) = {fhi:e}"
        )));
    }
    let target = 1e-12 * we;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let root = 0.5 * (lo + hi);
    let residual = f(root).abs();
    if residual < target {
        Ok(root)
    } else {
        Err(Error::Accuracy {
            what: "resonance bisection residual".into(),
            achieved: residual,
            budget: target,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = GRAD_PER_S;

    fn fig1() -> (TwoLevelSystem, DriveField) {
        let sys = TwoLevelSystem::surface_state_default();
        let drive = DriveField::second_harmonic_resonant(&sys, 15.0 * V_PER_CM, 0.0).unwrap();
        (sys, drive)
    }

    #[test]
    fn working_point_couplings() {
        let (sys, drive) = fig1();
        let p = derive_drive_params(&sys, &drive).unwrap();
        assert!((p.omega_r / G - 4.3).abs() < 0.05 * 4.3, "{}", p.omega_r / G);
        assert!((p.omega_tilde / G - 10.0).abs() < 0.05 * 10.0, "{}", p.omega_tilde / G);
        assert!((p.omega_l / G - 0.8).abs() < 0.1 * 0.8, "{}", p.omega_l / G);
        assert!(p.delta_prime.abs() < 1e-11 * sys.omega_e);
        assert!(p.xi() < 0.1);
    }

    #[test]
    fn zero_drive_has_no_couplings() {
        let sys = TwoLevelSystem::surface_state_default();
        let drive = DriveField::new(0.0, 110.0 * G, 0.3).unwrap();
        let p = derive_drive_params(&sys, &drive).unwrap();
        assert_eq!((p.omega_r, p.omega_tilde, p.omega_l, p.nu), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn natural_atom_has_no_two_photon_coupling() {
        let (sys, drive) = fig1();
        let p = derive_drive_params(&sys.natural_atom(), &drive).unwrap();
        assert_eq!(p.omega_tilde, 0.0);
        assert_eq!(p.omega_l, 0.0);
        assert!(p.omega_r > 0.0);
    }

    #[test]
    fn pole_is_rejected() {
        let sys = TwoLevelSystem::surface_state_default();
        // δ = ω_e  ⇔  ω_l = ω_e
        let drive = DriveField::new(1500.0, sys.omega_e, 0.0).unwrap();
        assert!(matches!(derive_drive_params(&sys, &drive), Err(Error::Singular(_))));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(TwoLevelSystem::new(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(TwoLevelSystem::new(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(DriveField::new(-1.0, 1.0, 0.0).is_err());
        assert!(DriveField::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn omega_l_scales_quadratically() {
        let sys = TwoLevelSystem::surface_state_default();
        let a = DriveField::new(1500.0, 110.2 * G, 0.0).unwrap();
        let b = DriveField { amplitude: 3000.0, ..a };
        let pa = derive_drive_params(&sys, &a).unwrap();
        let pb = derive_drive_params(&sys, &b).unwrap();
        assert_eq!(pb.omega_r / pa.omega_r, 2.0);
        assert_eq!(pb.omega_tilde / pa.omega_tilde, 2.0);
        assert!((pb.omega_l / pa.omega_l - 4.0).abs() < 4.0 * f64::EPSILON * 4.0);
    }

    #[test]
    fn derive_is_deterministic() {
        let (sys, drive) = fig1();
        let a = derive_drive_params(&sys, &drive).unwrap();
        let b = derive_drive_params(&sys, &drive).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn closed_form_undriven_limit() {
        let sys = TwoLevelSystem::surface_state_default();
        let (d, wl) = resonant_delta(&sys, 0.0).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(wl, sys.omega_e / 2.0);
        assert_eq!(resonant_delta_exact(&sys, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_working_point() {
        let sys = TwoLevelSystem::surface_state_default();
        let (d, wl) = resonant_delta(&sys, 4.3 * G).unwrap();
        // 48·220·4.3² / (9·220² − 32·4.3²) = 195 254.4 / 434 808.32
        let expected = 48.0 * 220.0 * 4.3 * 4.3 / (9.0 * 220.0 * 220.0 - 32.0 * 4.3 * 4.3);
        assert!((d / G - expected).abs() < 1e-9);
        assert!((d / G - 0.4489).abs() < 1e-4);
        assert_eq!(d, 2.0 * wl - sys.omega_e);
    }

    #[test]
    fn closed_form_rejects_strong_drive() {
        let sys = TwoLevelSystem::surface_state_default();
        let too_strong = sys.omega_e * (9.0f64 / 32.0).sqrt() * 1.01;
        assert!(matches!(resonant_delta(&sys, too_strong), Err(Error::Regime(_))));
    }

    /// Independent fixed-point oracle: δ ← ν(δ) contracts because |ν′| ≪ 1.
    fn fixed_point_delta(we: f64, wr: f64) -> f64 {
        let mut d = 0.0;
        for _ in 0..200 {
            d = level_shift(we, wr, d);
        }
        d
    }

    #[test]
    fn exact_root_matches_fixed_point_and_closed_form() {
        let sys = TwoLevelSystem::surface_state_default();
        let wr = 4.3 * G;
        let exact = resonant_delta_exact(&sys, wr).unwrap();
        let oracle = fixed_point_delta(sys.omega_e, wr);
        assert!((exact - oracle).abs() < 1e-12 * sys.omega_e);
        assert!((level_shift(sys.omega_e, wr, exact) - exact).abs() < 1e-12 * sys.omega_e);
        let (closed, _) = resonant_delta(&sys, wr).unwrap();
        let rel = (exact - closed).abs() / exact;
        assert!(rel < 0.01, "rel = {rel}");
        // agreement is second order in δ/ω_e
        let ratio = exact / sys.omega_e;
        assert!(
            rel < 10.0 * ratio * ratio + 1e-12,
            "rel = {rel}, (δ/ω_e)² = {}",
            ratio * ratio
        );
    }

    #[test]
    fn exact_root_is_monotone_in_rabi_frequency() {
        let sys = TwoLevelSystem::surface_state_default();
        let mut last = 0.0;
        for k in 1..=40 {
            let wr = sys.omega_e / 10.0 * k as f64 / 40.0;
            let d = resonant_delta_exact(&sys, wr).unwrap();
            assert!(d > last, "k = {k}");
            last = d;
        }
    }

    #[test]
    fn exact_root_fails_without_bracket() {
        let sys = TwoLevelSystem::surface_state_default();
        assert!(matches!(
            resonant_delta_exact(&sys, sys.omega_e),
            Err(Error::NoResonance(_))
        ));
    }
}
