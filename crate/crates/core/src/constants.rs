//! Physical constants (SI) and the image-potential scales of electrons above
//! liquid helium.

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Dielectric constant of liquid helium-4 near 1 K.
pub const EPSILON_HELIUM: f64 = 1.0572;

/// 1 V/cm in V/m.
pub const V_PER_CM: f64 = 100.0;
/// 1 Å in m.
pub const ANGSTROM: f64 = 1e-10;
/// 10⁹ rad/s, the natural frequency unit of the drive problem.
pub const GRAD_PER_S: f64 = 1e9;
/// 1 ns in s.
pub const NANOSECOND: f64 = 1e-9;

/// Constants of the surface-state problem.
///
/// `rydberg` is the binding scale `R` as an angular frequency and `bohr_radius`
/// the effective Bohr radius of the image potential `-Λe²/z`. Both are
/// Gaussian-unit formulas mapped to SI through `e² → e²/(4πε₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub electron_charge: f64,
    pub hbar: f64,
    pub electron_mass: f64,
    pub epsilon_he: f64,
    pub lambda: f64,
    pub rydberg: f64,
    pub bohr_radius: f64,
}

impl PhysicalConstants {
    pub fn for_dielectric(epsilon_he: f64) -> Self {
        let lambda = image_factor(epsilon_he);
        let e2 = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);
        let rydberg_joule = lambda * lambda * e2 * e2 * ELECTRON_MASS / (2.0 * HBAR * HBAR);
        let bohr_radius = HBAR * HBAR / (ELECTRON_MASS * e2 * lambda);
        Self {
            electron_charge: ELEMENTARY_CHARGE,
            hbar: HBAR,
            electron_mass: ELECTRON_MASS,
            epsilon_he,
            lambda,
            rydberg: rydberg_joule / HBAR,
            bohr_radius,
        }
    }

    pub fn helium() -> Self {
        Self::for_dielectric(EPSILON_HELIUM)
    }

    /// Binding energy in joules.
    pub fn rydberg_energy(&self) -> f64 {
        self.rydberg * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::helium()
    }
}

/// Image-charge factor Λ = (ε − 1) / (4(ε + 1)).
pub fn image_factor(epsilon: f64) -> f64 {
    (epsilon - 1.0) / (4.0 * (epsilon + 1.0))
}

/// Effective Bohr radius of liquid helium, m.
pub fn bohr_radius() -> f64 {
    PhysicalConstants::helium().bohr_radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn lambda_matches_definition() {
        let c = PhysicalConstants::helium();
        assert!(c.lambda > 0.0);
        assert_eq!(c.lambda, (c.epsilon_he - 1.0) / (4.0 * (c.epsilon_he + 1.0)));
    }

    #[test]
    fn bohr_radius_is_about_76_angstrom() {
        let rb = bohr_radius() / ANGSTROM;
        assert!((rb - 76.0).abs() / 76.0 < 0.01, "r_B = {rb} Å");
    }

    #[test]
    fn rydberg_is_sub_terahertz() {
        let c = PhysicalConstants::helium();
        let thz = c.rydberg / TAU / 1e12;
        // quoted as ≈0.17 THz; ε = 1.0572 gives 0.159 THz
        assert!((thz - 0.17).abs() / 0.17 < 0.10, "R/h = {thz} THz");
    }

    #[test]
    fn rydberg_and_bohr_are_consistent() {
        // R = ħ² / (2 m r_B²) for any hydrogenic problem
        let c = PhysicalConstants::helium();
        let r = c.hbar * c.hbar / (2.0 * c.electron_mass * c.bohr_radius * c.bohr_radius);
        assert!((r - c.rydberg_energy()).abs() / r < 1e-12);
    }
}
