//! One-dimensional hydrogen-like surface states above a hard wall at z = 0.
//!
//! The electron sees the image potential −Λe²/z (Gaussian units) and, with a
//! vertical holding field E⊥, the extra energy eE⊥z. In reduced units
//! x = z/r_B and ε = E/R the Hamiltonian is `−d²/dx² − 2/x + f·x` with
//! `f = eE⊥r_B/R`, whose bare spectrum is ε_n = −1/n².

use crate::constants::{PhysicalConstants, PLANCK, V_PER_CM};
use crate::quadrature::integrate_to_infinity;
use crate::tridiag::SymTridiagonal;
use crate::{Error, Result};

/// E_n = −R/n² as an angular frequency.
pub fn analytic_energy(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("level index starts at 1".into()));
    }
    Ok(-PhysicalConstants::helium().rydberg / (n as f64 * n as f64))
}

/// Closed-form eigenfunctions in reduced units (x = z/r_B, unit norm in x).
fn reduced_wavefunction(n: u32, x: f64) -> Result<f64> {
    match n {
        1 => Ok(2.0 * x * (-x).exp()),
        2 => Ok(std::f64::consts::FRAC_1_SQRT_2 * x * (1.0 - 0.5 * x) * (-0.5 * x).exp()),
        _ => Err(Error::Domain(format!(
            "closed-form wavefunction only for n ∈ {{1, 2}}, got {n}"
        ))),
    }
}

/// ψ_n(z) in m^{−1/2} for n ∈ {1, 2}.
pub fn analytic_wavefunction(n: u32, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("z must be non-negative, got {z}")));
    }
    let rb = PhysicalConstants::helium().bohr_radius;
    Ok(reduced_wavefunction(n, z / rb)? / rb.sqrt())
}

/// Relative accuracy demanded of the matrix-element quadrature.
pub const MATRIX_ELEMENT_TOL: f64 = 1e-12;

/// ⟨m|z|n⟩ in units of r_B.
pub fn dipole_matrix_element_rb(m: u32, n: u32) -> Result<f64> {
    reduced_wavefunction(m, 0.0)?;
    reduced_wavefunction(n, 0.0)?;
    let f = |x: f64| reduced_wavefunction(m, x).unwrap_or(0.0) * x * reduced_wavefunction(n, x).unwrap_or(0.0);
    integrate_to_infinity(f, 0.0, 1e-15, MATRIX_ELEMENT_TOL).map(|r| r.value)
}

/// ⟨m|z|n⟩ in metres, by adaptive quadrature of the closed-form states.
pub fn dipole_matrix_element(m: u32, n: u32) -> Result<f64> {
    Ok(dipole_matrix_element_rb(m, n)? * PhysicalConstants::helium().bohr_radius)
}

/// Uniform grid with Dirichlet walls at z = 0 and one step past the last
/// sample. `grid` holds the interior nodes `z_i = i·h`, i = 1..N.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceStateBasis {
    pub n_max: usize,
    pub grid: Vec<f64>,
    /// V/m
    pub holding_field: f64,
}

/// Default spacing r_B/100.
pub const DEFAULT_POINTS_PER_RB: usize = 100;
pub const MIN_GRID_POINTS: usize = 2000;
/// Largest tolerated eigenvalue change under 2× refinement.
pub const REFINEMENT_TOL: f64 = 1e-4;

impl SurfaceStateBasis {
    /// Grid of `points` interior nodes spanning (0, z_max].
    pub fn uniform(n_max: usize, z_max: f64, points: usize, holding_field: f64) -> Result<Self> {
        if points < 2 || !(z_max > 0.0) {
            return Err(Error::InvalidParameter("grid needs ≥ 2 points and z_max > 0".into()));
        }
        let h = z_max / points as f64;
        let grid = (1..=points).map(|i| i as f64 * h).collect();
        let basis = Self {
            n_max,
            grid,
            holding_field,
        };
        basis.validate()?;
        Ok(basis)
    }

    /// Default grid for the lowest `n_max` levels: spacing r_B/100 on
    /// (0, max(200, 40·n_max²)·r_B].
    pub fn default_for(n_max: usize, holding_field: f64) -> Result<Self> {
        let rb = PhysicalConstants::helium().bohr_radius;
        let span_rb = (40 * n_max * n_max).max(200);
        Self::uniform(
            n_max,
            span_rb as f64 * rb,
            span_rb * DEFAULT_POINTS_PER_RB,
            holding_field,
        )
    }

    pub fn spacing(&self) -> f64 {
        self.grid[0]
    }

    pub fn validate(&self) -> Result<()> {
        let rb = PhysicalConstants::helium().bohr_radius;
        if self.n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        if self.grid.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points, need at least {MIN_GRID_POINTS}",
                self.grid.len()
            )));
        }
        let h = self.grid[0];
        let uniform = self
            .grid
            .iter()
            .enumerate()
            .all(|(i, z)| (z - (i + 1) as f64 * h).abs() <= 1e-9 * z);
        if !(h > 0.0 && uniform) {
            return Err(Error::InvalidParameter(
                "grid must be uniform with first node at one spacing".into(),
            ));
        }
        if h > rb / 100.0 * (1.0 + 1e-9) {
            return Err(Error::InvalidParameter("grid must start at or below r_B/100".into()));
        }
        let need = 40.0 * (self.n_max * self.n_max) as f64 * rb;
        if *self.grid.last().unwrap() < need * (1.0 - 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "grid must reach 40·n_max²·r_B = {need:e} m"
            )));
        }
        if !self.holding_field.is_finite() {
            return Err(Error::InvalidParameter("holding field must be finite".into()));
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        let n = 2 * self.grid.len() + 1;
        let h = 0.5 * self.spacing();
        Self {
            n_max: self.n_max,
            grid: (1..=n).map(|i| i as f64 * h).collect(),
            holding_field: self.holding_field,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// rad/s, ascending
    pub energies: Vec<f64>,
    /// ψ_n on the basis grid, m^{−1/2}, positive next to the wall
    pub wavefunctions: Vec<Vec<f64>>,
    pub grid: Vec<f64>,
}

impl EigenSolution {
    /// ⟨m|z|n⟩ (1-based levels) by trapezoidal quadrature on the grid, m.
    pub fn matrix_element(&self, m: usize, n: usize) -> f64 {
        let h = self.grid[0];
        let (a, b) = (&self.wavefunctions[m - 1], &self.wavefunctions[n - 1]);
        h * self.grid.iter().zip(a).zip(b).map(|((z, x), y)| x * z * y).sum::<f64>()
    }

    /// ∫ψ_m ψ_n dz.
    pub fn overlap(&self, m: usize, n: usize) -> f64 {
        let h = self.grid[0];
        let (a, b) = (&self.wavefunctions[m - 1], &self.wavefunctions[n - 1]);
        h * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }

    /// (E2 − E1), rad/s.
    pub fn transition(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

fn solve_reduced(basis: &SurfaceStateBasis, consts: &PhysicalConstants) -> (Vec<f64>, Vec<Vec<f64>>) {
    let rb = consts.bohr_radius;
    let h = basis.spacing() / rb;
    let f = consts.electron_charge * basis.holding_field * rb / consts.rydberg_energy();
    let inv_h2 = 1.0 / (h * h);
    let diag = basis
        .grid
        .iter()
        .map(|z| {
            let x = z / rb;
            2.0 * inv_h2 - 2.0 / x + f * x
        })
        .collect();
    let off = vec![-inv_h2; basis.grid.len() - 1];
    let t = SymTridiagonal::new(diag, off);
    let mut energies = Vec::with_capacity(basis.n_max);
    let mut vectors = Vec::with_capacity(basis.n_max);
    for k in 0..basis.n_max {
        let e = t.eigenvalue(k);
        let mut v = t.eigenvector(e);
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        energies.push(e);
        vectors.push(v);
    }
    (energies, vectors)
}

/// Lowest `n_max` eigenpairs of the finite-difference Hamiltonian.
///
/// The eigenvalues are cross-checked against a grid with half the spacing;
/// a relative change above [`REFINEMENT_TOL`] is an accuracy error.
pub fn grid_eigensolve(basis: &SurfaceStateBasis) -> Result<EigenSolution> {
    basis.validate()?;
    let consts = PhysicalConstants::helium();
    let (reduced, vectors) = solve_reduced(basis, &consts);
    let (fine, _) = solve_reduced(&basis.refined(), &consts);
    let change = reduced
        .iter()
        .zip(&fine)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    if change > REFINEMENT_TOL {
        return Err(Error::Accuracy {
            what: "eigenvalue change under grid refinement".into(),
            achieved: change,
            budget: REFINEMENT_TOL,
        });
    }
    let h = basis.spacing();
    let wavefunctions = vectors
        .into_iter()
        .map(|v| {
            let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    Ok(EigenSolution {
        energies: reduced.iter().map(|e| e * consts.rydberg).collect(),
        wavefunctions,
        grid: basis.grid.clone(),
    })
}

/// Linear Stark tuning of the 1→2 transition frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct StarkSlope {
    /// Central finite difference of ν_e = (E2 − E1)/h, Hz per V/cm.
    pub slope: f64,
    /// First-order value e(z22 − z11)/h from the eigenvectors, Hz per V/cm.
    pub perturbative: f64,
    /// Relative difference of the forward and backward one-sided slopes.
    pub nonlinearity: f64,
    /// Field step, V/m.
    pub step: f64,
    pub warning: Option<String>,
}

pub const STARK_LINEARITY_TOL: f64 = 0.01;
/// Field step for the central difference; the n = 2 level is linear to
/// 0.3% over ±0.2 V/cm.
pub const DEFAULT_STARK_STEP: f64 = 0.2 * V_PER_CM;

/// dν_e/dE⊥ at `basis.holding_field` from solves at E⊥ ± `step` (V/m).
pub fn stark_slope(basis: &SurfaceStateBasis, step: f64) -> Result<StarkSlope> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("field step must be positive".into()));
    }
    let mut b = basis.clone();
    b.n_max = b.n_max.max(2);
    let at = |field: f64| -> Result<EigenSolution> {
        let mut bb = b.clone();
        bb.holding_field = field;
        grid_eigensolve(&bb)
    };
    let f0 = basis.holding_field;
    let centre = at(f0)?;
    let nu = |s: &EigenSolution| s.transition() / std::f64::consts::TAU;
    let (minus, plus) = (nu(&at(f0 - step)?), nu(&at(f0 + step)?));
    let mid = nu(&centre);
    let per_v_per_cm = V_PER_CM / step;
    let slope = (plus - minus) / 2.0 * per_v_per_cm;
    let forward = (plus - mid) * per_v_per_cm;
    let backward = (mid - minus) * per_v_per_cm;
    let nonlinearity = (forward - backward).abs() / slope.abs();
    let dz = centre.matrix_element(2, 2) - centre.matrix_element(1, 1);
    let perturbative = PhysicalConstants::helium().electron_charge * dz / PLANCK * V_PER_CM;
    let warning = (nonlinearity > STARK_LINEARITY_TOL).then(|| {
        format!(
            "transition is not linear over ±{step} V/m: one-sided slopes differ by {:.2}%",
            100.0 * nonlinearity
        )
    });
    Ok(StarkSlope {
        slope,
        perturbative,
        nonlinearity,
        step,
        warning,
    })
}
