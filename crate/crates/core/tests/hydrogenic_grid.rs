use sse_fd_core::constants::{PhysicalConstants, V_PER_CM};
use sse_fd_core::hydrogenic::{analytic_energy, grid_eigensolve, stark_slope, SurfaceStateBasis, DEFAULT_STARK_STEP};

fn rb() -> f64 {
    PhysicalConstants::helium().bohr_radius
}

#[test]
fn bare_spectrum_reproduces_rydberg_series() {
    let sol = grid_eigensolve(&SurfaceStateBasis::default_for(3, 0.0).unwrap()).unwrap();
    for n in 1..=3u32 {
        let exact = analytic_energy(n).unwrap();
        let rel = (sol.energies[n as usize - 1] - exact).abs() / exact.abs();
        assert!(rel < 1e-3, "n = {n}: rel = {rel:e}");
    }
    assert!(sol.energies.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn eigenvectors_are_orthonormal_and_vanish_at_wall() {
    let sol = grid_eigensolve(&SurfaceStateBasis::default_for(3, 0.0).unwrap()).unwrap();
    for m in 1..=3 {
        for n in 1..=3 {
            let expect = if m == n { 1.0 } else { 0.0 };
            assert!((sol.overlap(m, n) - expect).abs() < 1e-6, "({m},{n})");
        }
        // first interior node is one spacing from the wall: ψ ≈ ψ′(0)·h
        let h = sol.grid[0];
        let first = sol.wavefunctions[m - 1][0];
        assert!(first.abs() < 1e-2 / h.sqrt());
    }
}

#[test]
fn numerical_ground_state_dipole() {
    let sol = grid_eigensolve(&SurfaceStateBasis::default_for(2, 0.0).unwrap()).unwrap();
    let z11 = sol.matrix_element(1, 1) / rb();
    assert!((z11 - 1.5).abs() / 1.5 < 5e-3, "z11 = {z11}");
    let z22 = sol.matrix_element(2, 2) / rb();
    assert!((z22 - 6.0).abs() / 6.0 < 5e-3, "z22 = {z22}");
}

#[test]
fn refinement_changes_eigenvalues_little() {
    let coarse = SurfaceStateBasis::default_for(3, 0.0).unwrap();
    let fine = SurfaceStateBasis::uniform(3, *coarse.grid.last().unwrap(), 2 * coarse.grid.len(), 0.0).unwrap();
    let a = grid_eigensolve(&coarse).unwrap();
    let b = grid_eigensolve(&fine).unwrap();
    for (x, y) in a.energies.iter().zip(&b.energies) {
        assert!(((x - y) / y).abs() < 1e-4);
    }
}

#[test]
fn stark_slope_matches_first_order_perturbation() {
    let basis = SurfaceStateBasis::default_for(2, 0.0).unwrap();
    let s = stark_slope(&basis, DEFAULT_STARK_STEP).unwrap();
    assert!(s.warning.is_none(), "{:?}", s.warning);
    assert!((s.slope - s.perturbative).abs() / s.perturbative < 0.02);
    // e·4.5 r_B/h ≈ 0.83 GHz per V/cm
    let bare = sse_fd_core::constants::ELEMENTARY_CHARGE * 4.5 * rb() / sse_fd_core::constants::PLANCK * V_PER_CM;
    assert!((bare / 1e9 - 0.83).abs() < 0.01);
    assert!(
        (s.slope / 1e9 - 0.8).abs() / 0.8 < 0.10,
        "slope = {} GHz/(V/cm)",
        s.slope / 1e9
    );
    // step independence to three significant figures
    let s2 = stark_slope(&basis, 2.0 * DEFAULT_STARK_STEP).unwrap();
    assert!((s.slope - s2.slope).abs() / s.slope < 5e-4);
}

#[test]
fn large_step_flags_nonlinearity() {
    let basis = SurfaceStateBasis::default_for(2, 0.0).unwrap();
    let s = stark_slope(&basis, 2.0 * V_PER_CM).unwrap();
    assert!(s.warning.is_some());
}
