//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::cell::Cell;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};
use sse_fd::config::ScenarioConfig;
use sse_fd::presets::preset;
use sse_fd::sweep::sweep_csv;
use sse_fd_core::coherent::{compare_exact_vs_effective, propagate_lab, Frame, PropagationConfig, PureState2};
use sse_fd_core::constants::{bohr_radius, GRAD_PER_S, V_PER_CM};
use sse_fd_core::hydrogenic::{
    analytic_energy, dipole_matrix_element_rb, grid_eigensolve, stark_slope, SurfaceStateBasis, DEFAULT_STARK_STEP,
};
use sse_fd_core::lindblad::{
    evolve_master, steady_state, steady_vs_longtime, DensityMatrix2, DissipationRates, Generator,
};
use sse_fd_core::model::{derive_drive_params, DriveField, EffectiveParams};
use sse_fd_core::radiation::{intensity_lorentzian, spectrum_from_dynamics, SpectrumConfig, SpectrumSource};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn load(name: &str) -> Result<ScenarioConfig, String> {
    preset(name).map_err(|e| e.to_string())
}

fn effective_parameters() -> Outcome {
    let cfg = load("fig1a")?;
    let rb = bohr_radius();
    let sys = cfg.system().map_err(|e| e.to_string())?;
    let setup_ok = sys.omega_e == 220.0 * GRAD_PER_S
        && rel(sys.z12, 0.5 * rb) < 1e-12
        && rel(sys.z22 - sys.z11, 2.3 * rb) < 1e-12
        && cfg.drive.amplitude_v_per_cm == 15.0;
    let r = cfg.resolve().map_err(|e| e.to_string())?;
    let p = r.params.ok_or("singular drive")?;
    let (or, ot, ol) = (
        p.omega_r / GRAD_PER_S,
        p.omega_tilde / GRAD_PER_S,
        p.omega_l / GRAD_PER_S,
    );
    check(
        setup_ok && rel(or, 4.3) <= 0.05 && rel(ot, 10.0) <= 0.05 && rel(ol, 0.8) <= 0.10 && p.delta_prime.abs() < 1e-3,
        format!(
            "Ω_R = {or:.4}, Ω̃ = {ot:.4}, Ω_L = {ol:.4} Grad/s, Δ′ = {:.1e} rad/s",
            p.delta_prime
        ),
    )
}

fn like_rabi() -> Outcome {
    let cfg = load("fig1a")?;
    let r = cfg.resolve().map_err(|e| e.to_string())?;
    let rep = compare_exact_vs_effective(&r.sys, &r.drive, &cfg.propagation()).map_err(|e| e.to_string())?;
    let om = rep.params.omega_l.abs();
    // ρ22 = sin²(Ω_L t) under H_L: envelope period π/Ω_L, angular frequency 2Ω_L.
    let period = PI / om;
    let first_max = rep
        .exact
        .times
        .iter()
        .zip(&rep.exact.rho22)
        .filter(|(t, _)| **t <= period)
        .map(|(_, v)| *v)
        .fold(0.0, f64::max);
    let f = rep.exact_frequency.ok_or("no dominant frequency")?;
    let f_err = rel(f, 2.0 * om);
    let gap = rep
        .exact
        .times
        .iter()
        .enumerate()
        .filter(|(_, t)| **t <= 2.0 * period)
        .map(|(i, _)| {
            let t = rep.exact.times[i];
            (rep.exact.rho22[i] - (om * t).sin().powi(2)).abs()
        })
        .fold(0.0, f64::max);
    check(
        first_max > 0.9 && f_err <= 0.15 && gap < 0.15,
        format!(
            "first max ρ22 = {first_max:.4}, envelope {:.4} vs 2Ω_L {:.4} Grad/s ({:.2}%), gap {gap:.4}",
            f / GRAD_PER_S,
            2.0 * om / GRAD_PER_S,
            100.0 * f_err
        ),
    )
}

fn rwa_convergence() -> Outcome {
    let cfg = load("fig1a")?;
    let sys = cfg.system().map_err(|e| e.to_string())?;
    let e0 = cfg.drive.amplitude_v_per_cm * V_PER_CM;
    let mut devs = Vec::new();
    for s in [1.0, 0.5, 0.25] {
        let drive = DriveField::second_harmonic_resonant(&sys, e0 * s, 0.0).map_err(|e| e.to_string())?;
        let p = derive_drive_params(&sys, &drive).map_err(|e| e.to_string())?;
        // Two envelope periods, sampled well inside the fast wiggle.
        let t_end = TAU / p.omega_l.abs();
        let n = (t_end / 5e-12).ceil() as usize + 1;
        let rep = compare_exact_vs_effective(&sys, &drive, &PropagationConfig::new(t_end, n, Frame::Lab))
            .map_err(|e| e.to_string())?;
        devs.push(rep.max_deviation);
    }
    check(
        devs[0] > devs[1] && devs[1] > devs[2],
        format!(
            "max |Δρ22| at E, E/2, E/4: {:.4}, {:.4}, {:.4}",
            devs[0], devs[1], devs[2]
        ),
    )
}

fn natural_atom() -> Outcome {
    let cfg = load("natural-atom")?;
    let r = cfg.resolve().map_err(|e| e.to_string())?;
    let sym = load("fig1a")?.resolve().map_err(|e| e.to_string())?;
    let same_drive = r.drive == sym.drive && r.sys.z11 == r.sys.z22;
    let tr = propagate_lab(&r.sys, &r.drive, PureState2::ground(), &cfg.propagation()).map_err(|e| e.to_string())?;
    let m = tr.max_rho22();
    check(
        same_drive && m <= 0.012,
        format!("max ρ22 = {m:.5} over {:.0} ns", cfg.propagation.t_end_ns),
    )
}

fn boxcar_centred(v: &[f64], i: usize, m: usize) -> f64 {
    // Trapezoidal mean over exactly m samples, one drive period.
    let s: f64 = v[i - m / 2..=i + m / 2].iter().sum::<f64>() - 0.5 * (v[i - m / 2] + v[i + m / 2]);
    s / m as f64
}

fn damped_oscillation() -> Outcome {
    let cfg = load("fig1b")?;
    let r = cfg.resolve().map_err(|e| e.to_string())?;
    let p = r.params.ok_or("singular drive")?;
    let rates = cfg.rates(Some(&p)).map_err(|e| e.to_string())?;
    let rate_ok = rel(rates.decay, p.omega_l / 10.0) < 1e-12 && rel(rates.dephasing, p.omega_l / 10.0) < 1e-12;

    let prop = cfg.propagation();
    let hl = evolve_master(
        &Generator::Effective {
            params: p,
            phase: r.drive.phase,
        },
        &rates,
        DensityMatrix2::ground(),
        &prop,
    )
    .map_err(|e| e.to_string())?;
    let steady = steady_state(&p, &rates, r.drive.phase).map_err(|e| e.to_string())?;
    let rho22 = hl.rho22();
    let crossings = rho22
        .windows(2)
        .filter(|w| (w[0] - steady.rho22) * (w[1] - steady.rho22) < 0.0)
        .count();

    let long = steady_vs_longtime(&p, &rates, r.drive.phase, &prop).map_err(|e| e.to_string())?;

    // Period-aligned sampling so a one-period boxcar removes the fast wiggle.
    let m = 32;
    let period = TAU / r.drive.omega_l;
    let periods = (prop.t_end / period).ceil() as usize;
    let grid = PropagationConfig {
        t_end: period * periods as f64,
        output_samples: periods * m + 1,
        ..prop
    };
    let lab = evolve_master(
        &Generator::Lab {
            sys: r.sys,
            drive: r.drive,
        },
        &rates,
        DensityMatrix2::ground(),
        &PropagationConfig {
            frame: Frame::Lab,
            ..grid
        },
    )
    .map_err(|e| e.to_string())?;
    let eff = evolve_master(
        &Generator::Effective {
            params: p,
            phase: r.drive.phase,
        },
        &rates,
        DensityMatrix2::ground(),
        &PropagationConfig {
            frame: Frame::EffectiveSecondHarmonic,
            ..grid
        },
    )
    .map_err(|e| e.to_string())?;
    let (a, b) = (eff.rho22(), lab.rho22());
    let envelope_gap = (m / 2..a.len() - m / 2)
        .map(|i| (boxcar_centred(&b, i, m) - a[i]).abs())
        .fold(0.0, f64::max);

    check(
        rate_ok && crossings >= 3 && long.max_difference <= 1e-6 && envelope_gap < 0.05,
        format!(
            "{crossings} crossings of the steady ρ22, |ρ(∞) − ρ_ss| = {:.2e}, lab vs H_L envelope gap {envelope_gap:.4}",
            long.max_difference
        ),
    )
}

/// Independent oracle: solve the resonant-frame Bloch equations at steady
/// state (φ = 0) by Gaussian elimination for (Re ρ21, Im ρ21, ρ22).
fn bloch_steady(om: f64, dp: f64, gamma: f64, k: f64) -> (f64, f64, f64) {
    // 0 = 2Ω y − Γ p ; 0 = −K x + Δ′ y ; 0 = Ω(1 − 2p) − K y − Δ′ x
    let mut a = [
        [0.0, 2.0 * om, -gamma, 0.0],
        [-k, dp, 0.0, 0.0],
        [-dp, -k, -2.0 * om, -om],
    ];
    for c in 0..3 {
        let piv = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        for r in 0..3 {
            if r != c {
                let f = a[r][c] / a[c][c];
                let pivot = a[c];
                for (x, p) in a[r].iter_mut().zip(pivot).skip(c) {
                    *x -= f * p;
                }
            }
        }
    }
    (a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2])
}

fn lineshape() -> Outcome {
    let rates = DissipationRates::new(1.0, 1.0).map_err(|e| e.to_string())?;
    let mut curves = Vec::new();
    for om in [0.1, 0.2, 0.3] {
        curves.push(
            intensity_lorentzian(&EffectiveParams::from_effective(om, 0.0), &rates, (-5.0, 5.0), 101)
                .map_err(|e| e.to_string())?,
        );
    }
    let n = curves[0].intensity.len();
    let mut even = 0.0f64;
    let mut peaks_ok = true;
    for c in &curves {
        for i in 0..n {
            even = even.max(rel(c.intensity[i], c.intensity[n - 1 - i]));
        }
        peaks_ok &= c.peak().0 == 0.0;
    }
    let ordered = (0..n)
        .all(|i| curves[0].intensity[i] < curves[1].intensity[i] && curves[1].intensity[i] < curves[2].intensity[i]);
    let peak = curves[0].intensity[n / 2];
    let (x, y, _) = bloch_steady(0.1, 0.0, 1.0, 1.0);
    let oracle = x * x + y * y;
    let mut eq15 = 0.0f64;
    for om in [0.01, 0.05, 0.1] {
        let c = intensity_lorentzian(&EffectiveParams::from_effective(om, 0.0), &rates, (-5.0, 5.0), 201)
            .map_err(|e| e.to_string())?;
        for i in 0..c.intensity.len() {
            eq15 = eq15.max(rel(c.intensity_approx[i], c.intensity[i]));
        }
    }
    // The oracle also checks a detuned point.
    let (x, y, _) = bloch_steady(0.2, 1.7, 1.0, 1.0);
    let detuned = steady_state(&EffectiveParams::from_effective(0.2, 1.7), &rates, 0.0).map_err(|e| e.to_string())?;
    let detuned_err = (detuned.rho21 - Complex64::new(x, y)).norm();
    check(
        even < 1e-12 && peaks_ok && ordered && rel(peak, 9.26e-3) <= 0.01 && rel(peak, oracle) < 1e-12 && eq15 <= 0.01 && detuned_err < 1e-14,
        format!(
            "peak(0.1) = {peak:.5e} (oracle {oracle:.5e}), evenness {even:.1e}, ordered {ordered}, approx vs exact ≤ {:.3}%",
            100.0 * eq15
        ),
    )
}

fn frequency_doubling() -> Outcome {
    let cfg = load("fig1b")?;
    let r = cfg.resolve().map_err(|e| e.to_string())?;
    let rates = cfg.rates(r.params.as_ref()).map_err(|e| e.to_string())?;
    let scfg: SpectrumConfig = cfg.spectrum(rates);
    if !matches!(scfg.source, SpectrumSource::Dissipative(_)) {
        return Err("preset does not use the dissipative source".into());
    }
    let a = spectrum_from_dynamics(&r.sys, &r.drive, &scfg).map_err(|e| e.to_string())?;
    let b = spectrum_from_dynamics(&r.sys.natural_atom(), &r.drive, &scfg).map_err(|e| e.to_string())?;
    let bins = a.second_harmonic_offset_bins();
    let db = 10.0 * (a.power_at_second_harmonic / b.power_at_second_harmonic).log10();
    check(
        bins.abs() <= 1.0 && db >= 20.0,
        format!(
            "dominant line {:.4} ω_l ({bins:+.2e} bins from 2ω_l), 2ω_l contrast vs natural atom {db:.1} dB",
            a.dominant.omega / r.drive.omega_l
        ),
    )
}

fn hydrogenic_oracle() -> Outcome {
    let e = |r: sse_fd_core::Result<f64>| r.map_err(|e| e.to_string());
    let z11 = e(dipole_matrix_element_rb(1, 1))?;
    let z22 = e(dipole_matrix_element_rb(2, 2))?;
    let z12 = e(dipole_matrix_element_rb(1, 2))?;
    // ∫x^k e^{−ax} = k!/a^{k+1} on the closed-form states.
    let z12_exact = 32.0 * 2f64.sqrt() / 81.0;
    let me = rel(z11, 1.5).max(rel(z22, 6.0)).max(rel(z12.abs(), z12_exact));
    let basis = SurfaceStateBasis::default_for(3, 0.0).map_err(|e| e.to_string())?;
    let sol = grid_eigensolve(&basis).map_err(|e| e.to_string())?;
    let mut en = 0.0f64;
    for n in 1..=3u32 {
        en = en.max(rel(sol.energies[n as usize - 1], e(analytic_energy(n))?));
    }
    let s = stark_slope(
        &SurfaceStateBasis::default_for(2, 0.0).map_err(|e| e.to_string())?,
        DEFAULT_STARK_STEP,
    )
    .map_err(|e| e.to_string())?;
    let ghz = s.slope / 1e9;
    check(
        me <= 1e-8 && en <= 1e-3 && rel(ghz, 0.8) <= 0.10,
        format!(
            "matrix elements ≤ {me:.1e} rel, energies ≤ {:.3}%, Stark slope {ghz:.4} GHz per V/cm",
            100.0 * en
        ),
    )
}

fn property_suites() -> Outcome {
    let config = PtConfig {
        cases: 32,
        failure_persistence: None,
        ..PtConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );

    let worst_trace = Cell::new(0.0f64);
    let worst_eig = Cell::new(0.0f64);
    let lindblad = (
        0.0f64..1.0,
        -2.0f64..2.0,
        0.01f64..1.0,
        0.0f64..1.0,
        -PI..PI,
        0.0f64..1.0,
        -PI..PI,
    );
    runner
        .run(&lindblad, |(om, dp, g, gd, phase, pop, rel_phase)| {
            let p = EffectiveParams::from_effective(om, dp);
            let rates = DissipationRates::new(g, gd).unwrap();
            let c2 = Complex64::from_polar(pop.sqrt(), rel_phase);
            let init =
                DensityMatrix2::from_pure(&PureState2::new(Complex64::new((1.0 - pop).sqrt(), 0.0), c2).unwrap());
            let tr = evolve_master(
                &Generator::Effective { params: p, phase },
                &rates,
                init,
                &PropagationConfig::new(30.0, 301, Frame::EffectiveSecondHarmonic),
            )
            .unwrap();
            worst_trace.set(worst_trace.get().max(tr.max_trace_error()));
            worst_eig.set(worst_eig.get().min(tr.min_eigenvalue()));
            prop_assert!(tr.max_trace_error() <= 1e-9 && tr.min_eigenvalue() >= -1e-9);
            Ok(())
        })
        .map_err(|e| format!("Lindblad property: {e}"))?;

    let worst_norm = Cell::new(0.0f64);
    let coherent = (1.0f64..20.0, 60.0f64..160.0, -PI..PI, 0.0f64..1.0);
    let mut runner = TestRunner::new_with_rng(
        PtConfig {
            cases: 16,
            ..config.clone()
        },
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    runner
        .run(&coherent, |(e, wl, phase, pop)| {
            let sys = sse_fd_core::model::TwoLevelSystem::surface_state_default();
            let drive = DriveField::new(e * V_PER_CM, wl * GRAD_PER_S, phase).unwrap();
            let init =
                PureState2::new(Complex64::new((1.0 - pop).sqrt(), 0.0), Complex64::new(0.0, pop.sqrt())).unwrap();
            let tr = propagate_lab(&sys, &drive, init, &PropagationConfig::new(2e-9, 201, Frame::Lab)).unwrap();
            let d = tr.norm_drift().unwrap();
            worst_norm.set(worst_norm.get().max(d));
            prop_assert!(d <= 1e-9);
            Ok(())
        })
        .map_err(|e| format!("unitarity property: {e}"))?;

    let mut cfg = load("fig2")?;
    let (one, _) = sweep_csv(&cfg, 1).map_err(|e| e.to_string())?;
    let (eight, _) = sweep_csv(&cfg, 8).map_err(|e| e.to_string())?;
    cfg = load("fig1b")?;
    cfg.sweep = Some(sse_fd::config::SweepSection {
        parameter: sse_fd::config::SweepParameter::OmegaL,
        min: 100.0 * GRAD_PER_S,
        max: 240.0 * GRAD_PER_S,
        count: 29,
    });
    let (p1, f1) = sweep_csv(&cfg, 1).map_err(|e| e.to_string())?;
    let (p8, f8) = sweep_csv(&cfg, 8).map_err(|e| e.to_string())?;
    check(
        one == eight && p1 == p8 && f1 == f8,
        format!(
            "trace error ≤ {:.1e}, min eigenvalue ≥ {:.1e}, norm drift ≤ {:.1e}, sweeps byte-identical for 1 and 8 workers ({f1} failing points kept in order)",
            worst_trace.get(),
            worst_eig.get(),
            worst_norm.get()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("effective parameters", effective_parameters),
        ("like-Rabi oscillation", like_rabi),
        ("RWA self-convergence", rwa_convergence),
        ("natural-atom null", natural_atom),
        ("damped oscillation and steady state", damped_oscillation),
        ("Lorentzian lineshape", lineshape),
        ("frequency-doubling spectrum", frequency_doubling),
        ("hydrogenic oracle", hydrogenic_oracle),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {} {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {} {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
