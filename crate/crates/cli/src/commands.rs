//! Subcommand bodies. Each writes its files into the output directory and
//! returns the text printed on stdout.

use std::f64::consts::PI;

use sse_fd_core::coherent::{propagate_effective, propagate_lab, Frame};
use sse_fd_core::constants::{bohr_radius, GRAD_PER_S, NANOSECOND, V_PER_CM};
use sse_fd_core::hydrogenic::{analytic_energy, dipole_matrix_element_rb, grid_eigensolve, stark_slope};
use sse_fd_core::lindblad::{evolve_master, steady_state, DensityMatrix2, Generator};
use sse_fd_core::model::{rabi_frequency, resonant_delta, resonant_delta_exact, stark_frequency};
use sse_fd_core::radiation::{intensity_lorentzian, polarization_wave, spectrum_from_dynamics, weak_drive_intensity};
use sse_fd_core::spectral::dominant_frequency;

use crate::config::{Resolved, ScenarioConfig, SourceChoice};
use crate::error::{CliError, CliResult};
use crate::output::{CsvTable, OutputDir, Report};

const XI_LIMIT: f64 = 0.1;

fn grad(r: &mut Report, key: &str, v: f64) {
    r.value(key, v, &format!("rad/s = {:.6} Grad/s", v / GRAD_PER_S));
}

pub fn params_report(cfg: &ScenarioConfig) -> CliResult<Report> {
    let Resolved { sys, drive, params } = cfg.resolve()?;
    let mut r = Report::new();
    r.section("drive");
    r.value("amplitude", drive.amplitude, "V/m");
    grad(&mut r, "omega_drive", drive.omega_l);
    r.value("phase", drive.phase, "rad");
    r.section("effective");
    grad(&mut r, "omega_r", rabi_frequency(&sys, drive.amplitude));
    grad(&mut r, "omega_tilde", stark_frequency(&sys, drive.amplitude));
    let omega_r = rabi_frequency(&sys, drive.amplitude);
    match resonant_delta(&sys, omega_r) {
        Ok((d, _)) => grad(&mut r, "delta_resonant_closed_form", d),
        Err(e) => r.text("delta_resonant_closed_form", &e.to_string()),
    }
    match resonant_delta_exact(&sys, omega_r) {
        Ok(d) => grad(&mut r, "delta_resonant_exact", d),
        Err(e) => r.text("delta_resonant_exact", &e.to_string()),
    }
    match params {
        Some(p) => {
            grad(&mut r, "delta", p.delta);
            grad(&mut r, "nu", p.nu);
            grad(&mut r, "omega_l", p.omega_l);
            grad(&mut r, "delta_prime", p.delta_prime);
            r.value("xi", p.xi(), "Ω_R/(ω_e − δ)");
            if p.xi() >= XI_LIMIT {
                r.warning(&format!(
                    "ξ = {:.4} is not below 1/10; the effective description is unreliable",
                    p.xi()
                ));
            }
            if let Ok(rates) = cfg.rates(Some(&p)) {
                if rates.decay > 0.0 {
                    let sat = p.omega_l * p.omega_l / (rates.k() * rates.decay);
                    grad(&mut r, "decay", rates.decay);
                    grad(&mut r, "dephasing", rates.dephasing);
                    r.value("saturation", sat, "Ω_L²/(KΓ)");
                    if sat >= 0.1 {
                        r.warning("Ω_L²/(KΓ) is not small; the weak-saturation lineshape is only indicative");
                    }
                }
            }
        }
        None => r.warning("the effective second-harmonic description is singular at this drive frequency"),
    }
    Ok(r)
}

pub fn params(cfg: &ScenarioConfig, out: Option<&mut OutputDir>) -> CliResult<String> {
    let r = params_report(cfg)?;
    if let Some(out) = out {
        out.write("params.txt", r.as_str().as_bytes())?;
    }
    Ok(r.as_str().to_string())
}

pub fn rabi(cfg: &ScenarioConfig, out: &mut OutputDir) -> CliResult<String> {
    let Resolved { sys, drive, params } = cfg.resolve()?;
    let prop = cfg.propagation();
    let init = cfg.initial_state();
    let traj = match prop.frame {
        Frame::Lab => propagate_lab(&sys, &drive, init, &prop)?,
        _ => {
            let p = params.ok_or_else(|| CliError::Config("effective frame needs a non-singular drive".into()))?;
            propagate_effective(&p, drive.phase, init, &prop)?
        }
    };
    let amplitudes = cfg.propagation.amplitudes;
    let header: &[&str] = if amplitudes {
        &["t_ns", "rho22", "re_c1", "im_c1", "re_c2", "im_c2"]
    } else {
        &["t_ns", "rho22"]
    };
    let mut csv = CsvTable::new(header);
    let states = traj.states.as_deref();
    for (i, (&t, &p22)) in traj.times.iter().zip(&traj.rho22).enumerate() {
        match (amplitudes, states) {
            (true, Some(s)) => {
                let s = s[i];
                csv.row_f64(&[t / NANOSECOND, p22, s.c1.re, s.c1.im, s.c2.re, s.c2.im]);
            }
            _ => csv.row_f64(&[t / NANOSECOND, p22]),
        }
    }
    out.write("rabi.csv", &csv.into_bytes())?;

    let mut r = Report::new();
    r.section("rabi");
    r.text("frame", if prop.frame == Frame::Lab { "lab" } else { "effective" });
    r.value("max_rho22", traj.max_rho22(), "");
    if let Some(f) = dominant_frequency(&traj.times, &traj.rho22) {
        grad(&mut r, "envelope_frequency", f);
    }
    if let Some(p) = params {
        grad(&mut r, "predicted_envelope_frequency", 2.0 * p.omega_l.abs());
        r.value("xi", p.xi(), "");
        if p.xi() >= XI_LIMIT {
            r.warning("ξ is not below 1/10");
        }
    }
    if let Some(d) = traj.norm_drift() {
        r.value("norm_drift", d, "");
    }
    out.write("rabi_report.txt", r.as_str().as_bytes())?;
    Ok(r.as_str().to_string())
}

pub fn lindblad(cfg: &ScenarioConfig, out: &mut OutputDir) -> CliResult<String> {
    let Resolved { sys, drive, params } = cfg.resolve()?;
    let rates = cfg.rates(params.as_ref())?;
    let prop = cfg.propagation();
    let generator = match prop.frame {
        Frame::Lab => Generator::Lab { sys, drive },
        _ => Generator::Effective {
            params: params.ok_or_else(|| CliError::Config("effective frame needs a non-singular drive".into()))?,
            phase: drive.phase,
        },
    };
    let init = DensityMatrix2::from_pure(&cfg.initial_state());
    let traj = evolve_master(&generator, &rates, init, &prop)?;
    let mut csv = CsvTable::new(&["t_ns", "rho11", "rho22", "re_rho21", "im_rho21"]);
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        csv.row_f64(&[t / NANOSECOND, s.rho11, s.rho22, s.rho21.re, s.rho21.im]);
    }
    out.write("lindblad.csv", &csv.into_bytes())?;

    let mut r = Report::new();
    r.section("lindblad");
    r.text("frame", if prop.frame == Frame::Lab { "lab" } else { "effective" });
    grad(&mut r, "decay", rates.decay);
    grad(&mut r, "dephasing", rates.dephasing);
    let last = traj.last();
    r.value("final_rho11", last.rho11, "");
    r.value("final_rho22", last.rho22, "");
    r.value("final_re_rho21", last.rho21.re, "");
    r.value("final_im_rho21", last.rho21.im, "");
    r.value("max_trace_error", traj.max_trace_error(), "");
    r.value("min_eigenvalue", traj.min_eigenvalue(), "");
    if let Some(p) = params {
        if let Ok(s) = steady_state(&p, &rates, drive.phase) {
            r.section("steady_state");
            r.value("rho22", s.rho22, "");
            r.value("re_rho21", s.rho21.re, "effective frame");
            r.value("im_rho21", s.rho21.im, "effective frame");
            if prop.frame != Frame::Lab {
                r.value("final_distance", last.max_abs_diff(&s), "");
            }
        }
    }
    out.write("lindblad_report.txt", r.as_str().as_bytes())?;
    Ok(r.as_str().to_string())
}

pub fn steady(cfg: &ScenarioConfig, out: &mut OutputDir) -> CliResult<String> {
    let mut r = Report::new();
    let l = &cfg.lineshape;
    let unit = l.unit_rates()?;
    let at_zero = steady_state(&l.params(0.0), &unit, 0.0)?;
    let curve = intensity_lorentzian(&l.params(0.0), &unit, (l.detuning_min, l.detuning_max), l.samples)?;
    let mut csv = CsvTable::new(&["delta_prime_over_K", "intensity_exact", "intensity_eq15"]);
    for i in 0..curve.detuning_axis.len() {
        csv.row_f64(&[curve.detuning_axis[i], curve.intensity[i], curve.intensity_approx[i]]);
    }
    out.write("intensity.csv", &csv.into_bytes())?;
    let (peak_at, peak) = curve.peak();
    r.section("lineshape");
    r.value("omega_l_over_k", l.omega_l_over_k, "");
    r.value("decay_over_k", l.decay_over_k, "");
    r.value("intensity_at_resonance", at_zero.rho21.norm_sqr(), "|ρ21|² at Δ′ = 0");
    r.value(
        "intensity_weak_drive_at_resonance",
        weak_drive_intensity(l.omega_l_over_k, 0.0, &unit),
        "",
    );
    r.value("rho22_at_resonance", at_zero.rho22, "");
    r.value("sampled_peak_intensity", peak, "");
    r.value("sampled_peak_detuning_over_k", peak_at, "");
    let sat = l.omega_l_over_k * l.omega_l_over_k / unit.decay;
    r.value("saturation", sat, "Ω_L²/(KΓ)");
    if sat >= 0.1 {
        r.warning("Ω_L²/(KΓ) is not small; the weak-saturation lineshape is only indicative");
    }

    // The physical scenario, when it has a decay rate.
    if let Ok(Resolved {
        sys,
        drive,
        params: Some(p),
    }) = cfg.resolve()
    {
        let rates = cfg.rates(Some(&p))?;
        if rates.decay > 0.0 {
            let s = steady_state(&p, &rates, drive.phase)?;
            let w = polarization_wave(&sys, &s, &drive);
            r.section("scenario");
            grad(&mut r, "omega_l", p.omega_l);
            grad(&mut r, "delta_prime", p.delta_prime);
            grad(&mut r, "k", rates.k());
            r.value("rho11", s.rho11, "");
            r.value("rho22", s.rho22, "");
            r.value("re_rho21", s.rho21.re, "");
            r.value("im_rho21", s.rho21.im, "");
            r.value("intensity", s.rho21.norm_sqr(), "|ρ21|²");
            r.value("polarization_amplitude", w.amplitude, "C·m");
            r.value("polarization_phase", w.phase, "rad");
            grad(&mut r, "polarization_carrier", w.carrier);
            r.value("static_dipole", w.static_dipole, "C·m");
        }
    }
    out.write("steady.txt", r.as_str().as_bytes())?;
    Ok(r.as_str().to_string())
}

pub fn spectrum(cfg: &ScenarioConfig, out: &mut OutputDir) -> CliResult<String> {
    let Resolved { sys, drive, params } = cfg.resolve()?;
    let rates = cfg.rates(params.as_ref())?;
    let scfg = cfg.spectrum(rates);
    let rep = spectrum_from_dynamics(&sys, &drive, &scfg)?;
    let mut csv = CsvTable::new(&["omega_rad_per_s", "power_rel"]);
    for (w, p) in rep.omegas.iter().zip(&rep.power) {
        csv.row_f64(&[*w, *p]);
    }
    out.write("spectrum.csv", &csv.into_bytes())?;

    let mut r = Report::new();
    r.section("spectrum");
    grad(&mut r, "omega_drive", drive.omega_l);
    grad(&mut r, "resolution", rep.resolution);
    grad(&mut r, "dominant_omega", rep.dominant.omega);
    r.value("dominant_over_omega_drive", rep.dominant.omega / drive.omega_l, "");
    r.value("dominant_offset_from_2wl_bins", rep.second_harmonic_offset_bins(), "");
    r.value("power_at_omega_drive", rep.power_at_drive, "");
    r.value("power_at_2_omega_drive", rep.power_at_second_harmonic, "");
    r.value("power_at_3_omega_drive", rep.power_at_third_harmonic, "");
    r.value("mean_dipole", rep.mean_dipole, "m");
    if rates.decay == 0.0 || cfg.spectrum.source == SourceChoice::Coherent {
        r.warning("without decay the second harmonic splits into 2ω_l ± 2Ω_L sidebands");
    }
    if cfg.spectrum.natural_control {
        let control = spectrum_from_dynamics(&sys.natural_atom(), &drive, &scfg)?;
        r.section("natural_control");
        r.value("power_at_2_omega_drive", control.power_at_second_harmonic, "");
        let db = 10.0 * (rep.power_at_second_harmonic / control.power_at_second_harmonic).log10();
        r.value("second_harmonic_contrast_db", db, "dB");
    }
    out.write("spectrum_report.txt", r.as_str().as_bytes())?;
    Ok(r.as_str().to_string())
}

pub fn hydrogenic(cfg: &ScenarioConfig, out: &mut OutputDir) -> CliResult<String> {
    let h = &cfg.hydrogenic;
    let basis = cfg.basis()?;
    let sol = grid_eigensolve(&basis)?;
    let rb = bohr_radius();

    let mut header = vec!["z_rb".to_string()];
    header.extend((1..=h.n_max).map(|n| format!("psi_{n}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvTable::new(&header);
    for i in (0..sol.grid.len()).step_by(h.output_stride) {
        let mut row = vec![sol.grid[i] / rb];
        row.extend(sol.wavefunctions.iter().map(|w| w[i] * rb.sqrt()));
        csv.row_f64(&row);
    }
    out.write("hydrogenic_wavefunctions.csv", &csv.into_bytes())?;

    let mut r = Report::new();
    r.section("grid");
    r.value("points", sol.grid.len() as f64, "");
    r.value("spacing_rb", basis.spacing() / rb, "");
    r.value("holding_field", basis.holding_field / V_PER_CM, "V/cm");
    r.value("bohr_radius", rb, "m");
    r.section("energies");
    for (i, e) in sol.energies.iter().enumerate() {
        let n = i as u32 + 1;
        r.value(&format!("e{n}_grid"), *e / (2.0 * PI), "Hz");
        if basis.holding_field == 0.0 {
            r.value(&format!("e{n}_analytic"), analytic_energy(n)? / (2.0 * PI), "Hz");
        }
    }
    if sol.energies.len() >= 2 {
        r.value("transition_12", sol.transition() / (2.0 * PI), "Hz");
    }
    r.section("matrix_elements");
    if basis.holding_field == 0.0 {
        r.value("z11_rb_quadrature", dipole_matrix_element_rb(1, 1)?, "");
        r.value("z22_rb_quadrature", dipole_matrix_element_rb(2, 2)?, "");
        r.value("z12_rb_quadrature", dipole_matrix_element_rb(1, 2)?, "");
    }
    if h.n_max >= 2 {
        r.value("z11_rb_grid", sol.matrix_element(1, 1) / rb, "");
        r.value("z22_rb_grid", sol.matrix_element(2, 2) / rb, "");
        r.value("z12_rb_grid", sol.matrix_element(1, 2) / rb, "");
        let s = stark_slope(&basis, h.stark_step_v_per_cm * V_PER_CM)?;
        r.section("stark");
        r.value("slope", s.slope, "Hz per V/cm");
        r.value("slope_ghz_per_v_per_cm", s.slope / 1e9, "");
        r.value("perturbative", s.perturbative, "Hz per V/cm");
        r.value("nonlinearity", s.nonlinearity, "");
        r.value("step", s.step / V_PER_CM, "V/cm");
        if let Some(w) = &s.warning {
            r.warning(w);
        }
    }
    out.write("hydrogenic_report.txt", r.as_str().as_bytes())?;
    Ok(r.as_str().to_string())
}
