//! Discrete Fourier spectra of uniformly sampled signals and sub-bin peak
//! location.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rectangular,
    /// Raised-cosine (Hann) taper.
    Hann,
}

impl Window {
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann if n < 2 => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|k| 0.5 - 0.5 * (TAU * k as f64 / (n - 1) as f64).cos())
                .collect(),
        }
    }
}

/// One-sided power spectrum on an angular-frequency axis.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub power: Vec<f64>,
    /// Spacing of the padded axis.
    pub spacing: f64,
    /// Native resolution 2π/T of the unpadded record.
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub power: f64,
    pub index: usize,
}

/// Power spectrum `|Σ w_k x_k e^{-iωt_k}|² / (Σ w_k)²`, zero-padded to
/// `zero_pad` times the next power of two of the record length.
pub fn power_spectrum(signal: &[f64], dt: f64, window: Window, zero_pad: usize) -> Result<Spectrum> {
    let n = signal.len();
    if n < 4 {
        return Err(Error::Resolution(format!("{n} samples are too few for a spectrum")));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter("sample spacing must be positive".into()));
    }
    let w = window.coefficients(n);
    let norm: f64 = w.iter().sum();
    let len = n.next_power_of_two() * zero_pad.max(1);
    let mut buf: Vec<Complex64> = signal
        .iter()
        .zip(&w)
        .map(|(x, wk)| Complex64::new(x * wk, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let spacing = TAU / (len as f64 * dt);
    let half = len / 2 + 1;
    let omegas = (0..half).map(|k| k as f64 * spacing).collect();
    let power = buf[..half].iter().map(|c| c.norm_sqr() / (norm * norm)).collect();
    Ok(Spectrum {
        omegas,
        power,
        spacing,
        resolution: TAU / (n as f64 * dt),
    })
}

impl Spectrum {
    /// Largest local maximum with ω in `[lo, hi]`, refined by a parabola
    /// through the log-power of the three bins around it.
    pub fn peak_in(&self, lo: f64, hi: f64) -> Option<Peak> {
        let (mut best, mut best_p) = (None, f64::NEG_INFINITY);
        for (k, (&w, &p)) in self.omegas.iter().zip(&self.power).enumerate() {
            if w < lo || w > hi {
                continue;
            }
            if p > best_p {
                best = Some(k);
                best_p = p;
            }
        }
        let k = best?;
        if best_p <= 0.0 {
            return None;
        }
        Some(self.refine(k))
    }

    fn refine(&self, k: usize) -> Peak {
        let p = &self.power;
        if k == 0 || k + 1 >= p.len() || p[k - 1] <= 0.0 || p[k + 1] <= 0.0 {
            return Peak {
                omega: self.omegas[k],
                power: p[k],
                index: k,
            };
        }
        let (a, b, c) = (p[k - 1].ln(), p[k].ln(), p[k + 1].ln());
        let denom = a - 2.0 * b + c;
        let offset = if denom < 0.0 {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        Peak {
            omega: self.omegas[k] + offset * self.spacing,
            power: (b - 0.25 * (a - c) * offset).exp(),
            index: k,
        }
    }

    /// Largest power within ±`half_width` of `omega`.
    pub fn power_near(&self, omega: f64, half_width: f64) -> f64 {
        self.omegas
            .iter()
            .zip(&self.power)
            .filter(|(w, _)| (**w - omega).abs() <= half_width)
            .map(|(_, p)| *p)
            .fold(0.0, f64::max)
    }
}

/// Dominant angular frequency of a uniformly sampled, mean-subtracted signal.
///
/// Returns `None` for a constant signal.
pub fn dominant_frequency(times: &[f64], signal: &[f64]) -> Option<f64> {
    if times.len() < 4 || times.len() != signal.len() {
        return None;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    let centred: Vec<f64> = signal.iter().map(|x| x - mean).collect();
    let scale = centred.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale < 1e-14 {
        return None;
    }
    let spec = power_spectrum(&centred, dt, Window::Rectangular, 8).ok()?;
    spec.peak_in(spec.spacing * 0.5, PI / dt).map(|p| p.omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hann_endpoints_vanish() {
        let w = Window::Hann.coefficients(9);
        assert!(w[0].abs() < 1e-15 && w[8].abs() < 1e-15);
        assert!((w[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sinusoid_peak_is_located_sub_bin() {
        let dt = 0.01;
        let w0 = 7.3;
        let times: Vec<f64> = (0..2000).map(|k| k as f64 * dt).collect();
        let x: Vec<f64> = times.iter().map(|t| (w0 * t).cos()).collect();
        let spec = power_spectrum(&x, dt, Window::Hann, 8).unwrap();
        let p = spec.peak_in(1.0, 50.0).unwrap();
        assert!((p.omega - w0).abs() < 0.05 * spec.resolution, "{} vs {w0}", p.omega);
        // amplitude-1 cosine under a normalized window: one-sided power ≈ 1/4
        assert!((p.power - 0.25).abs() < 0.01, "{}", p.power);
    }

    #[test]
    fn dominant_frequency_of_rabi_signal() {
        let om = 0.8;
        let times: Vec<f64> = (0..4001).map(|k| k as f64 * 0.005).collect();
        let x: Vec<f64> = times.iter().map(|t| (om * t).sin().powi(2)).collect();
        // sin² oscillates at 2Ω
        let f = dominant_frequency(&times, &x).unwrap();
        assert!((f - 2.0 * om).abs() / (2.0 * om) < 0.02, "{f}");
    }

    #[test]
    fn constant_signal_has_no_dominant_frequency() {
        let times: Vec<f64> = (0..100).map(|k| k as f64).collect();
        assert!(dominant_frequency(&times, &vec![0.3; 100]).is_none());
    }

    #[test]
    fn short_record_is_rejected() {
        assert!(power_spectrum(&[1.0, 2.0], 1.0, Window::Hann, 1).is_err());
    }
}
