//! Adaptive Dormand–Prince 5(4) integrator with continuous (dense) output.
//!
//! States are fixed-size real arrays; complex amplitudes are stored as
//! interleaved real/imaginary parts by the callers.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step, in the time unit of the problem.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: None,
            max_steps: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        let ch = h * c;
        for i in 0..N {
            out[i] += ch * k[i];
        }
    }
    out
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], ctl: &StepControl) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = ctl.abs_tol + ctl.rel_tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    ctl: &StepControl,
    span: f64,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sc = |i: usize| ctl.abs_tol + ctl.rel_tol * y0[i].abs();
    let d0 = ((0..N).map(|i| (y0[i] / sc(i)).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d1 = ((0..N).map(|i| (f0[i] / sc(i)).powi(2)).sum::<f64>() / N as f64).sqrt();
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let d2 = ((0..N).map(|i| ((f1[i] - f0[i]) / sc(i)).powi(2)).sum::<f64>() / N as f64).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrate `dy/dt = f(t, y)` from `times[0]` with `y(times[0]) = y0` and
/// return the solution at every entry of `times` (non-decreasing).
///
/// Samples between steps come from the 4th-order continuous extension of the
/// Dormand–Prince pair.
pub fn integrate_dense<const N: usize, F>(
    mut f: F,
    y0: [f64; N],
    times: &[f64],
    ctl: &StepControl,
) -> Result<(Vec<[f64; N]>, StepStats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut stats = StepStats::default();
    let Some(&t_start) = times.first() else {
        return Ok((Vec::new(), stats));
    };
    if times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidParameter("sample times must be non-decreasing".into()));
    }
    if !(ctl.rel_tol > 0.0 && ctl.abs_tol > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    let t_end = *times.last().unwrap();
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] <= t_start {
        out.push(y0);
        next += 1;
    }
    if next == times.len() {
        return Ok((out, stats));
    }

    let span = t_end - t_start;
    let h_max = ctl.max_step.unwrap_or(span).min(span);
    let mut t = t_start;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&mut f, t, &y, &k1, ctl, span).min(h_max);
    stats.evaluations += 1;
    let mut last_rejected = false;

    while next < times.len() {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::Accuracy {
                what: "step budget exhausted".into(),
                achieved: (stats.accepted + stats.rejected) as f64,
                budget: ctl.max_steps as f64,
            });
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(span) {
            return Err(Error::StepUnderflow { t, h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let y2 = axpy(&y, h, &[(A21, &k1)]);
        let k2 = f(t + C2 * h, &y2);
        let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + C3 * h, &y3);
        let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + C4 * h, &y4);
        let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + C5 * h, &y5);
        let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + h, &y6);
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { t_end } else { t + h };
        let k7 = f(t_new, &y_new);
        stats.evaluations += 6;

        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let en = error_norm(&err, &y, &y_new, ctl);
        if !en.is_finite() {
            return Err(Error::Accuracy {
                what: "non-finite error estimate".into(),
                achieved: en,
                budget: 1.0,
            });
        }

        if en <= 1.0 {
            stats.accepted += 1;
            // continuous extension coefficients
            let mut r2 = [0.0; N];
            let mut r3 = [0.0; N];
            let mut r4 = [0.0; N];
            let mut r5 = [0.0; N];
            for i in 0..N {
                let dy = y_new[i] - y[i];
                let bspl = h * k1[i] - dy;
                r2[i] = dy;
                r3[i] = bspl;
                r4[i] = dy - h * k7[i] - bspl;
                r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while next < times.len() && (times[next] <= t_new || last) {
                let theta = ((times[next] - t) / h).clamp(0.0, 1.0);
                let th1 = 1.0 - theta;
                let mut ys = [0.0; N];
                for i in 0..N {
                    ys[i] = y[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
                }
                out.push(ys);
                next += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = 0.9 * en.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h = (h * fac).min(h_max);
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h *= (0.9 * en.powf(-0.2)).max(0.2);
        }
    }
    Ok((out, stats))
}
