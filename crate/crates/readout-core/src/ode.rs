//! Adaptive Dormand–Prince 5(4) integrator for complex vector states.
//!
//! Steps are clipped so that every requested output time is hit exactly,
//! which gives exact-order output without a separate interpolant. A
//! post-step hook runs after each accepted step; it may project the state
//! (e.g. re-symmetrise a covariance) or abort the integration.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-9, atol: 1e-12, max_steps: 5_000_000 }
    }
}

impl Tolerances {
    pub fn strict() -> Self {
        Self::default()
    }

    pub fn fast() -> Self {
        Tolerances { rtol: 1e-6, atol: 1e-9, ..Self::default() }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn rms_scaled(v: &Array1<C64>, y: &Array1<C64>, y2: &Array1<C64>, tol: &Tolerances) -> f64 {
    let n = v.len().max(1) as f64;
    let s: f64 = v
        .iter()
        .zip(y.iter().zip(y2.iter()))
        .map(|(e, (a, b))| {
            let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
            (e.norm() / sc).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

fn axpy_sum(y: &Array1<C64>, h: f64, coeffs: &[f64], ks: &[Array1<C64>]) -> Array1<C64> {
    let mut out = y.clone();
    for (c, k) in coeffs.iter().zip(ks) {
        if *c != 0.0 {
            out.scaled_add(C64::new(h * c, 0.0), k);
        }
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `t0` and returns the state at each of
/// `times` (non-decreasing, all `>= t0`).
pub fn integrate<F, P>(
    mut rhs: F,
    mut post_step: P,
    t0: f64,
    y0: Array1<C64>,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Vec<Array1<C64>>>
where
    F: FnMut(f64, &Array1<C64>) -> Result<Array1<C64>>,
    P: FnMut(f64, &mut Array1<C64>) -> Result<()>,
{
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidParameter("output times must be sorted and >= t0".into()));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut y = y0;
    let mut h = initial_step(&mut rhs, t, &y, tol, times.last().map_or(0.0, |&te| te - t0))?;
    let mut steps = 0usize;

    for &target in times {
        while t < target {
            let span = target - t;
            let landing = h >= span;
            let hs = if landing { span } else { h };
            let mut ks: Vec<Array1<C64>> = Vec::with_capacity(7);
            ks.push(rhs(t, &y)?);
            for i in 1..7 {
                let yi = axpy_sum(&y, hs, &A[i][..i], &ks);
                ks.push(rhs(t + C[i] * hs, &yi)?);
            }
            let y_new = axpy_sum(&y, hs, &A[6][..6], &ks);
            let err_vec = axpy_sum(&Array1::zeros(y.len()), hs, &E, &ks);
            let err = rms_scaled(&err_vec, &y, &y_new, tol);
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::StiffnessFailure { t });
            }
            if err <= 1.0 {
                t = if landing { target } else { t + hs };
                y = y_new;
                post_step(t, &mut y)?;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a clipped landing step says nothing about the natural step size
                if !landing || hs * fac > h {
                    h = hs * fac;
                }
            } else {
                h = hs * (0.9 * err.powf(-0.2)).max(0.2);
            }
            if !h.is_finite() || h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StiffnessFailure { t });
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step<F>(rhs: &mut F, t: f64, y: &Array1<C64>, tol: &Tolerances, span: f64) -> Result<f64>
where
    F: FnMut(f64, &Array1<C64>) -> Result<Array1<C64>>,
{
    let f0 = rhs(t, y)?;
    let d0 = rms_scaled(y, y, y, tol);
    let d1 = rms_scaled(&f0, y, y, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = y.clone();
    y1.scaled_add(C64::new(h0, 0.0), &f0);
    let f1 = rhs(t + h0, &y1)?;
    let d2 = rms_scaled(&(&f1 - &f0), y, y, tol) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / dm).powf(0.2) };
    let mut h = (100.0 * h0).min(h1);
    if span > 0.0 {
        h = h.min(span);
    }
    Ok(h)
}
