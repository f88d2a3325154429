//! Pulsed time-domain protocols: piecewise-constant schedules, catch-and-release
//! traces and their fits, AC chevrons and the diagnostic-readout optimum.
//!
//! Mean fields follow the pointer-state drift of the network model, so a
//! mode with detuning Δ and dispersive shift χ rotates at Δ − sχ. The
//! catch-and-release helpers take effective detunings directly.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::linalg;
use crate::network_model::{assemble, pointer_dynamical_matrix, Coupling, ModeNetwork, ModeSpec};
use crate::{Error, Result, C64};

/// Number of piecewise-constant slices used for each cos² ramp.
pub const RAMP_SLICES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub network: ModeNetwork,
    /// cos² rise and fall time applied to every coupling amplitude.
    pub ramp: Option<f64>,
}

impl Segment {
    pub fn square(duration: f64, network: ModeNetwork) -> Self {
        Segment { duration, network, ramp: None }
    }

    pub fn ramped(duration: f64, network: ModeNetwork, ramp: f64) -> Self {
        Segment { duration, network, ramp: Some(ramp) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    segments: Vec<Segment>,
}

fn scaled(net: &ModeNetwork, f: f64) -> ModeNetwork {
    let mut out = net.clone();
    for c in &mut out.couplings {
        match c {
            Coupling::BeamSplitter { g, .. } => *g *= f,
            Coupling::Squeeze { lambda, .. } => *lambda *= f,
            Coupling::Drive { eps, .. } => *eps *= f,
        }
    }
    out
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or_else(|| Error::InvalidParameter("empty pulse schedule".into()))?;
        let labels: Vec<&str> = first.network.modes.iter().map(|m| m.label.as_str()).collect();
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.duration > 0.0 && seg.duration.is_finite()) {
                return Err(Error::InvalidParameter(format!("segment {i}: duration must be positive")));
            }
            let l: Vec<&str> = seg.network.modes.iter().map(|m| m.label.as_str()).collect();
            if l != labels {
                return Err(Error::InvalidParameter(format!("segment {i}: mode labels differ from segment 0")));
            }
            if let Some(r) = seg.ramp {
                if !(r > 0.0 && 2.0 * r <= seg.duration) {
                    return Err(Error::InvalidParameter(format!("segment {i}: ramp must lie in (0, duration/2]")));
                }
            }
            seg.network.check()?;
        }
        Ok(PulseSchedule { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Piecewise-constant slices after ramp subdivision.
    pub fn slices(&self) -> Vec<(f64, ModeNetwork)> {
        let mut out = vec![];
        for seg in &self.segments {
            match seg.ramp {
                None => out.push((seg.duration, seg.network.clone())),
                Some(r) => {
                    let dt = r / RAMP_SLICES as f64;
                    for i in 0..RAMP_SLICES {
                        let x = (i as f64 + 0.5) / RAMP_SLICES as f64;
                        out.push((dt, scaled(&seg.network, (0.5 * PI * x).sin().powi(2))));
                    }
                    let flat = seg.duration - 2.0 * r;
                    if flat > 0.0 {
                        out.push((flat, seg.network.clone()));
                    }
                    for i in 0..RAMP_SLICES {
                        let x = (i as f64 + 0.5) / RAMP_SLICES as f64;
                        out.push((dt, scaled(&seg.network, (0.5 * PI * x).cos().powi(2))));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldTrajectory {
    pub times: Vec<f64>,
    /// Complex mean fields ⟨k⟩ per mode at each time.
    pub fields: Vec<Array1<C64>>,
}

fn to_quadratures(alpha: &Array1<C64>) -> Array1<f64> {
    let r2 = 2f64.sqrt();
    Array1::from_iter(alpha.iter().flat_map(|a| [r2 * a.re, r2 * a.im]))
}

fn to_fields(x: &Array1<C64>, n: usize) -> Array1<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Array1::from_iter((0..n).map(|k| C64::new(x[2 * k].re, x[2 * k + 1].re) * h))
}

/// Augmented generator [[A, d], [0, 0]] for the affine drift μ̇ = Aμ + d.
fn augmented(net: &ModeNetwork, s: f64) -> Result<Array2<C64>> {
    let model = assemble(net)?;
    let (a, d) = pointer_dynamical_matrix(&model, s);
    let m = a.nrows();
    let mut g = Array2::zeros((m + 1, m + 1));
    g.slice_mut(ndarray::s![..m, ..m]).assign(&linalg::complexify(&a));
    g.slice_mut(ndarray::s![..m, m]).assign(&linalg::complexify_vec(&d));
    Ok(g)
}

/// Exact propagation of the linear mean-field equations through the
/// schedule for qubit sign `s`, sampled at nondecreasing `times` ≥ 0.
pub fn simulate_mean_fields(
    schedule: &PulseSchedule,
    s: f64,
    alpha0: &Array1<C64>,
    times: &[f64],
) -> Result<MeanFieldTrajectory> {
    let n = schedule.segments[0].network.modes.len();
    if alpha0.len() != n {
        return Err(Error::DimensionMismatch(format!("{} initial fields for {n} modes", alpha0.len())));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidParameter("sample times must be nondecreasing and >= 0".into()));
    }
    let total = schedule.duration();
    if times.last().is_some_and(|&t| t > total * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("sample time beyond schedule end {total}")));
    }
    let mut x = linalg::complexify_vec(&to_quadratures(alpha0));
    x = ndarray::concatenate![ndarray::Axis(0), x, Array1::from_elem(1, C64::new(1.0, 0.0))];

    let slices = schedule.slices();
    let mut fields = Vec::with_capacity(times.len());
    let mut t_start = 0.0;
    let mut ti = 0;
    for (k, (dur, net)) in slices.iter().enumerate() {
        let gen = augmented(net, s)?;
        let t_end = if k + 1 == slices.len() { f64::INFINITY } else { t_start + dur };
        while ti < times.len() && times[ti] <= t_end {
            let p = linalg::expm(&gen.mapv(|z| z * (times[ti] - t_start)))?;
            fields.push(to_fields(&p.dot(&x), n));
            ti += 1;
        }
        x = linalg::expm(&gen.mapv(|z| z * *dur))?.dot(&x);
        t_start += dur;
    }
    Ok(MeanFieldTrajectory { times: times.to_vec(), fields })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effective {
    pub eta: f64,
    pub delta_eff: f64,
    pub kappa_eff: f64,
    /// Effective drive on K, including its phase.
    pub eps_eff: C64,
}

/// Eliminates a strongly damped mode B coupled to K with strength g.
pub fn adiabatic_elimination(kappa_b: f64, kappa_k: f64, delta_b: f64, delta_k: f64, g: f64, eps: f64) -> Effective {
    let eta = g * g / (0.25 * kappa_b * kappa_b + delta_b * delta_b);
    Effective {
        eta,
        delta_eff: delta_k - eta * delta_b,
        kappa_eff: kappa_k + eta * kappa_b,
        eps_eff: C64::new(0.0, -g) * eps / C64::new(0.5 * kappa_b, -delta_b),
    }
}

/// Slow eigenvalue of the coupled B–K mean-field matrix; its real part is
/// −κ_K,eff/2 and its imaginary part Δ_K,eff without elimination.
pub fn two_mode_slow_pole(kappa_b: f64, kappa_k: f64, delta_b: f64, delta_k: f64, g: f64) -> C64 {
    let a = C64::new(-0.5 * kappa_b, delta_b);
    let d = C64::new(-0.5 * kappa_k, delta_k);
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) - g * g).sqrt();
    let (l1, l2) = (m + r, m - r);
    if l1.re >= l2.re {
        l1
    } else {
        l2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceKind {
    Analytic,
    Numeric,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseTrace {
    pub kind: TraceKind,
    pub t_ev: Vec<f64>,
    pub z: Vec<C64>,
}

impl ReleaseTrace {
    pub fn new(kind: TraceKind, t_ev: Vec<f64>, z: Vec<C64>) -> Result<Self> {
        if t_ev.len() != z.len() {
            return Err(Error::DimensionMismatch(format!("{} times, {} values", t_ev.len(), z.len())));
        }
        if t_ev.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("t_ev grid must be strictly increasing".into()));
        }
        if t_ev.iter().any(|t| !t.is_finite()) || z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("trace contains non-finite values".into()));
        }
        Ok(ReleaseTrace { kind, t_ev, z })
    }

    /// Noiseless z ∝ e^{(iΔ − κ/2) t}.
    pub fn synthetic(kappa: f64, delta: f64, scale: C64, t_ev: Vec<f64>) -> Result<Self> {
        let z = t_ev.iter().map(|&t| scale * (C64::new(-0.5 * kappa, delta) * t).exp()).collect();
        Self::new(TraceKind::Synthetic, t_ev, z)
    }

    pub fn scaled(&self, c: C64) -> Self {
        ReleaseTrace { z: self.z.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// Applies i.i.d. multiplicative complex Gaussian noise with total rms `sigma`.
    pub fn with_noise<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> Self {
        let normal = Normal::new(0.0, sigma * std::f64::consts::FRAC_1_SQRT_2).expect("finite sigma");
        let z = self.z.iter().map(|v| v * C64::new(1.0 + normal.sample(rng), normal.sample(rng))).collect();
        ReleaseTrace { z, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatchRelease {
    pub kappa_b: f64,
    pub kappa_k: f64,
    /// Effective detunings, qubit shift included.
    pub delta_b: f64,
    pub delta_k: f64,
    pub g: f64,
    pub eps: f64,
    /// Catch pulse length.
    pub t0: f64,
    /// Optional cos² ramp on the catch pulse (numeric branch only).
    pub ramp: Option<f64>,
    pub t_ev: Vec<f64>,
}

/// Returns (analytic, numeric) traces. The release stage is linear and
/// time-invariant, so the demodulated z is proportional to k at the start
/// of release whatever the weight function; both traces report that value.
pub fn catch_release(p: &CatchRelease) -> Result<(ReleaseTrace, ReleaseTrace)> {
    let eff = adiabatic_elimination(p.kappa_b, p.kappa_k, p.delta_b, p.delta_k, p.g, p.eps);
    let pole_eff = C64::new(-0.5 * eff.kappa_eff, eff.delta_eff);
    let pole_k = C64::new(-0.5 * p.kappa_k, p.delta_k);
    let k_ss = -eff.eps_eff / pole_eff;
    let k_t0 = k_ss * (C64::new(1.0, 0.0) - (pole_eff * p.t0).exp());
    let analytic = p.t_ev.iter().map(|&t| k_t0 * (pole_k * t).exp()).collect();
    let analytic = ReleaseTrace::new(TraceKind::Analytic, p.t_ev.clone(), analytic)?;

    if p.t_ev.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidParameter("t_ev must be >= 0".into()));
    }
    let catch = ModeNetwork::new(
        vec![ModeSpec::new("B", p.delta_b, p.kappa_b, 0.0, 0.0), ModeSpec::new("K", p.delta_k, p.kappa_k, 0.0, 0.0)],
        // drive phase π/2 makes the mean-field source term +ε
        vec![Coupling::beam_splitter("B", "K", p.g, 0.0), Coupling::drive("B", p.eps, 0.5 * PI)],
    )?;
    let idle = ModeNetwork { couplings: vec![], ..catch.clone() };
    let mut segs = vec![match p.ramp {
        Some(r) => Segment::ramped(p.t0, catch, r),
        None => Segment::square(p.t0, catch),
    }];
    let t_last = p.t_ev.last().copied().unwrap_or(0.0);
    if t_last > 0.0 {
        segs.push(Segment::square(t_last, idle));
    }
    let schedule = PulseSchedule::new(segs)?;
    let times: Vec<f64> = p.t_ev.iter().map(|t| p.t0 + t).collect();
    let traj = simulate_mean_fields(&schedule, 0.0, &Array1::zeros(2), &times)?;
    let numeric = ReleaseTrace::new(TraceKind::Numeric, p.t_ev.clone(), traj.fields.iter().map(|f| f[1]).collect())?;
    Ok((analytic, numeric))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub min_points: usize,
    /// Largest admissible wrapped phase step between neighbours.
    pub max_phase_step: f64,
    /// Two-sided confidence level of the reported intervals.
    pub confidence: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { min_points: 8, max_phase_step: 0.9 * PI, confidence: 0.95 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReleaseFit {
    pub kappa: f64,
    pub delta: f64,
    /// Half-widths of the confidence intervals.
    pub kappa_ci: f64,
    pub delta_ci: f64,
    pub log_amplitude: f64,
    pub phase0: f64,
    pub n_points: usize,
}

struct LineFit {
    slope: f64,
    intercept: f64,
    slope_se: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_se = (ssr / (n - 2.0) / sxx).sqrt();
    LineFit { slope, intercept, slope_se }
}

/// Greedy nearest-branch unwrap; fails when a neighbour step is too close to π
/// for the branch to be trusted.
pub fn unwrap_phase(z: &[C64], max_step: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(z.len());
    for (i, v) in z.iter().enumerate() {
        if i == 0 {
            out.push(v.arg());
            continue;
        }
        let step = (v / z[i - 1]).arg();
        if step.abs() > max_step {
            return Err(Error::PhaseUnwrapAmbiguity { index: i, step });
        }
        out.push(out[i - 1] + step);
    }
    Ok(out)
}

pub fn fit_release(trace: &ReleaseTrace) -> Result<ReleaseFit> {
    fit_release_with(trace, &FitOptions::default())
}

/// Linear least squares on log|z| and on the unwrapped phase.
pub fn fit_release_with(trace: &ReleaseTrace, opts: &FitOptions) -> Result<ReleaseFit> {
    let n = trace.z.len();
    if n < opts.min_points.max(3) {
        return Err(Error::InsufficientSpan(format!("{n} points, need {}", opts.min_points.max(3))));
    }
    if trace.z.iter().any(|v| v.norm() == 0.0) {
        return Err(Error::DomainError("zero amplitude in release trace".into()));
    }
    let logs: Vec<f64> = trace.z.iter().map(|v| v.norm().ln()).collect();
    let phase = unwrap_phase(&trace.z, opts.max_phase_step)?;
    let amp = line_fit(&trace.t_ev, &logs);
    let ph = line_fit(&trace.t_ev, &phase);
    let kappa = -2.0 * amp.slope;
    let span = trace.t_ev[n - 1] - trace.t_ev[0];
    if 0.5 * kappa.abs() * span < 1.0 {
        return Err(Error::InsufficientSpan(format!(
            "span {span} covers {:.3} amplitude decay constants",
            0.5 * kappa.abs() * span
        )));
    }
    let q = StudentsT::new(0.0, 1.0, (n - 2) as f64)
        .map_err(|e| Error::DomainError(e.to_string()))?
        .inverse_cdf(0.5 + 0.5 * opts.confidence);
    Ok(ReleaseFit {
        kappa,
        delta: ph.slope,
        kappa_ci: 2.0 * q * amp.slope_se,
        delta_ci: q * ph.slope_se,
        log_amplitude: amp.intercept,
        phase0: ph.intercept,
        n_points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveFit {
    pub chi: f64,
    pub chi_ci: f64,
    /// ½(Δ(+1) + Δ(−1)).
    pub delta_mean: f64,
}

/// χ_K = ½(Δ_K(s=+1) − Δ_K(s=−1)).
pub fn dispersive_from_pair(excited: &ReleaseFit, ground: &ReleaseFit) -> DispersiveFit {
    DispersiveFit {
        chi: 0.5 * (excited.delta - ground.delta),
        chi_ci: 0.5 * excited.delta_ci.hypot(ground.delta_ci),
        delta_mean: 0.5 * (excited.delta + ground.delta),
    }
}

/// Bare mode frequency ω_K = ω_d + sgn·ω_p − ½(Δ(+1) + Δ(−1)).
pub fn bare_frequency(omega_d: f64, sign: f64, omega_p: f64, pair: &DispersiveFit) -> f64 {
    omega_d + sign.signum() * omega_p - pair.delta_mean
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChevronParams {
    /// Common decay rate of A and C.
    pub kappa: f64,
    pub g_ac: f64,
    pub chi_c: f64,
    pub s: f64,
}

/// Released magnitude for a(0) = 0, normalised to 1 at t = 0.
pub fn chevron_magnitude(p: &ChevronParams, delta_ac: f64, t: f64) -> f64 {
    let det = delta_ac - p.s * p.chi_c;
    let omega = (4.0 * p.g_ac * p.g_ac + det * det).sqrt();
    let (sn, cs) = (0.5 * omega * t).sin_cos();
    let ratio = if omega == 0.0 { 0.0 } else { det / omega };
    (-0.5 * p.kappa * t).exp() * (cs * cs + ratio * ratio * sn * sn).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinecutFit {
    pub g: f64,
    pub kappa: f64,
    pub amplitude: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chevron {
    pub detunings: Vec<f64>,
    pub times: Vec<f64>,
    /// |z| with one row per detuning.
    pub magnitude: Vec<Vec<f64>>,
    /// |z| at Δ_AC = sχ_C.
    pub linecut: Vec<f64>,
    pub fit: LinecutFit,
}

pub fn ac_chevron(p: &ChevronParams, detunings: &[f64], times: &[f64]) -> Result<Chevron> {
    let magnitude = detunings.iter().map(|&d| times.iter().map(|&t| chevron_magnitude(p, d, t)).collect()).collect();
    let linecut: Vec<f64> = times.iter().map(|&t| chevron_magnitude(p, p.s * p.chi_c, t)).collect();
    let fit = fit_linecut(times, &linecut)?;
    Ok(Chevron { detunings: detunings.to_vec(), times: times.to_vec(), magnitude, linecut, fit })
}

fn golden<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Fits A e^{−κt/2}|cos(g t)| by variable projection: A is solved linearly,
/// κ by golden section, g by a scan below the sampling limit then refinement.
pub fn fit_linecut(times: &[f64], mags: &[f64]) -> Result<LinecutFit> {
    let n = times.len();
    if n < 8 || n != mags.len() {
        return Err(Error::InsufficientSpan(format!("{n} linecut points")));
    }
    let span = times[n - 1] - times[0];
    let dt_min = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(span > 0.0 && dt_min > 0.0) {
        return Err(Error::InvalidParameter("linecut times must be strictly increasing".into()));
    }
    let g_hi = 0.5 * PI / dt_min;
    let kappa_hi = 40.0 / span;
    let yy: f64 = mags.iter().map(|y| y * y).sum();
    let cost_amp = |kappa: f64, g: f64| {
        let (mut yf, mut ff) = (0.0, 0.0);
        for (&t, &y) in times.iter().zip(mags) {
            let f = (-0.5 * kappa * t).exp() * (g * t).cos().abs();
            yf += y * f;
            ff += f * f;
        }
        if ff == 0.0 {
            (yy, 0.0)
        } else {
            (yy - yf * yf / ff, yf / ff)
        }
    };
    let best_kappa = |g: f64| golden(|k| cost_amp(k, g).0, 0.0, kappa_hi, 60);
    let m = 2000.max(20 * n);
    let step = g_hi / m as f64;
    let (mut g0, mut c0) = (step, f64::INFINITY);
    for i in 1..=m {
        let g = i as f64 * step;
        let (_, c) = best_kappa(g);
        if c < c0 {
            c0 = c;
            g0 = g;
        }
    }
    let (g, _) = golden(|g| best_kappa(g).1, (g0 - step).max(0.0), g0 + step, 80);
    let (kappa, _) = golden(|k| cost_amp(k, g).0, 0.0, kappa_hi, 100);
    let (cost, amplitude) = cost_amp(kappa, g);
    Ok(LinecutFit { g, kappa, amplitude, rms: (cost.max(0.0) / n as f64).sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticOptimum {
    pub g_max: f64,
    pub kappa_c_eff: f64,
    pub chi_c_eff: f64,
    /// Γ_meas at g_max for one effective intracavity photon.
    pub gamma_meas_per_photon: f64,
}

/// C-mode linewidth and shift after eliminating B through a BC beam splitter.
pub fn effective_c_mode(kappa_b: f64, kappa_c: f64, chi_c: f64, chi_b: f64, g: f64) -> (f64, f64) {
    let eta = g * g / (0.25 * kappa_b * kappa_b + chi_b * chi_b);
    (eta * kappa_b + kappa_c, chi_c - eta * chi_b)
}

/// Approximate measurement-induced dephasing with B eliminated (χ_B neglected).
pub fn effective_mdrate(kappa_b: f64, kappa_c: f64, chi_c: f64, g: f64, n_eff: f64) -> f64 {
    let x = 4.0 * g * g + kappa_b * kappa_c;
    4.0 * n_eff * chi_c * chi_c * kappa_b * x / (x * x + 4.0 * kappa_b * kappa_b * chi_c * chi_c)
}

pub fn effective_occupancy(eps: f64, kappa_b: f64, kappa_c: f64, chi_c: f64, g: f64) -> f64 {
    let k = 4.0 * g * g / kappa_b + kappa_c;
    4.0 * eps * eps / (k * k + chi_c * chi_c)
}

/// Beam-splitter strength maximising the diagnostic dephasing rate at fixed
/// effective occupancy. Requires 2χ_C ≥ κ_C.
pub fn diagnostic_optimum(kappa_b: f64, kappa_c: f64, chi_c: f64, chi_b: f64) -> Result<DiagnosticOptimum> {
    let margin = 2.0 * chi_c - kappa_c;
    if !(margin >= 0.0) || !(kappa_b > 0.0) {
        return Err(Error::DomainError(format!("need 2χ_C ≥ κ_C and κ_B > 0 (2χ_C − κ_C = {margin})")));
    }
    let g_max = 0.5 * (kappa_b * margin).sqrt();
    debug_assert!((4.0 * g_max * g_max / kappa_b + kappa_c - 2.0 * chi_c).abs() <= 1e-9 * chi_c.abs().max(1.0));
    let (kappa_c_eff, chi_c_eff) = effective_c_mode(kappa_b, kappa_c, chi_c, chi_b, g_max);
    Ok(DiagnosticOptimum {
        g_max,
        kappa_c_eff,
        chi_c_eff,
        gamma_meas_per_photon: effective_mdrate(kappa_b, kappa_c, chi_c, g_max, 1.0),
    })
}
