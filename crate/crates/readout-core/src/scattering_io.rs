//! Input-output response of the network: scattering and displacement
//! matrices, output noise, measurement rate and efficiency, nonreciprocity,
//! reflection gain and stability.
//!
//! With every bath port monitored through √γ = ⊕√κ_K I₂,
//!
//! ```text
//! S(ω) = √γ (A_s + iω)⁻¹ √γ + I,     T = √γ μ_s = −√γ A_s⁻¹ d_s,
//! S̄_out(ω) = ½ (S(ω) S̄_in Sᵀ(−ω) + S(−ω) S̄_in Sᵀ(ω)).
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Eigh, Inverse, UPLO};
use serde::{Deserialize, Serialize};

use crate::gaussian_dynamics::{dephasing_rates, PointerState};
use crate::linalg::{self, complexify, complexify_vec};
use crate::network_model::{pointer_dynamical_matrix, Coupling, ModeNetwork, ModeSpec, QuadratureModel};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringResult {
    pub omega: f64,
    pub s: f64,
    /// Quadrature-basis scattering matrix.
    pub smat: Array2<C64>,
    /// Output displacement; real at ω = 0.
    pub t: Array1<C64>,
    /// Symmetrised output noise matrix.
    pub s_out: Array2<f64>,
}

fn response(model: &QuadratureModel, s: f64, omega: f64) -> Result<(Array2<C64>, Array1<C64>)> {
    let (a, d) = pointer_dynamical_matrix(model, s);
    let dim = model.dim();
    let mut m = complexify(&a);
    for k in 0..dim {
        m[[k, k]] += C64::new(0.0, omega);
    }
    if linalg::cond_c(&m)? > 1e14 {
        return Err(Error::SingularResponse { omega });
    }
    let inv = m.inv().map_err(|_| Error::SingularResponse { omega })?;
    let sg = complexify(&model.sqrt_gamma());
    let mut smat = sg.dot(&inv).dot(&sg);
    for k in 0..dim {
        smat[[k, k]] += C64::new(1.0, 0.0);
    }
    let t = -sg.dot(&inv.dot(&complexify_vec(&d)));
    Ok((smat, t))
}

/// Scattering matrix, output displacement and output noise for qubit sign `s`.
pub fn scattering(model: &QuadratureModel, s: f64, omega: f64) -> Result<ScatteringResult> {
    let (sp, t) = response(model, s, omega)?;
    let sm = if omega == 0.0 { sp.clone() } else { response(model, s, -omega)?.0 };
    let sin = complexify(&model.input_noise());
    let out = (sp.dot(&sin).dot(&sm.t()) + sm.dot(&sin).dot(&sp.t())).mapv(|z| z * 0.5);
    let mut s_out = linalg::re(&out);
    linalg::symmetrize(&mut s_out);
    Ok(ScatteringResult { omega, s, smat: sp, t, s_out })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementReport {
    pub theta_m: f64,
    /// |⟨M⟩_e − ⟨M⟩_g|² / 4
    pub signal: f64,
    pub noise_e: f64,
    pub noise_g: f64,
    pub n_add: f64,
    pub gamma_m: f64,
    pub gamma_d: f64,
    pub eta: f64,
}

/// Measurement rate for homodyne detection of the monitored mode's output
/// at ω = 0. The measurement angle maximises the pointer-state separation
/// unless `theta_override` is given.
pub fn measurement_rate(
    model: &QuadratureModel,
    monitored: Option<&str>,
    n_add: f64,
    theta_override: Option<f64>,
) -> Result<MeasurementReport> {
    let port = monitored.and_then(|l| model.index_of(l)).ok_or(Error::NoMonitoredPort)?;
    for s in [1.0, -1.0] {
        let (a, _) = pointer_dynamical_matrix(model, s);
        let max_re = linalg::spectral_abscissa(&a)?;
        if max_re >= 0.0 {
            return Err(Error::UnstableDynamics { max_re });
        }
    }
    let e = scattering(model, 1.0, 0.0)?;
    let g = scattering(model, -1.0, 0.0)?;
    let (q, p) = (2 * port, 2 * port + 1);
    let dt = [e.t[q].re - g.t[q].re, e.t[p].re - g.t[p].re];
    let theta_m = theta_override.unwrap_or_else(|| dt[1].atan2(dt[0]));
    let m = [theta_m.cos(), theta_m.sin()];
    let proj = m[0] * dt[0] + m[1] * dt[1];
    let signal = proj * proj / 4.0;
    let quad = |n: &Array2<f64>| {
        let b = n.slice(s![q..q + 2, q..q + 2]);
        m[0] * m[0] * b[[0, 0]] + 2.0 * m[0] * m[1] * b[[0, 1]] + m[1] * m[1] * b[[1, 1]]
    };
    let noise_e = quad(&e.s_out);
    let noise_g = quad(&g.s_out);
    let gamma_m = signal / (noise_e + noise_g + 2.0 * n_add);
    let gamma_d = dephasing_rates(model)?.gamma_d;
    let eta = if gamma_d > 0.0 { gamma_m / gamma_d } else { 0.0 };
    Ok(MeasurementReport { theta_m, signal, noise_e, noise_g, n_add, gamma_m, gamma_d, eta })
}

/// P = I_N ⊗ [[1, i], [1, −i]]/√2, mapping (q, p) to (a, a†).
pub fn ladder_transform(n_modes: usize) -> Array2<C64> {
    let mut p = Array2::zeros((2 * n_modes, 2 * n_modes));
    let h = FRAC_1_SQRT_2;
    for k in 0..n_modes {
        p[[2 * k, 2 * k]] = C64::new(h, 0.0);
        p[[2 * k, 2 * k + 1]] = C64::new(0.0, h);
        p[[2 * k + 1, 2 * k]] = C64::new(h, 0.0);
        p[[2 * k + 1, 2 * k + 1]] = C64::new(0.0, -h);
    }
    p
}

/// Scattering matrix in the ladder basis, P S P†.
pub fn basis_change(smat: &Array2<C64>) -> Array2<C64> {
    let p = ladder_transform(smat.nrows() / 2);
    let ph = p.t().mapv(|z| z.conj());
    debug_assert!({
        let id = p.dot(&ph);
        (0..id.nrows()).all(|i| (0..id.ncols()).all(|j| (id[[i, j]] - if i == j { 1.0 } else { 0.0 }).norm() < 1e-14))
    });
    p.dot(smat).dot(&ph)
}

fn block_power(m: &Array2<C64>, j: usize, k: usize) -> f64 {
    linalg::block(m, j, k).iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nonreciprocity {
    pub quadrature: f64,
    pub ladder: f64,
}

/// Normalised nonreciprocity N_KJ = (‖S_JK‖² − ‖S_KJ‖²)/(‖S_JK‖² + ‖S_KJ‖²),
/// positive when K → J scattering dominates. Zero when neither path exists.
pub fn nonreciprocity(model: &QuadratureModel, k: &str, j: &str, s: f64, omega: f64) -> Result<Nonreciprocity> {
    let kk = model.index_of(k).ok_or_else(|| Error::UnknownMode(k.into()))?;
    let jj = model.index_of(j).ok_or_else(|| Error::UnknownMode(j.into()))?;
    if kk == jj {
        return Err(Error::InvalidParameter("nonreciprocity needs two distinct modes".into()));
    }
    let sm = scattering(model, s, omega)?.smat;
    let metric = |m: &Array2<C64>| {
        let fwd = block_power(m, jj, kk);
        let bwd = block_power(m, kk, jj);
        if fwd + bwd == 0.0 {
            0.0
        } else {
            (fwd - bwd) / (fwd + bwd)
        }
    };
    Ok(Nonreciprocity { quadrature: metric(&sm), ladder: metric(&basis_change(&sm)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub power: f64,
    pub db: f64,
    pub analytic: Option<f64>,
    pub discrepancy: Option<f64>,
    /// Set when the power gain exceeds 10⁶.
    pub divergent: bool,
}

/// Reflection power gain |S_KK|² of mode `mode` at ω = 0 from the ladder-basis
/// (k, k) element, alongside the amplifier closed form when given.
pub fn reflection_gain(
    model: &QuadratureModel,
    mode: &str,
    s: f64,
    amp: Option<&AmplifierParams>,
) -> Result<GainReport> {
    let k = model.index_of(mode).ok_or_else(|| Error::UnknownMode(mode.into()))?;
    let (a, _) = pointer_dynamical_matrix(model, s);
    let max_re = linalg::spectral_abscissa(&a)?;
    if max_re >= 0.0 {
        return Err(Error::UnstableDynamics { max_re });
    }
    let sm = basis_change(&scattering(model, s, 0.0)?.smat);
    let power = sm[[2 * k, 2 * k]].norm_sqr();
    let analytic = amp.map(|p| p.gain());
    Ok(GainReport {
        power,
        db: 10.0 * power.log10(),
        analytic,
        discrepancy: analytic.map(|g| (power - g).abs() / g),
        divergent: power > 1e6,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Marginal,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    /// Largest eigenvalue real part over both qubit states.
    pub max_real_part: f64,
    pub lambda_max: Option<f64>,
    /// det A_s for s = +1 (sign change marks the critical boundary).
    pub det_a: f64,
}

pub fn stability(model: &QuadratureModel, amp: Option<&AmplifierParams>) -> Result<StabilityReport> {
    let mut max_re = f64::NEG_INFINITY;
    let mut scale: f64 = 0.0;
    for s in [1.0, -1.0] {
        let (a, _) = pointer_dynamical_matrix(model, s);
        max_re = max_re.max(linalg::spectral_abscissa(&a)?);
        scale = scale.max(linalg::fro(&a));
    }
    let (a, _) = pointer_dynamical_matrix(model, 1.0);
    let det_a = linalg::eigenvalues(&a)?.iter().fold(C64::new(1.0, 0.0), |p, z| p * z).re;
    let verdict = if max_re.abs() <= 1e-10 * scale {
        Verdict::Marginal
    } else if max_re < 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok(StabilityReport { verdict, max_real_part: max_re, lambda_max: amp.map(|p| p.lambda_max()), det_a })
}

/// Three-mode embedded amplifier: A (squeezed), B (monitored, driven),
/// C (dispersively coupled). Beam splitters AB and BC are real; the loop
/// phase φ sits on the AC term g_AC e^{iφ} a†c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierParams {
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub n_c: f64,
    pub chi_c: f64,
    pub g_ab: f64,
    pub g_bc: f64,
    pub g_ac: f64,
    pub phi: f64,
    pub lambda: f64,
    pub theta: f64,
    pub eps: f64,
    /// Drive phase φ_d.
    pub drive_phase: f64,
}

impl AmplifierParams {
    pub fn coop_ab(&self) -> f64 {
        4.0 * self.g_ab * self.g_ab / (self.kappa_a * self.kappa_b)
    }

    pub fn coop_bc(&self) -> f64 {
        4.0 * self.g_bc * self.g_bc / (self.kappa_b * self.kappa_c)
    }

    pub fn coop_ac(&self) -> f64 {
        4.0 * self.g_ac * self.g_ac / (self.kappa_a * self.kappa_c)
    }

    pub fn coop_lambda(&self) -> f64 {
        2.0 * self.lambda / self.kappa_a
    }

    /// 𝒳 = 2χ_C/κ_C
    pub fn chi_ratio(&self) -> f64 {
        2.0 * self.chi_c / self.kappa_c
    }

    /// g_AC satisfying C_AC = C_AB C_BC.
    pub fn matched_g_ac(&self) -> f64 {
        2.0 * self.g_ab * self.g_bc / self.kappa_b
    }

    pub fn with_matched_ac(mut self) -> Self {
        self.g_ac = self.matched_g_ac();
        self
    }

    /// Critical squeezing λ_max = (κ_A/2)(1 + C_AB).
    pub fn lambda_max(&self) -> f64 {
        0.5 * self.kappa_a * (1.0 + self.coop_ab())
    }

    pub fn network(&self) -> ModeNetwork {
        let modes = vec![
            ModeSpec::new("A", 0.0, self.kappa_a, self.n_a, 0.0),
            ModeSpec::new("B", 0.0, self.kappa_b, self.n_b, 0.0),
            ModeSpec::new("C", 0.0, self.kappa_c, self.n_c, self.chi_c),
        ];
        let couplings = vec![
            Coupling::beam_splitter("A", "B", self.g_ab, 0.0),
            Coupling::beam_splitter("B", "C", self.g_bc, 0.0),
            Coupling::beam_splitter("A", "C", self.g_ac, self.phi),
            Coupling::squeeze("A", self.lambda, self.theta),
            Coupling::drive("B", self.eps, self.drive_phase),
        ];
        ModeNetwork::new(modes, couplings).expect("amplifier network is well formed")
    }

    /// Loop-phase and cooperativity dependence of N_CA for χ_A = χ_B = 0.
    pub fn nonreciprocity_ca(&self) -> f64 {
        let r = self.coop_ab() * self.coop_bc() / self.coop_ac();
        -2.0 * self.phi.sin() / (r.sqrt() + 1.0 / r.sqrt())
    }

    /// Reflection power gain of mode B under the nonreciprocity conditions.
    pub fn gain(&self) -> f64 {
        let (cab, cbc, cl, x) = (self.coop_ab(), self.coop_bc(), self.coop_lambda(), self.chi_ratio());
        let num = ((1.0 - cab) * (1.0 + cab) - cl * cl).powi(2) * ((1.0 - cbc).powi(2) + x * x);
        let den = (1.0 + cab - cl).powi(2) * (1.0 + cab + cl).powi(2) * ((1.0 + cbc).powi(2) + x * x);
        num / den
    }

    /// Measurement-induced dephasing with C_AC = C_AB C_BC, φ = −π/2, n̄_B = n̄_C = 0.
    pub fn gamma_meas_nonreciprocal(&self) -> f64 {
        let (cbc, x) = (self.coop_bc(), self.chi_ratio());
        8.0 * (self.eps * self.eps / self.kappa_b) * x * x * cbc * (1.0 + cbc) / ((1.0 + cbc).powi(2) + x * x).powi(2)
    }

    /// Measurement rate at the optimal amplifier phase θ = −π/2 + 2φ_d.
    pub fn gamma_m_nonreciprocal(&self, n_add: f64) -> f64 {
        let (cab, cbc, cl, x) = (self.coop_ab(), self.coop_bc(), self.coop_lambda(), self.chi_ratio());
        let pre = 8.0 * (self.eps * self.eps / self.kappa_b) * x * x * cbc * cbc / ((1.0 + cbc).powi(2) + x * x).powi(2);
        pre * (-1.0 + cab + cl).powi(2)
            / (4.0 * cab * (cl + 2.0 * self.n_a) + (2.0 * n_add + 1.0) * (1.0 + cab - cl).powi(2))
    }

    /// Efficiency neglecting parasitic dephasing.
    pub fn eta_approx(&self, n_add: f64) -> f64 {
        let (cab, cbc, cl) = (self.coop_ab(), self.coop_bc(), self.coop_lambda());
        cbc / (cbc + 1.0) * (-1.0 + cab + cl).powi(2) / (4.0 * cab * cl + (2.0 * n_add + 1.0) * (1.0 + cab - cl).powi(2))
    }

    /// Infinite-gain limit of [`Self::eta_approx`].
    pub fn eta_limit(&self) -> f64 {
        let (cab, cbc) = (self.coop_ab(), self.coop_bc());
        cbc / (cbc + 1.0) * cab / (cab + 1.0)
    }

    /// Squeezing λ ∈ (0, λ_max) reaching the power gain `target` according to
    /// [`Self::gain`], by bisection to relative tolerance `rtol`.
    pub fn lambda_for_gain(&self, target: f64, rtol: f64) -> Option<f64> {
        let f = |lam: f64| AmplifierParams { lambda: lam, ..*self }.gain() - target;
        bisect(f, 0.0, self.lambda_max(), rtol)
    }
}

/// Bisection for an increasing-or-decreasing bracketed root.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi * (1.0 - 1e-15));
    if !(flo.is_finite() && fhi.is_finite()) || flo * fhi > 0.0 {
        return None;
    }
    while (hi - lo) > rtol * hi.abs().max(lo.abs()) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Eigen-decomposition of a 2×2 covariance block scaled to a confidence
/// ellipse: returns (semi-axes, angle of the first semi-axis in (−π/2, π/2]).
pub fn confidence_ellipse(cov: &Array2<f64>, scale: f64) -> Result<([f64; 2], f64)> {
    let (w, v) = cov.eigh(UPLO::Lower)?;
    let axes = [scale * w[1].max(0.0).sqrt(), scale * w[0].max(0.0).sqrt()];
    let mut angle = v[[1, 1]].atan2(v[[0, 1]]);
    if angle > FRAC_PI_2 {
        angle -= PI;
    } else if angle <= -FRAC_PI_2 {
        angle += PI;
    }
    Ok((axes, angle))
}

/// Scale factor for a bivariate Gaussian confidence region: √(χ²₂ quantile).
pub fn chi2_2dof_scale(confidence: f64) -> f64 {
    (-2.0 * (1.0 - confidence).ln()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    /// (⟨q⟩, ⟨p⟩)
    pub center: [f64; 2],
    /// Semi-axes, major first.
    pub axes: [f64; 2],
    /// Angle of the major axis from the q axis.
    pub angle: f64,
    pub scale: f64,
}

/// Confidence ellipse of one mode's marginal Wigner function.
pub fn pointer_ellipse(state: &PointerState, mode: usize, confidence: f64) -> Result<Ellipse> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence {confidence} outside (0, 1)")));
    }
    let (q, p) = (2 * mode, 2 * mode + 1);
    if p >= state.mu.len() {
        return Err(Error::DimensionMismatch(format!("mode index {mode} out of range")));
    }
    let cov = state.sigma.slice(s![q..q + 2, q..q + 2]).to_owned();
    let scale = chi2_2dof_scale(confidence);
    let (axes, angle) = confidence_ellipse(&cov, scale)?;
    Ok(Ellipse { center: [state.mu[q], state.mu[p]], axes, angle, scale })
}
