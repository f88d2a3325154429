//! Mode networks and their lowering to quadrature-basis coefficient arrays.
//!
//! Hamiltonians are written as Ĥ = ½ r̂ᵀ H r̂ + r̂ᵀ h + const in the ordering
//! r̂ = (q₁, p₁, …, q_N, p_N), with q = (a + a†)/√2 and p = i(a† − a)/√2.
//! The full Hamiltonian is Ĥ_R + σ̂_z Ĥ_QR; per-mode baths contribute the
//! dissipation matrix Γ = ⊕ κ((n̄ + ½)I + iJ/2).

mod config;

pub use config::{CouplingConfig, ModeConfig, NetworkConfig};

use std::collections::HashMap;
use std::f64::consts::SQRT_2;

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, add_block, complexify, complexify_vec, i2, j2, x2, z2};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub label: String,
    /// Detuning Δ, entering as −Δ a†a.
    pub detuning: f64,
    pub kappa: f64,
    pub n_th: f64,
    /// Dispersive shift χ, entering as χ a†a σ_z.
    pub chi: f64,
    /// Longitudinal coupling g_z, entering as g_z (a + a†) σ_z.
    pub longitudinal: f64,
}

impl ModeSpec {
    pub fn new(label: impl Into<String>, detuning: f64, kappa: f64, n_th: f64, chi: f64) -> Self {
        ModeSpec { label: label.into(), detuning, kappa, n_th, chi, longitudinal: 0.0 }
    }

    pub fn with_longitudinal(mut self, gz: f64) -> Self {
        self.longitudinal = gz;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Coupling {
    /// g (e^{iφ} j† k + e^{−iφ} k† j)
    BeamSplitter { j: String, k: String, g: f64, phi: f64 },
    /// (λ/2)(e^{iθ} a†² + e^{−iθ} a²)
    Squeeze { mode: String, lambda: f64, theta: f64 },
    /// ε (e^{iφ} b† + e^{−iφ} b)
    Drive { mode: String, eps: f64, phi: f64 },
}

impl Coupling {
    pub fn beam_splitter(j: &str, k: &str, g: f64, phi: f64) -> Self {
        Coupling::BeamSplitter { j: j.into(), k: k.into(), g, phi }
    }

    pub fn squeeze(mode: &str, lambda: f64, theta: f64) -> Self {
        Coupling::Squeeze { mode: mode.into(), lambda, theta }
    }

    pub fn drive(mode: &str, eps: f64, phi: f64) -> Self {
        Coupling::Drive { mode: mode.into(), eps, phi }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeNetwork {
    pub modes: Vec<ModeSpec>,
    pub couplings: Vec<Coupling>,
    /// Scalar part of Ĥ_QR. `None` uses the normal-ordering value −Σχ/2.
    pub qubit_energy_shift: Option<f64>,
}

impl ModeNetwork {
    pub fn new(modes: Vec<ModeSpec>, couplings: Vec<Coupling>) -> Result<Self> {
        let net = ModeNetwork { modes, couplings, qubit_energy_shift: None };
        net.check()?;
        Ok(net)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.label == label)
    }

    pub fn mode(&self, label: &str) -> Option<&ModeSpec> {
        self.modes.iter().find(|m| m.label == label)
    }

    pub fn mode_mut(&mut self, label: &str) -> Option<&mut ModeSpec> {
        self.modes.iter_mut().find(|m| m.label == label)
    }

    pub fn h_const(&self) -> f64 {
        self.qubit_energy_shift
            .unwrap_or_else(|| -0.5 * self.modes.iter().map(|m| m.chi).sum::<f64>())
    }

    /// Structural validation: labels, references, signs.
    pub fn check(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter("network has no modes".into()));
        }
        let mut seen = HashMap::new();
        for m in &self.modes {
            if seen.insert(m.label.as_str(), ()).is_some() {
                return Err(Error::DuplicateLabel(m.label.clone()));
            }
            let finite = [m.detuning, m.kappa, m.n_th, m.chi, m.longitudinal].iter().all(|x| x.is_finite());
            if !finite {
                return Err(Error::InvalidParameter(format!("mode `{}` has a non-finite parameter", m.label)));
            }
            if m.kappa < 0.0 {
                return Err(Error::InvalidParameter(format!("mode `{}`: kappa must be >= 0", m.label)));
            }
            if m.n_th < 0.0 {
                return Err(Error::InvalidParameter(format!("mode `{}`: n_th must be >= 0", m.label)));
            }
        }
        let known = |l: &str| {
            if seen.contains_key(l) {
                Ok(())
            } else {
                Err(Error::UnknownMode(l.to_string()))
            }
        };
        for c in &self.couplings {
            match c {
                Coupling::BeamSplitter { j, k, g, phi } => {
                    known(j)?;
                    known(k)?;
                    if j == k {
                        return Err(Error::InvalidParameter(format!("beam splitter couples `{j}` to itself")));
                    }
                    nonneg("g", *g, *phi)?;
                }
                Coupling::Squeeze { mode, lambda, theta } => {
                    known(mode)?;
                    nonneg("lambda", *lambda, *theta)?;
                }
                Coupling::Drive { mode, eps, phi } => {
                    known(mode)?;
                    nonneg("eps", *eps, *phi)?;
                }
            }
        }
        Ok(())
    }

    /// Same network with modes declared in a different order:
    /// new mode `i` is old mode `perm[i]`.
    pub fn reordered(&self, perm: &[usize]) -> Self {
        ModeNetwork {
            modes: perm.iter().map(|&p| self.modes[p].clone()).collect(),
            couplings: self.couplings.clone(),
            qubit_energy_shift: self.qubit_energy_shift,
        }
    }
}

fn nonneg(name: &str, v: f64, phase: f64) -> Result<()> {
    if !(v.is_finite() && phase.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} or its phase is not finite")));
    }
    if v < 0.0 {
        return Err(Error::InvalidParameter(format!("{name} must be >= 0 (phases carry the sign)")));
    }
    Ok(())
}

/// Coefficient arrays in the interleaved quadrature basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureModel {
    pub n: usize,
    pub labels: Vec<String>,
    pub omega: Array2<f64>,
    pub h_r: Array2<f64>,
    pub h_r_vec: Array1<f64>,
    /// Scalar of Ĥ_R (irrelevant to the dynamics, kept for bookkeeping).
    pub h_r_const: f64,
    pub h_qr: Array2<f64>,
    pub h_qr_vec: Array1<f64>,
    pub h_const: f64,
    pub gamma: Array2<C64>,
    /// κ_K repeated for both quadratures of each mode.
    pub gamma_diag: Array1<f64>,
    pub n_th: Array1<f64>,
}

impl QuadratureModel {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// S̄_in = ⊕(n̄_K + ½) I₂.
    pub fn input_noise(&self) -> Array2<f64> {
        Array2::from_diag(&Array1::from_iter(self.n_th.iter().flat_map(|&n| [n + 0.5, n + 0.5])))
    }

    pub fn sqrt_gamma(&self) -> Array2<f64> {
        Array2::from_diag(&self.gamma_diag.mapv(f64::sqrt))
    }
}

/// Lowers a network to quadrature coefficient arrays.
pub fn assemble(net: &ModeNetwork) -> Result<QuadratureModel> {
    net.check()?;
    let n = net.modes.len();
    let dim = 2 * n;
    let mut h_r = Array2::zeros((dim, dim));
    let mut h_r_vec = Array1::zeros(dim);
    let mut h_r_const = 0.0;
    let mut h_qr = Array2::zeros((dim, dim));
    let mut h_qr_vec = Array1::zeros(dim);
    let mut gamma = Array2::<C64>::zeros((dim, dim));
    let mut gamma_diag = Array1::zeros(dim);

    for (k, m) in net.modes.iter().enumerate() {
        add_block(&mut h_r, k, k, &(-m.detuning * i2()));
        h_r_const += 0.5 * m.detuning;
        add_block(&mut h_qr, k, k, &(m.chi * i2()));
        h_qr_vec[2 * k] += SQRT_2 * m.longitudinal;
        let g = complexify(&((m.n_th + 0.5) * m.kappa * i2())) + j2().mapv(|x| C64::new(0.0, 0.5 * m.kappa * x));
        gamma.slice_mut(s![2 * k..2 * k + 2, 2 * k..2 * k + 2]).assign(&g);
        gamma_diag[2 * k] = m.kappa;
        gamma_diag[2 * k + 1] = m.kappa;
    }

    let idx = |l: &str| net.index_of(l).expect("checked");
    for c in &net.couplings {
        match c {
            Coupling::BeamSplitter { j, k, g, phi } => {
                let (jj, kk) = (idx(j), idx(k));
                let (c, s) = (phi.cos(), phi.sin());
                add_block(&mut h_r, jj, kk, &(*g * (c * i2() - s * j2())));
                add_block(&mut h_r, kk, jj, &(*g * (c * i2() + s * j2())));
            }
            Coupling::Squeeze { mode, lambda, theta } => {
                let a = idx(mode);
                add_block(&mut h_r, a, a, &(*lambda * (theta.cos() * z2() + theta.sin() * x2())));
            }
            Coupling::Drive { mode, eps, phi } => {
                let b = idx(mode);
                h_r_vec[2 * b] += SQRT_2 * eps * phi.cos();
                h_r_vec[2 * b + 1] += SQRT_2 * eps * phi.sin();
            }
        }
    }

    Ok(QuadratureModel {
        n,
        labels: net.modes.iter().map(|m| m.label.clone()).collect(),
        omega: linalg::symplectic_form(n),
        h_r,
        h_r_vec,
        h_r_const,
        h_qr,
        h_qr_vec,
        h_const: net.h_const(),
        gamma,
        gamma_diag,
        n_th: Array1::from_iter(net.modes.iter().map(|m| m.n_th)),
    })
}

/// Pointer-state drift A_s = Ω(H_R + s H_QR + Im Γ) and drive d_s = Ω(h_R + s h_QR).
/// `s` is +1 for |e⟩, −1 for |g⟩; 0 gives the qubit-free network.
pub fn pointer_dynamical_matrix(model: &QuadratureModel, s: f64) -> (Array2<f64>, Array1<f64>) {
    let om = &model.omega;
    let a = om.dot(&(&model.h_r + &(s * &model.h_qr) + &linalg::im(&model.gamma)));
    let d = om.dot(&(&model.h_r_vec + &(s * &model.h_qr_vec)));
    (a, d)
}

/// Pointer-state diffusion −Ω Re Γ Ω.
pub fn pointer_diffusion(model: &QuadratureModel) -> Array2<f64> {
    let om = &model.omega;
    -om.dot(&linalg::re(&model.gamma)).dot(om)
}

/// Arrays of the off-diagonal block moment equations.
#[derive(Debug, Clone, PartialEq)]
pub struct EgArrays {
    pub a: Array2<C64>,
    pub b: Array2<C64>,
    pub c: Array2<C64>,
    pub d: Array1<C64>,
    pub f: Array1<C64>,
    pub g: C64,
}

pub fn eg_arrays(model: &QuadratureModel) -> EgArrays {
    let om = complexify(&model.omega);
    let i = C64::new(0.0, 1.0);
    let (a, _) = pointer_dynamical_matrix(model, 0.0);
    let hqr = complexify(&model.h_qr);
    let inner = hqr.mapv(|z| z * i * 0.5) + complexify(&linalg::re(&model.gamma));
    EgArrays {
        a: complexify(&a),
        b: hqr.mapv(|z| z * 2.0 * i),
        c: -om.dot(&inner).dot(&om),
        d: complexify_vec(&model.omega.dot(&model.h_r_vec)),
        f: complexify_vec(&model.h_qr_vec).mapv(|z| z * 2.0 * i),
        g: 2.0 * i * model.h_const,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Diagnostic {
    Asymmetric { matrix: String, max_deviation: f64 },
    NonHermitianGamma { max_deviation: f64 },
    GammaNotPsd { min_eigenvalue: f64 },
    Unstable { s: f64, max_real_part: f64 },
    Failed { what: String },
}

/// Non-fatal model checks: symmetry, PSD of Γ, Hurwitz stability of both
/// pointer drifts.
pub fn validate(model: &QuadratureModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (name, m) in [("H_R", &model.h_r), ("H_QR", &model.h_qr)] {
        let dev = (m - &m.t()).iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if dev > 1e-12 * linalg::fro(m).max(1.0) {
            out.push(Diagnostic::Asymmetric { matrix: name.into(), max_deviation: dev });
        }
    }
    let gh = model.gamma.t().mapv(|z| z.conj());
    let dev = (&model.gamma - &gh).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let gnorm = linalg::fro_c(&model.gamma);
    if dev > 1e-12 * gnorm.max(1.0) {
        out.push(Diagnostic::NonHermitianGamma { max_deviation: dev });
    }
    let herm = (&model.gamma + &gh).mapv(|z| z * 0.5);
    match herm.eigh(UPLO::Lower) {
        Ok((w, _)) => {
            let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
            if min < -1e-12 * gnorm {
                out.push(Diagnostic::GammaNotPsd { min_eigenvalue: min });
            }
        }
        Err(e) => out.push(Diagnostic::Failed { what: format!("Gamma eigenvalues: {e}") }),
    }
    for s in [1.0, -1.0] {
        let (a, _) = pointer_dynamical_matrix(model, s);
        match linalg::spectral_abscissa(&a) {
            Ok(re) if re >= 0.0 => out.push(Diagnostic::Unstable { s, max_real_part: re }),
            Ok(_) => {}
            Err(e) => out.push(Diagnostic::Failed { what: format!("pointer drift eigenvalues: {e}") }),
        }
    }
    out
}

/// Orthogonal matrix P with r_grouped = P r for r_grouped = (q₁…q_N, p₁…p_N).
pub fn grouped_permutation(n: usize) -> Array2<f64> {
    let mut p = Array2::zeros((2 * n, 2 * n));
    for k in 0..n {
        p[[k, 2 * k]] = 1.0;
        p[[n + k, 2 * k + 1]] = 1.0;
    }
    p
}

/// Orthogonal matrix P mapping the quadratures of the original mode order
/// to the order `perm` (new mode `i` is old mode `perm[i]`).
pub fn mode_permutation(perm: &[usize]) -> Array2<f64> {
    let n = perm.len();
    let mut p = Array2::zeros((2 * n, 2 * n));
    for (i, &old) in perm.iter().enumerate() {
        p[[2 * i, 2 * old]] = 1.0;
        p[[2 * i + 1, 2 * old + 1]] = 1.0;
    }
    p
}
