//! Moments of the off-diagonal qubit block ρ_eg and of the pointer states.
//!
//! The Wigner function of ρ_eg stays Gaussian with complex covariance Σ,
//! complex mean μ and log-trace ν (tr ρ_eg = e^{−ν}):
//!
//! ```text
//! dΣ/dt = AΣ + ΣAᵀ − ΣBΣ + C
//! dμ/dt = (A − ΣB)μ + d − Σf
//! dν/dt = g + fᵀμ + ½ μᵀBμ + ½ tr(BΣ)
//! ```
//!
//! Re dν/dt is the qubit dephasing rate, Im dν/dt the frequency shift.

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Cholesky, Eig, Inverse, Solve, UPLO};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, complexify, fro_c, symmetrize_c};
use crate::network_model::{eg_arrays, pointer_diffusion, pointer_dynamical_matrix, EgArrays, QuadratureModel};
use crate::ode::{self, Tolerances};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianEGState {
    pub sigma: Array2<C64>,
    pub mu: Array1<C64>,
    pub nu: C64,
}

impl GaussianEGState {
    /// Qubit-independent thermal product state: Σ = ⊕(n̄+½)I, μ = 0, ν = 0.
    pub fn thermal(model: &QuadratureModel) -> Self {
        let dim = model.dim();
        GaussianEGState {
            sigma: complexify(&model.input_noise()),
            mu: Array1::zeros(dim),
            nu: C64::new(0.0, 0.0),
        }
    }

    fn pack(&self) -> Array1<C64> {
        let dim = self.mu.len();
        let mut v = Array1::zeros(dim * dim + dim + 1);
        v.slice_mut(s![..dim * dim]).assign(&Array1::from_iter(self.sigma.iter().cloned()));
        v.slice_mut(s![dim * dim..dim * dim + dim]).assign(&self.mu);
        v[dim * dim + dim] = self.nu;
        v
    }

    fn unpack(v: &Array1<C64>, dim: usize) -> Self {
        GaussianEGState {
            sigma: Array2::from_shape_vec((dim, dim), v.slice(s![..dim * dim]).to_vec()).expect("shape"),
            mu: v.slice(s![dim * dim..dim * dim + dim]).to_owned(),
            nu: v[dim * dim + dim],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointerState {
    pub s: f64,
    pub sigma: Array2<f64>,
    pub mu: Array1<f64>,
    /// ⟨k†k⟩ per mode.
    pub occupancies: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingReport {
    pub gamma_par: f64,
    pub gamma_meas: f64,
    /// Re dν/dt evaluated directly.
    pub gamma_d: f64,
    /// Im dν/dt, including the constant qubit energy shift.
    pub b_shift: f64,
}

/// Time derivatives of (Σ, μ, ν).
pub fn moment_rhs(eg: &EgArrays, st: &GaussianEGState) -> Result<(Array2<C64>, Array1<C64>, C64)> {
    let dim = eg.a.nrows();
    if st.sigma.dim() != (dim, dim) || st.mu.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state is {:?}/{} but model has dimension {dim}",
            st.sigma.dim(),
            st.mu.len()
        )));
    }
    let sb = st.sigma.dot(&eg.b);
    let dsigma = eg.a.dot(&st.sigma) + st.sigma.dot(&eg.a.t()) - sb.dot(&st.sigma) + &eg.c;
    let dmu = (&eg.a - &sb).dot(&st.mu) + &eg.d - st.sigma.dot(&eg.f);
    let half = C64::new(0.5, 0.0);
    let dnu = eg.g + eg.f.dot(&st.mu) + half * st.mu.dot(&eg.b.dot(&st.mu)) + half * eg.b.dot(&st.sigma).diag().sum();
    Ok((dsigma, dmu, dnu))
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GaussianEGState>,
    /// Re dν/dt at each output time.
    pub gamma_d: Vec<f64>,
    /// Im dν/dt at each output time.
    pub b_shift: Vec<f64>,
}

fn integrate_arrays(
    eg: &EgArrays,
    state0: &GaussianEGState,
    times: &[f64],
    tol: &Tolerances,
    check_positivity: bool,
) -> Result<Trajectory> {
    let dim = eg.a.nrows();
    moment_rhs(eg, state0)?;
    if check_positivity && !re_positive_definite(&state0.sigma) {
        return Err(Error::PositivityLoss { t: 0.0 });
    }
    let rhs = |_t: f64, y: &Array1<C64>| {
        let st = GaussianEGState::unpack(y, dim);
        let (ds, dm, dn) = moment_rhs(eg, &st)?;
        Ok(GaussianEGState { sigma: ds, mu: dm, nu: dn }.pack())
    };
    let post = |t: f64, y: &mut Array1<C64>| {
        let mut sig = Array2::from_shape_vec((dim, dim), y.slice(s![..dim * dim]).to_vec()).expect("shape");
        symmetrize_c(&mut sig);
        if check_positivity && !re_positive_definite(&sig) {
            return Err(Error::PositivityLoss { t });
        }
        y.slice_mut(s![..dim * dim]).assign(&Array1::from_iter(sig.iter().cloned()));
        Ok(())
    };
    let ys = ode::integrate(rhs, post, 0.0, state0.pack(), times, tol)?;
    let mut traj = Trajectory { times: times.to_vec(), states: vec![], gamma_d: vec![], b_shift: vec![] };
    for y in ys {
        let st = GaussianEGState::unpack(&y, dim);
        let (_, _, dn) = moment_rhs(eg, &st)?;
        traj.gamma_d.push(dn.re);
        traj.b_shift.push(dn.im);
        traj.states.push(st);
    }
    Ok(traj)
}

fn re_positive_definite(sigma: &Array2<C64>) -> bool {
    linalg::re(sigma).cholesky(UPLO::Lower).is_ok()
}

/// Integrates the ρ_eg moment equations from `state0` at t = 0, reporting
/// the state at each of `times`.
pub fn integrate(
    model: &QuadratureModel,
    state0: &GaussianEGState,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Trajectory> {
    integrate_arrays(&eg_arrays(model), state0, times, tol, true)
}

/// Integrates the pointer-state moment equations (real Σ, μ; ν unused).
pub fn integrate_pointer(
    model: &QuadratureModel,
    s: f64,
    sigma0: &Array2<f64>,
    mu0: &Array1<f64>,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Vec<(Array2<f64>, Array1<f64>)>> {
    let (a, d) = pointer_dynamical_matrix(model, s);
    let dim = model.dim();
    let eg = EgArrays {
        a: complexify(&a),
        b: Array2::zeros((dim, dim)),
        c: complexify(&pointer_diffusion(model)),
        d: linalg::complexify_vec(&d),
        f: Array1::zeros(dim),
        g: C64::new(0.0, 0.0),
    };
    let st0 = GaussianEGState { sigma: complexify(sigma0), mu: linalg::complexify_vec(mu0), nu: C64::new(0.0, 0.0) };
    let traj = integrate_arrays(&eg, &st0, times, tol, true)?;
    Ok(traj.states.into_iter().map(|st| (linalg::re(&st.sigma), st.mu.mapv(|z| z.re))).collect())
}

#[derive(Debug, Clone)]
pub struct CareSolution {
    pub sigma: Array2<C64>,
    /// Stable eigenvalues of the Hamiltonian matrix.
    pub stable_eigenvalues: Vec<C64>,
    /// Condition number of the (column-normalised) U block.
    pub cond_u: f64,
    /// Frobenius norm of the Riccati residual after refinement.
    pub residual: f64,
}

fn riccati_residual(eg: &EgArrays, sigma: &Array2<C64>) -> Array2<C64> {
    eg.a.dot(sigma) + sigma.dot(&eg.a.t()) - sigma.dot(&eg.b).dot(sigma) + &eg.c
}

/// Steady-state covariance of ρ_eg from the stable invariant subspace of
/// H = [[Aᵀ, −B], [−C, −A]].
pub fn steady_state_covariance(model: &QuadratureModel) -> Result<CareSolution> {
    care(&eg_arrays(model))
}

pub fn care(eg: &EgArrays) -> Result<CareSolution> {
    let n = eg.a.nrows();
    let mut h = Array2::<C64>::zeros((2 * n, 2 * n));
    h.slice_mut(s![..n, ..n]).assign(&eg.a.t());
    h.slice_mut(s![..n, n..]).assign(&(-&eg.b));
    h.slice_mut(s![n.., ..n]).assign(&(-&eg.c));
    h.slice_mut(s![n.., n..]).assign(&(-&eg.a));
    let (w, v) = h.eig()?;

    let a_norm = fro_c(&eg.a);
    let tol = 1e-10 * a_norm;
    if let Some(z) = w.iter().find(|z| z.re.abs() <= tol) {
        return Err(Error::DegenerateStableSubspace { re: z.re, im: z.im });
    }
    let stable: Vec<usize> = (0..2 * n).filter(|&i| w[i].re < -tol).collect();
    if stable.len() != n {
        let z = w.iter().min_by(|a, b| a.re.abs().total_cmp(&b.re.abs())).expect("nonempty");
        return Err(Error::DegenerateStableSubspace { re: z.re, im: z.im });
    }
    let mut u = Array2::<C64>::zeros((n, n));
    let mut vv = Array2::<C64>::zeros((n, n));
    for (col, &i) in stable.iter().enumerate() {
        let vec = v.column(i);
        let nrm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        u.column_mut(col).assign(&vec.slice(s![..n]).mapv(|z| z / nrm));
        vv.column_mut(col).assign(&vec.slice(s![n..]).mapv(|z| z / nrm));
    }
    let cond_u = linalg::cond_c(&u)?;
    if !(cond_u <= 1e12) {
        return Err(Error::SingularU { cond: cond_u });
    }
    let mut sigma = vv.dot(&u.inv()?);
    symmetrize_c(&mut sigma);

    // Newton polishing of the eigenvector solution
    let scale = a_norm * fro_c(&sigma) + fro_c(&eg.c);
    let mut res = fro_c(&riccati_residual(eg, &sigma));
    for _ in 0..3 {
        if res <= 1e-13 * scale {
            break;
        }
        let closed = &eg.a - &sigma.dot(&eg.b);
        let r = riccati_residual(eg, &sigma);
        let x = linalg::sylvester_c(&closed, &(-r))?;
        let mut next = &sigma + &x;
        symmetrize_c(&mut next);
        let next_res = fro_c(&riccati_residual(eg, &next));
        if next_res >= res {
            break;
        }
        sigma = next;
        res = next_res;
    }
    let tol_res = 1e-9 * (a_norm * fro_c(&sigma) + fro_c(&eg.c));
    if res > tol_res {
        return Err(Error::CareResidual { residual: res, tol: tol_res });
    }
    if let Some(k) = (0..n).find(|&k| sigma[[k, k]].re <= 0.0) {
        return Err(Error::UnphysicalBranch(format!("Re Σ[{k},{k}] = {:.3e} <= 0", sigma[[k, k]].re)));
    }
    Ok(CareSolution { sigma, stable_eigenvalues: stable.iter().map(|&i| w[i]).collect(), cond_u, residual: res })
}

/// μ_ss = −(A − ΣB)⁻¹ (d − Σf).
pub fn steady_state_mean(model: &QuadratureModel, sigma: &Array2<C64>) -> Result<Array1<C64>> {
    mean_from_arrays(&eg_arrays(model), sigma)
}

fn mean_from_arrays(eg: &EgArrays, sigma: &Array2<C64>) -> Result<Array1<C64>> {
    let m = &eg.a - &sigma.dot(&eg.b);
    let rhs = -(&eg.d - &sigma.dot(&eg.f));
    if rhs.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Ok(rhs);
    }
    let mu = m.solve(&rhs).map_err(|e| Error::SingularLinearSystem(format!("A − ΣB: {e}")))?;
    let res = (m.dot(&mu) - &rhs).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = fro_c(&m) * mu.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() + 1e-300;
    if !(res <= 1e-10 * scale.max(rhs.iter().map(|z| z.norm()).fold(0.0, f64::max))) {
        return Err(Error::SingularLinearSystem(format!("mean residual {res:.3e}")));
    }
    Ok(mu)
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub sigma: Array2<C64>,
    pub mu: Array1<C64>,
    pub care: CareSolution,
    pub report: DephasingReport,
}

/// Steady-state Σ, μ and the dephasing decomposition.
pub fn steady_state(model: &QuadratureModel) -> Result<SteadyState> {
    let eg = eg_arrays(model);
    let care = care(&eg)?;
    let sigma = care.sigma.clone();
    let mu = mean_from_arrays(&eg, &sigma)?;
    let report = rates_at(model, &eg, &sigma, &mu)?;
    Ok(SteadyState { sigma, mu, care, report })
}

pub fn dephasing_rates(model: &QuadratureModel) -> Result<DephasingReport> {
    Ok(steady_state(model)?.report)
}

/// Γ_par = −tr(Im Σ H_QR), Γ_meas = −2(Im μᵀ h_QR + Im μᵀ H_QR Re μ).
pub fn rates_from_moments(model: &QuadratureModel, sigma: &Array2<C64>, mu: &Array1<C64>) -> Result<DephasingReport> {
    rates_at(model, &eg_arrays(model), sigma, mu)
}

fn rates_at(model: &QuadratureModel, eg: &EgArrays, sigma: &Array2<C64>, mu: &Array1<C64>) -> Result<DephasingReport> {
    let im_s = linalg::im(sigma);
    let gamma_par = -im_s.dot(&model.h_qr).diag().sum();
    let re_mu = mu.mapv(|z| z.re);
    let im_mu = mu.mapv(|z| z.im);
    let gamma_meas = -2.0 * (im_mu.dot(&model.h_qr_vec) + im_mu.dot(&model.h_qr.dot(&re_mu)));
    let st = GaussianEGState { sigma: sigma.clone(), mu: mu.clone(), nu: C64::new(0.0, 0.0) };
    let (_, _, dnu) = moment_rhs(eg, &st)?;
    Ok(DephasingReport { gamma_par, gamma_meas, gamma_d: dnu.re, b_shift: dnu.im })
}

/// Steady pointer state: AΣ + ΣAᵀ + C = 0, μ = −A⁻¹d.
pub fn pointer_state(model: &QuadratureModel, s: f64) -> Result<PointerState> {
    let (a, d) = pointer_dynamical_matrix(model, s);
    let max_re = linalg::spectral_abscissa(&a)?;
    if max_re >= 0.0 {
        return Err(Error::UnstableDynamics { max_re });
    }
    let sigma = linalg::lyapunov(&a, &pointer_diffusion(model))?;
    let mu = -a.solve(&d).map_err(|e| Error::SingularLinearSystem(format!("pointer drift: {e}")))?;
    let occupancies = (0..model.n)
        .map(|k| {
            let (q, p) = (2 * k, 2 * k + 1);
            0.5 * (sigma[[q, q]] + sigma[[p, p]] + mu[q] * mu[q] + mu[p] * mu[p] - 1.0)
        })
        .collect();
    Ok(PointerState { s, sigma, mu, occupancies })
}

/// Parasitic dephasing of one thermal mode, principal square-root branch:
/// (κ/2) Re[√((1 + 2iχ/κ)² + 8iχn̄/κ) − 1].
pub fn single_mode_thermal_pdrate(kappa: f64, chi: f64, n_th: f64) -> f64 {
    let x = C64::new(1.0, 2.0 * chi / kappa);
    let root = (x * x + C64::new(0.0, 8.0 * chi * n_th / kappa)).sqrt();
    0.5 * kappa * (root.re - 1.0)
}

/// First-order inverse of [`single_mode_thermal_pdrate`]; valid for n̄ ≪ 1.
pub fn occupancy_from_pdrate(kappa: f64, chi: f64, gamma_par: f64) -> f64 {
    (kappa * kappa + 4.0 * chi * chi) / (4.0 * kappa * chi * chi) * gamma_par
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentOracle {
    /// 2|ε|²χ²κ / ([κ²/4 + (Δ−χ)²][κ²/4 + (Δ+χ)²])
    pub rate: f64,
    /// (n_e + n_g) χ²κ / (κ²/4 + χ² + Δ²)
    pub rate_from_occupancies: f64,
    pub n_e: f64,
    pub n_g: f64,
}

/// Measurement-induced dephasing of one coherently driven mode with
/// Ĥ = −Δ c†c + χ c†c σ_z + (ε c† + h.c.).
pub fn single_mode_coherent_mdrate(kappa: f64, chi: f64, delta: f64, eps: f64) -> CoherentOracle {
    let k2 = kappa * kappa / 4.0;
    let de = k2 + (delta - chi).powi(2);
    let dg = k2 + (delta + chi).powi(2);
    let e2 = eps * eps;
    let n_e = e2 / de;
    let n_g = e2 / dg;
    CoherentOracle {
        rate: 2.0 * e2 * chi * chi * kappa / (de * dg),
        rate_from_occupancies: (n_e + n_g) * chi * chi * kappa / (k2 + chi * chi + delta * delta),
        n_e,
        n_g,
    }
}
