//! Brute-force truncated Fock-space integration, used to certify the
//! Gaussian moment equations on one- and two-mode instances.
//!
//! The off-diagonal block obeys the non-trace-preserving equation
//! dρ_eg/dt = L_R(ρ_eg) − i{Ĥ_QR, ρ_eg}; the pointer states obey the
//! Lindbladian with Ĥ_R + s Ĥ_QR. Operators are stored as sparse triplets
//! built from the network directly, so memory stays O(D · terms).

use std::collections::HashMap;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::gaussian_dynamics::{self, GaussianEGState};
use crate::network_model::{assemble, Coupling, ModeNetwork};
use crate::ode::{self, Tolerances};
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockConfig {
    /// Fock dimension per mode, in network mode order.
    pub cutoffs: Vec<usize>,
    pub t_end: f64,
    /// Output times; an empty list means 200 uniform samples up to `t_end`.
    #[serde(default)]
    pub sample_times: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_cap")]
    pub dim_cap: usize,
    #[serde(default = "default_leak")]
    pub leakage_limit: f64,
}

fn default_cap() -> usize {
    10_000
}

fn default_leak() -> f64 {
    1e-6
}

impl FockConfig {
    pub fn new(cutoffs: Vec<usize>, t_end: f64) -> Self {
        FockConfig {
            cutoffs,
            t_end,
            sample_times: vec![],
            tolerances: Tolerances::default(),
            dim_cap: default_cap(),
            leakage_limit: default_leak(),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        if self.sample_times.is_empty() {
            (1..=200).map(|i| self.t_end * i as f64 / 200.0).collect()
        } else {
            self.sample_times.clone()
        }
    }

    pub fn with_extra_levels(&self, extra: usize) -> Self {
        FockConfig { cutoffs: self.cutoffs.iter().map(|c| c + extra).collect(), ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ladder {
    Create,
    Annihilate,
}

/// Tensor-product Fock basis, last mode fastest.
#[derive(Debug, Clone)]
struct Basis {
    cutoffs: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
    occ: Vec<Vec<usize>>,
}

impl Basis {
    fn new(cutoffs: &[usize]) -> Self {
        let n = cutoffs.len();
        let mut strides = vec![1; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * cutoffs[k + 1];
        }
        let dim = cutoffs.iter().product();
        let occ = (0..n).map(|k| (0..dim).map(|i| (i / strides[k]) % cutoffs[k]).collect()).collect();
        Basis { cutoffs: cutoffs.to_vec(), strides, dim, occ }
    }

    /// Applies a monomial (rightmost operator first) to basis state `idx`.
    fn apply(&self, ops: &[(usize, Ladder)], idx: usize) -> Option<(usize, f64)> {
        let mut cur = idx;
        let mut amp = 1.0;
        for &(k, op) in ops.iter().rev() {
            let n = self.occ[k][cur];
            match op {
                Ladder::Annihilate => {
                    if n == 0 {
                        return None;
                    }
                    amp *= (n as f64).sqrt();
                    cur -= self.strides[k];
                }
                Ladder::Create => {
                    if n + 1 >= self.cutoffs[k] {
                        return None;
                    }
                    amp *= ((n + 1) as f64).sqrt();
                    cur += self.strides[k];
                }
            }
        }
        Some((cur, amp))
    }
}

/// Sparse operator as (row, col, value) triplets.
#[derive(Debug, Clone, Default)]
struct Sparse {
    entries: Vec<(usize, usize, C64)>,
}

#[derive(Default)]
struct SparseBuilder {
    map: HashMap<(usize, usize), C64>,
}

impl SparseBuilder {
    fn add_monomial(&mut self, basis: &Basis, ops: &[(usize, Ladder)], coeff: C64) {
        if coeff == C64::new(0.0, 0.0) {
            return;
        }
        for col in 0..basis.dim {
            if let Some((row, amp)) = basis.apply(ops, col) {
                *self.map.entry((row, col)).or_insert(C64::new(0.0, 0.0)) += coeff * amp;
            }
        }
    }

    fn add_scaled(&mut self, other: &SparseBuilder, c: C64) {
        for (&k, &v) in &other.map {
            *self.map.entry(k).or_insert(C64::new(0.0, 0.0)) += c * v;
        }
    }

    fn build(self) -> Sparse {
        let mut entries: Vec<_> = self.map.into_iter().filter(|(_, v)| v.norm() > 0.0).map(|((r, c), v)| (r, c, v)).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        Sparse { entries }
    }
}

impl Sparse {
    /// self · ρ
    fn left(&self, rho: &Array2<C64>, out: &mut Array2<C64>, scale: C64) {
        for &(r, c, v) in &self.entries {
            let sv = scale * v;
            let src = rho.row(c);
            let mut dst = out.row_mut(r);
            dst.zip_mut_with(&src, |d, s| *d += sv * s);
        }
    }

    /// ρ · self
    fn right(&self, rho: &Array2<C64>, out: &mut Array2<C64>, scale: C64) {
        for &(r, c, v) in &self.entries {
            let sv = scale * v;
            let src = rho.column(r);
            let mut dst = out.column_mut(c);
            dst.zip_mut_with(&src, |d, s| *d += sv * s);
        }
    }

    /// tr(self · ρ)
    fn expect(&self, rho: &Array2<C64>) -> C64 {
        self.entries.iter().map(|&(r, c, v)| v * rho[[c, r]]).sum()
    }
}

struct Jump {
    mode: usize,
    op: Ladder,
    rate: f64,
}

/// ρ̇ = −i(K_L ρ − ρ K_R) + Σ rate · J ρ J†.
struct Generator {
    basis: Basis,
    kl: Sparse,
    kr: Sparse,
    jumps: Vec<Jump>,
}

impl Generator {
    fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let d = self.basis.dim;
        let mut out = Array2::zeros((d, d));
        self.kl.left(rho, &mut out, -I);
        self.kr.right(rho, &mut out, I);
        for j in &self.jumps {
            let st = self.basis.strides[j.mode];
            let occ = &self.basis.occ[j.mode];
            let cut = self.basis.cutoffs[j.mode];
            for m in 0..d {
                let nm = occ[m];
                let (src_m, am) = match j.op {
                    Ladder::Annihilate if nm + 1 < cut => (m + st, ((nm + 1) as f64).sqrt()),
                    Ladder::Create if nm >= 1 => (m - st, (nm as f64).sqrt()),
                    _ => continue,
                };
                for n in 0..d {
                    let nn = occ[n];
                    let (src_n, an) = match j.op {
                        Ladder::Annihilate if nn + 1 < cut => (n + st, ((nn + 1) as f64).sqrt()),
                        Ladder::Create if nn >= 1 => (n - st, (nn as f64).sqrt()),
                        _ => continue,
                    };
                    out[[m, n]] += rho[[src_m, src_n]] * (j.rate * am * an);
                }
            }
        }
        out
    }
}

/// Which block of the qubit-resolved density matrix to evolve.
#[derive(Debug, Clone, Copy)]
enum Block {
    Eg,
    Pointer(f64),
}

fn build_generator(net: &ModeNetwork, cutoffs: &[usize], block: Block) -> Result<Generator> {
    net.check()?;
    if cutoffs.len() != net.modes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} cutoffs for {} modes",
            cutoffs.len(),
            net.modes.len()
        )));
    }
    if cutoffs.iter().any(|&c| c < 2) {
        return Err(Error::InvalidParameter("Fock cutoffs must be >= 2".into()));
    }
    let dim = cutoffs.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    let basis = Basis::new(cutoffs);
    use Ladder::*;
    let one = C64::new(1.0, 0.0);

    let mut hr = SparseBuilder::default();
    let mut hqr = SparseBuilder::default();
    let mut decay = SparseBuilder::default();
    let mut jumps = vec![];
    for (k, m) in net.modes.iter().enumerate() {
        hr.add_monomial(&basis, &[(k, Create), (k, Annihilate)], one * (-m.detuning));
        hqr.add_monomial(&basis, &[(k, Create), (k, Annihilate)], one * m.chi);
        hqr.add_monomial(&basis, &[(k, Create)], one * m.longitudinal);
        hqr.add_monomial(&basis, &[(k, Annihilate)], one * m.longitudinal);
        let down = m.kappa * (m.n_th + 1.0);
        let up = m.kappa * m.n_th;
        if down > 0.0 {
            jumps.push(Jump { mode: k, op: Annihilate, rate: down });
            decay.add_monomial(&basis, &[(k, Create), (k, Annihilate)], one * down);
        }
        if up > 0.0 {
            jumps.push(Jump { mode: k, op: Create, rate: up });
            decay.add_monomial(&basis, &[(k, Annihilate), (k, Create)], one * up);
        }
    }
    let idx = |l: &str| net.index_of(l).expect("checked");
    for c in &net.couplings {
        match c {
            Coupling::BeamSplitter { j, k, g, phi } => {
                let (j, k) = (idx(j), idx(k));
                let e = C64::from_polar(*g, *phi);
                hr.add_monomial(&basis, &[(j, Create), (k, Annihilate)], e);
                hr.add_monomial(&basis, &[(k, Create), (j, Annihilate)], e.conj());
            }
            Coupling::Squeeze { mode, lambda, theta } => {
                let a = idx(mode);
                let e = C64::from_polar(0.5 * lambda, *theta);
                hr.add_monomial(&basis, &[(a, Create), (a, Create)], e);
                hr.add_monomial(&basis, &[(a, Annihilate), (a, Annihilate)], e.conj());
            }
            Coupling::Drive { mode, eps, phi } => {
                let b = idx(mode);
                let e = C64::from_polar(*eps, *phi);
                hr.add_monomial(&basis, &[(b, Create)], e);
                hr.add_monomial(&basis, &[(b, Annihilate)], e.conj());
            }
        }
    }

    let mut kl = SparseBuilder::default();
    let mut kr = SparseBuilder::default();
    kl.add_scaled(&hr, one);
    kr.add_scaled(&hr, one);
    match block {
        Block::Eg => {
            kl.add_scaled(&hqr, one);
            kr.add_scaled(&hqr, -one);
        }
        Block::Pointer(s) => {
            kl.add_scaled(&hqr, one * s);
            kr.add_scaled(&hqr, one * s);
        }
    }
    kl.add_scaled(&decay, -0.5 * I);
    kr.add_scaled(&decay, 0.5 * I);
    let _ = dim;
    Ok(Generator { basis, kl: kl.build(), kr: kr.build(), jumps })
}

fn check_dim(cfg: &FockConfig) -> Result<()> {
    let dim = cfg.cutoffs.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    if dim > cfg.dim_cap {
        return Err(Error::DimensionCap { dim, cap: cfg.dim_cap });
    }
    Ok(())
}

/// Truncated thermal product state.
fn thermal_state(basis: &Basis, n_th: &[f64]) -> Array2<C64> {
    let d = basis.dim;
    let mut rho = Array2::zeros((d, d));
    let mut total = 0.0;
    for i in 0..d {
        let w: f64 = n_th
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let occ = basis.occ[k][i] as i32;
                if n == 0.0 {
                    if occ == 0 { 1.0 } else { 0.0 }
                } else {
                    (-(1.0 + 1.0 / n).ln() * occ as f64).exp()
                }
            })
            .product();
        rho[[i, i]] = C64::new(w, 0.0);
        total += w;
    }
    rho.mapv_inplace(|z| z / total);
    rho
}

fn top_population(basis: &Basis, rho: &Array2<C64>) -> f64 {
    let tr: C64 = rho.diag().sum();
    let top: f64 = (0..basis.dim)
        .filter(|&i| (0..basis.cutoffs.len()).any(|k| basis.occ[k][i] + 1 == basis.cutoffs[k]))
        .map(|i| rho[[i, i]].norm())
        .sum();
    top / tr.norm()
}

fn flatten(rho: &Array2<C64>) -> Array1<C64> {
    Array1::from_iter(rho.iter().cloned())
}

fn unflatten(v: &Array1<C64>, d: usize) -> Array2<C64> {
    Array2::from_shape_vec((d, d), v.to_vec()).expect("shape")
}

/// Evolves ρ from t = 0 through `times`, renormalising the trace at each
/// output time. Returns the normalised states and accumulated log-traces.
fn evolve(gen: &Generator, rho0: Array2<C64>, times: &[f64], tol: &Tolerances) -> Result<Vec<(Array2<C64>, C64)>> {
    let d = gen.basis.dim;
    let mut out = Vec::with_capacity(times.len());
    let mut rho = rho0;
    let mut log_tr = C64::new(0.0, 0.0);
    let mut t = 0.0;
    for &te in times {
        let ys = ode::integrate(
            |_, y| Ok(flatten(&gen.apply(&unflatten(y, d)))),
            |_, _| Ok(()),
            t,
            flatten(&rho),
            &[te],
            tol,
        )?;
        rho = unflatten(&ys[0], d);
        let tr: C64 = rho.diag().sum();
        log_tr += tr.ln();
        rho.mapv_inplace(|z| z / tr);
        out.push((rho.clone(), log_tr));
        t = te;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub cutoffs: Vec<usize>,
    pub times: Vec<f64>,
    /// ν(t) = −log tr ρ_eg(t).
    pub nu: Vec<C64>,
    /// d Re ν/dt by finite differences of the sampled ν.
    pub gamma_d: Vec<f64>,
    /// Γ_d at the last sample from the instantaneous −Re tr(ρ̇)/tr ρ.
    pub gamma_d_final: f64,
    pub max_leakage: f64,
    /// Gaussian trajectory Γ_d at the same sample times.
    pub gamma_d_gaussian: Vec<f64>,
    /// Gaussian steady-state Γ_d.
    pub gamma_d_steady: f64,
    pub rel_delta_trajectory: f64,
    pub rel_delta_steady: f64,
}

fn finite_difference(times: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                return f64::NAN;
            }
            let (a, b) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
            (y[b] - y[a]) / (times[b] - times[a])
        })
        .collect()
}

/// Integrates the off-diagonal block from the qubit-independent thermal state.
pub fn evolve_eg_block(net: &ModeNetwork, cfg: &FockConfig) -> Result<OracleReport> {
    check_dim(cfg)?;
    let gen = build_generator(net, &cfg.cutoffs, Block::Eg)?;
    let n_th: Vec<f64> = net.modes.iter().map(|m| m.n_th).collect();
    let rho0 = thermal_state(&gen.basis, &n_th);
    let times = cfg.times();
    let states = evolve(&gen, rho0, &times, &cfg.tolerances)?;

    let max_leakage = states.iter().map(|(r, _)| top_population(&gen.basis, r)).fold(0.0, f64::max);
    if max_leakage > cfg.leakage_limit {
        return Err(Error::LeakageExceeded { leakage: max_leakage, limit: cfg.leakage_limit });
    }
    let nu: Vec<C64> = states.iter().map(|(_, l)| -l).collect();
    let re_nu: Vec<f64> = nu.iter().map(|z| z.re).collect();
    let gamma_d = finite_difference(&times, &re_nu);
    let (last, _) = states.last().ok_or_else(|| Error::InvalidParameter("no sample times".into()))?;
    let gamma_d_final = -gen.apply(last).diag().sum().re;

    let model = assemble(net)?;
    let traj = gaussian_dynamics::integrate(&model, &GaussianEGState::thermal(&model), &times, &cfg.tolerances)?;
    let gamma_d_steady = gaussian_dynamics::dephasing_rates(&model)?.gamma_d;
    let g_last = *traj.gamma_d.last().expect("nonempty");
    Ok(OracleReport {
        cutoffs: cfg.cutoffs.clone(),
        rel_delta_trajectory: rel(gamma_d_final, g_last),
        rel_delta_steady: rel(gamma_d_final, gamma_d_steady),
        times,
        nu,
        gamma_d,
        gamma_d_final,
        max_leakage,
        gamma_d_gaussian: traj.gamma_d,
        gamma_d_steady,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointerReport {
    pub s: f64,
    pub cutoffs: Vec<usize>,
    /// ⟨k†k⟩ at `t_end`.
    pub occupancies: Vec<f64>,
    /// Quadrature means at `t_end`.
    pub mu: Vec<f64>,
    /// Symmetrised quadrature covariance at `t_end`, row-major.
    pub sigma: Vec<f64>,
    pub max_leakage: f64,
    pub max_hermiticity_error: f64,
    /// Largest relative deviation of Σ and μ from the Lyapunov steady state,
    /// relative to the largest entry of each.
    pub rel_delta_sigma: f64,
    pub rel_delta_mu: f64,
}

/// Integrates the pointer-state Lindbladian for qubit sign `s` and extracts
/// first and second moments.
pub fn evolve_pointer(net: &ModeNetwork, cfg: &FockConfig, s: f64) -> Result<PointerReport> {
    check_dim(cfg)?;
    let gen = build_generator(net, &cfg.cutoffs, Block::Pointer(s))?;
    let n_th: Vec<f64> = net.modes.iter().map(|m| m.n_th).collect();
    let rho0 = thermal_state(&gen.basis, &n_th);
    let times = cfg.times();
    let states = evolve(&gen, rho0, &times, &cfg.tolerances)?;
    let mut max_leakage: f64 = 0.0;
    let mut max_herm: f64 = 0.0;
    for (r, _) in &states {
        max_leakage = max_leakage.max(top_population(&gen.basis, r));
        let h = r.iter().zip(r.t().iter()).map(|(a, b)| (a - b.conj()).norm()).fold(0.0, f64::max);
        max_herm = max_herm.max(h);
    }
    if max_leakage > cfg.leakage_limit {
        return Err(Error::LeakageExceeded { leakage: max_leakage, limit: cfg.leakage_limit });
    }
    let (rho, _) = states.last().ok_or_else(|| Error::InvalidParameter("no sample times".into()))?;

    let n = net.modes.len();
    let b = &gen.basis;
    let one = C64::new(1.0, 0.0);
    let quad = |k: usize, p: bool| {
        let mut sb = SparseBuilder::default();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        if p {
            sb.add_monomial(b, &[(k, Ladder::Create)], I * h);
            sb.add_monomial(b, &[(k, Ladder::Annihilate)], -I * h);
        } else {
            sb.add_monomial(b, &[(k, Ladder::Create)], one * h);
            sb.add_monomial(b, &[(k, Ladder::Annihilate)], one * h);
        }
        sb.build()
    };
    let rs: Vec<Sparse> = (0..2 * n).map(|i| quad(i / 2, i % 2 == 1)).collect();
    let mu: Vec<f64> = rs.iter().map(|r| r.expect(rho).re).collect();
    let mut sigma = vec![0.0; 4 * n * n];
    for j in 0..2 * n {
        let mut x = Array2::zeros(rho.dim());
        rs[j].left(rho, &mut x, one);
        for i in 0..2 * n {
            sigma[i * 2 * n + j] = rs[i].expect(&x).re - mu[i] * mu[j];
        }
    }
    for i in 0..2 * n {
        for j in 0..i {
            let v = 0.5 * (sigma[i * 2 * n + j] + sigma[j * 2 * n + i]);
            sigma[i * 2 * n + j] = v;
            sigma[j * 2 * n + i] = v;
        }
    }
    let occupancies = (0..n)
        .map(|k| {
            let mut sb = SparseBuilder::default();
            sb.add_monomial(b, &[(k, Ladder::Create), (k, Ladder::Annihilate)], one);
            sb.build().expect(rho).re
        })
        .collect();

    let model = assemble(net)?;
    let ps = gaussian_dynamics::pointer_state(&model, s)?;
    let smax = ps.sigma.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let rel_delta_sigma = ps.sigma.iter().zip(&sigma).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / smax;
    let mmax = ps.mu.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let dmu = ps.mu.iter().zip(&mu).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let rel_delta_mu = if mmax == 0.0 { dmu } else { dmu / mmax };
    Ok(PointerReport {
        s,
        cutoffs: cfg.cutoffs.clone(),
        occupancies,
        mu,
        sigma,
        max_leakage,
        max_hermiticity_error: max_herm,
        rel_delta_sigma,
        rel_delta_mu,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub base: OracleReport,
    pub refined: OracleReport,
    /// Relative change of the final Γ_d between the two cutoffs.
    pub rel_change: f64,
    pub pass: bool,
}

/// Runs the eg-block oracle at the configured cutoffs and again with four
/// extra levels per mode. PASS needs a relative change below 10⁻³ and a
/// Gaussian mismatch below 1% at both.
pub fn eg_block_with_convergence(net: &ModeNetwork, cfg: &FockConfig) -> Result<ConvergenceReport> {
    let base = evolve_eg_block(net, cfg)?;
    let refined = evolve_eg_block(net, &cfg.with_extra_levels(4))?;
    let rel_change = rel(base.gamma_d_final, refined.gamma_d_final);
    let pass = rel_change < 1e-3 && base.rel_delta_trajectory < 1e-2 && refined.rel_delta_trajectory < 1e-2;
    Ok(ConvergenceReport { base, refined, rel_change, pass })
}

/// A named oracle instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub network: ModeNetwork,
    pub config: FockConfig,
}

/// The reference instances: one thermal mode, one weakly driven mode, a
/// two-mode beam splitter with a thermal bath, and a weakly squeezed mode.
pub fn reference_scenarios() -> Vec<Scenario> {
    use crate::network_model::ModeSpec;
    use crate::units::mhz;
    let thermal = ModeNetwork::new(vec![ModeSpec::new("A", 0.0, mhz(0.1), 0.1, mhz(0.1))], vec![]).expect("valid");
    let driven = ModeNetwork::new(
        vec![ModeSpec::new("A", mhz(0.2), mhz(1.0), 0.0, mhz(0.5))],
        vec![Coupling::drive("A", mhz(0.4), 0.3)],
    )
    .expect("valid");
    let two_mode = ModeNetwork::new(
        vec![ModeSpec::new("B", 0.0, mhz(2.0), 0.0, 0.0), ModeSpec::new("C", 0.0, mhz(0.5), 0.05, mhz(0.3))],
        vec![Coupling::beam_splitter("B", "C", mhz(0.4), 0.0), Coupling::drive("B", mhz(0.3), 0.0)],
    )
    .expect("valid");
    let squeezed = ModeNetwork::new(
        vec![ModeSpec::new("A", 0.0, mhz(1.0), 0.0, mhz(0.5))],
        vec![Coupling::squeeze("A", mhz(0.3 * 0.5), 0.0)],
    )
    .expect("valid");
    vec![
        Scenario { name: "thermal", network: thermal, config: FockConfig::new(vec![40], 60.0) },
        Scenario { name: "weak_drive", network: driven, config: FockConfig::new(vec![30], 10.0) },
        Scenario { name: "two_mode_thermal_bath", network: two_mode, config: FockConfig::new(vec![8, 8], 20.0) },
        Scenario { name: "weak_squeeze", network: squeezed, config: FockConfig::new(vec![20], 10.0) },
    ]
}
