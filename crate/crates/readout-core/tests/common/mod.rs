//! Independent closed forms and helpers shared by the integration tests.
//! Nothing here calls into the library's analytic helpers.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use ndarray::{Array2, Axis};
use rand::rngs::StdRng;
use rand::Rng;
use readout_core::network_model::{assemble, validate, Coupling, Diagnostic, ModeNetwork, ModeSpec};
use readout_core::units::mhz;
use readout_core::C64;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Single thermal mode, Γ_par = (κ/2) Re[√((1 + 2iχ/κ)² + 8iχn̄/κ) − 1].
pub fn thermal_pdrate(kappa: f64, chi: f64, n_th: f64) -> f64 {
    let i = C64::new(0.0, 1.0);
    let z = (1.0 + 2.0 * i * chi / kappa).powi(2) + 8.0 * i * chi * n_th / kappa;
    0.5 * kappa * (z.sqrt() - 1.0).re
}

/// Single coherently driven mode, Γ_meas = 2ε²χ²κ / ([κ²/4 + (Δ−χ)²][κ²/4 + (Δ+χ)²]).
pub fn coherent_mdrate(kappa: f64, chi: f64, delta: f64, eps: f64) -> f64 {
    let k2 = 0.25 * kappa * kappa;
    2.0 * eps * eps * chi * chi * kappa / ((k2 + (delta - chi).powi(2)) * (k2 + (delta + chi).powi(2)))
}

/// N_CA = −2 sin φ / (√r + 1/√r), r = C_AB C_BC / C_AC.
pub fn nonreciprocity_ca(kappa: [f64; 3], g_ab: f64, g_bc: f64, g_ac: f64, phi: f64) -> f64 {
    let c = |g: f64, kj: f64, kk: f64| 4.0 * g * g / (kj * kk);
    let r = c(g_ab, kappa[0], kappa[1]) * c(g_bc, kappa[1], kappa[2]) / c(g_ac, kappa[0], kappa[2]);
    -2.0 * phi.sin() / (r.sqrt() + 1.0 / r.sqrt())
}

/// Coefficients c₀…c_n of det(sI − M) = Σ c_k s^k by Faddeev–LeVerrier.
pub fn char_poly(m: &Array2<C64>) -> Vec<C64> {
    let n = m.nrows();
    let eye = Array2::<C64>::eye(n);
    let mut c = vec![C64::new(0.0, 0.0); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut mk = Array2::<C64>::zeros((n, n));
    for k in 1..=n {
        mk = m.dot(&mk) + eye.mapv(|z| z * c[n + 1 - k]);
        let tr = m.dot(&mk).diag().sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

/// Roots of x³ + a x² + b x + c by Cardano, then two Newton steps each.
pub fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u3 = if (-q / 2.0 + disc).norm() >= (-q / 2.0 - disc).norm() { -q / 2.0 + disc } else { -q / 2.0 - disc };
    let u = u3.powf(1.0 / 3.0);
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let f = |x: C64| ((x + a) * x + b) * x + c;
    let df = |x: C64| (3.0 * x + 2.0 * a) * x + b;
    let mut out = [C64::new(0.0, 0.0); 3];
    for (k, r) in out.iter_mut().enumerate() {
        let uk = u * w.powi(k as i32);
        let t = if uk.norm() == 0.0 { C64::new(0.0, 0.0) } else { uk - p / (3.0 * uk) };
        let mut x = t - a / 3.0;
        for _ in 0..2 {
            let d = df(x);
            if d.norm() > 0.0 {
                x -= f(x) / d;
            }
        }
        *r = x;
    }
    out
}

/// Three-mode amplifier parameters in rad/µs (A squeezed, B driven, C coupled).
#[derive(Debug, Clone, Copy)]
pub struct Amp {
    pub kappa: [f64; 3],
    pub n_th: [f64; 3],
    pub chi_c: f64,
    pub g_ab: f64,
    pub g_bc: f64,
    pub g_ac: f64,
    /// ±1: loop phase φ = sign·π/2.
    pub phi_sign: f64,
    pub lambda: f64,
    pub theta: f64,
    pub eps: f64,
    pub drive_phase: f64,
}

impl Amp {
    /// Device values with g_AC matched to C_AC = C_AB C_BC.
    pub fn device(lambda_mhz: f64, phi_sign: f64) -> Self {
        let (ka, kb, kc) = (mhz(0.115), mhz(39.0), mhz(0.110));
        let (g_ab, g_bc) = (mhz(14.5), mhz(7.98));
        Amp {
            kappa: [ka, kb, kc],
            n_th: [0.0; 3],
            chi_c: mhz(2.754),
            g_ab,
            g_bc,
            g_ac: 2.0 * g_ab * g_bc / kb,
            phi_sign,
            lambda: mhz(lambda_mhz),
            theta: -FRAC_PI_2,
            eps: mhz(20.0),
            drive_phase: 0.0,
        }
    }

    pub fn coop(&self) -> (f64, f64, f64) {
        let [ka, kb, kc] = self.kappa;
        (
            4.0 * self.g_ab * self.g_ab / (ka * kb),
            4.0 * self.g_bc * self.g_bc / (kb * kc),
            2.0 * self.lambda / ka,
        )
    }

    pub fn network(&self) -> ModeNetwork {
        let [ka, kb, kc] = self.kappa;
        let [na, nb, nc] = self.n_th;
        ModeNetwork::new(
            vec![
                ModeSpec::new("A", 0.0, ka, na, 0.0),
                ModeSpec::new("B", 0.0, kb, nb, 0.0),
                ModeSpec::new("C", 0.0, kc, nc, self.chi_c),
            ],
            vec![
                Coupling::beam_splitter("A", "B", self.g_ab, 0.0),
                Coupling::beam_splitter("B", "C", self.g_bc, 0.0),
                Coupling::beam_splitter("A", "C", self.g_ac, self.phi_sign * FRAC_PI_2),
                Coupling::squeeze("A", self.lambda, self.theta),
                Coupling::drive("B", self.eps, self.drive_phase),
            ],
        )
        .unwrap()
    }

    /// Drift matrix of the ρ_eg block written out element by element.
    pub fn drift(&self) -> Array2<f64> {
        let [ka, kb, kc] = self.kappa;
        let (l, th, sp) = (self.lambda, self.theta, self.phi_sign);
        let mut a = Array2::zeros((6, 6));
        a[[0, 0]] = -ka / 2.0 + l * th.sin();
        a[[1, 1]] = -ka / 2.0 - l * th.sin();
        a[[0, 1]] = -l * th.cos();
        a[[1, 0]] = -l * th.cos();
        a[[2, 2]] = -kb / 2.0;
        a[[3, 3]] = -kb / 2.0;
        a[[4, 4]] = -kc / 2.0;
        a[[5, 5]] = -kc / 2.0;
        // g J blocks for AB and BC
        for (j, k, g) in [(0, 2, self.g_ab), (2, 4, self.g_bc)] {
            for (r, c) in [(j, k), (k, j)] {
                a[[r, c + 1]] = g;
                a[[r + 1, c]] = -g;
            }
        }
        // φ = ±π/2: g_AC (±I) from A to C, (∓I) from C to A
        a[[0, 4]] = sp * self.g_ac;
        a[[1, 5]] = sp * self.g_ac;
        a[[4, 0]] = -sp * self.g_ac;
        a[[5, 1]] = -sp * self.g_ac;
        a
    }

    /// Hamiltonian matrix [[Aᵀ, −B], [−C, −A]] of the covariance Riccati equation.
    pub fn hamiltonian(&self) -> Array2<C64> {
        let i = C64::new(0.0, 1.0);
        let a = self.drift().mapv(|x| C64::new(x, 0.0));
        let mut b = Array2::<C64>::zeros((6, 6));
        let mut c = Array2::<C64>::zeros((6, 6));
        for q in 0..6 {
            let m = q / 2;
            c[[q, q]] = C64::new(0.5 * self.kappa[m] * (2.0 * self.n_th[m] + 1.0), 0.0);
        }
        for q in 4..6 {
            b[[q, q]] = 2.0 * i * self.chi_c;
            c[[q, q]] += 0.5 * i * self.chi_c;
        }
        let mut h = Array2::<C64>::zeros((12, 12));
        h.slice_mut(ndarray::s![..6, ..6]).assign(&a.t());
        h.slice_mut(ndarray::s![..6, 6..]).assign(&(-&b));
        h.slice_mut(ndarray::s![6.., ..6]).assign(&(-&c));
        h.slice_mut(ndarray::s![6.., 6..]).assign(&(-&a));
        h
    }

    /// Roots r_k of the two cubics in s² from the decoupled quadrature sectors
    /// {q_A, p_B, q_C} and {p_A, q_B, p_C}; valid for θ = ±π/2.
    /// Returns (roots, constant coefficient v₀) per sector, plus the largest
    /// magnitude of an entry coupling the sectors.
    pub fn sector_roots(&self) -> ([([C64; 3], C64); 2], f64) {
        let h = self.hamiltonian();
        let sectors = [[0usize, 3, 4], [1, 2, 5]];
        let mut leak: f64 = 0.0;
        for r in 0..12 {
            for c in 0..12 {
                let same = sectors.iter().any(|s| s.contains(&(r % 6)) && s.contains(&(c % 6)));
                if !same {
                    leak = leak.max(h[[r, c]].norm());
                }
            }
        }
        let roots = sectors.map(|sec| {
            let idx: Vec<usize> = sec.iter().copied().chain(sec.iter().map(|k| k + 6)).collect();
            let sub = h.select(Axis(0), &idx).select(Axis(1), &idx);
            let cp = char_poly(&sub);
            // even polynomial: s⁶ + v₂ s⁴ + v₁ s² + v₀
            (cubic_roots(cp[4], cp[2], cp[0]), cp[0])
        });
        (roots, leak)
    }

    /// Γ_par = −(κ_A+κ_B+κ_C)/2 + ½ Σ_k Re[√r_k(+λ) + √r_k(−λ)].
    pub fn gamma_par(&self) -> f64 {
        let (roots, _) = self.sector_roots();
        let sum: f64 = roots.iter().flat_map(|(r, _)| r.iter()).map(|r| r.sqrt().re).sum();
        -0.5 * self.kappa.iter().sum::<f64>() + 0.5 * sum
    }

    fn u(&self, lam: f64) -> (f64, f64, f64) {
        let [ka, kb, kc] = self.kappa;
        let [na, nb, nc] = self.n_th;
        let (gab, gbc, gac, sp) = (self.g_ab, self.g_bc, self.g_ac, self.phi_sign);
        let ha = ka / 2.0 + lam;
        let u0 = (gab * gab * kc / 2.0 + gbc * gbc * ha + gac * gac * kb / 2.0 + ha * (kb / 2.0) * (kc / 2.0)).powi(2);
        let u1 = ka * (2.0 * na + 1.0) * (gab * gbc + sp * gac * kb / 2.0).powi(2)
            + kb * (2.0 * nb + 1.0) * (sp * gab * gac - gbc * ha).powi(2)
            + kc * (2.0 * nc + 1.0) * (gab * gab + ha * kb / 2.0).powi(2);
        let u2 = (gab * gab + ha * kb / 2.0).powi(2);
        (u0, u1, u2)
    }

    /// |v₀(λ)|² = (u₀ − χ²u₂)² + (χu₁)².
    pub fn v0_abs2(&self, lam: f64) -> f64 {
        let (u0, u1, u2) = self.u(lam);
        let x = self.chi_c;
        (u0 - x * x * u2).powi(2) + (x * u1).powi(2)
    }

    /// Measurement-induced dephasing for φ = ±π/2.
    pub fn gamma_meas(&self) -> f64 {
        let sp = self.phi_sign;
        let [ka, _, _] = self.kappa;
        let w = (self.theta - 2.0 * self.drive_phase).sin();
        let term = |lam: f64, weight: f64| {
            let (_, u1, _) = self.u(lam);
            u1 * (sp * self.g_ab * self.g_ac - self.g_bc * (ka / 2.0 + lam)).powi(2) / self.v0_abs2(lam) * weight
        };
        self.eps * self.eps * self.chi_c * self.chi_c * (term(self.lambda, 1.0 - w) + term(-self.lambda, 1.0 + w))
    }

    /// Measurement rate at θ = −π/2 + 2φ_d under C_AC = C_AB C_BC, φ = −π/2,
    /// n̄_B = n̄_C = 0.
    pub fn gamma_m(&self, n_add: f64) -> f64 {
        let (cab, cbc, cl) = self.coop();
        let x = 2.0 * self.chi_c / self.kappa[2];
        let pre = 8.0 * self.eps * self.eps / self.kappa[1] * x * x * cbc * cbc / ((1.0 + cbc).powi(2) + x * x).powi(2);
        pre * (cab + cl - 1.0).powi(2)
            / (4.0 * cab * (cl + 2.0 * self.n_th[0]) + (2.0 * n_add + 1.0) * (1.0 + cab - cl).powi(2))
    }
}

/// Measured device interferometer with loop phase `phi` on the AC term.
pub fn interferometer(phi: f64) -> ModeNetwork {
    ModeNetwork::new(
        vec![
            ModeSpec::new("A", 0.0, mhz(0.11492), 0.33, mhz(520e-6)),
            ModeSpec::new("B", 0.0, mhz(39.0), 0.0030, mhz(0.236)),
            ModeSpec::new("C", 0.0, mhz(0.10976), 0.0081, mhz(2.75411)),
        ],
        vec![
            Coupling::beam_splitter("A", "B", mhz(14.5), 0.0),
            Coupling::beam_splitter("B", "C", mhz(7.98), 0.0),
            Coupling::beam_splitter("A", "C", mhz(6.2), phi),
            Coupling::drive("B", mhz(3.7), 0.0),
        ],
    )
    .unwrap()
}

#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub max_modes: usize,
    pub squeeze: bool,
    pub drive: bool,
    pub thermal: bool,
}

impl Default for Draw {
    fn default() -> Self {
        Draw { max_modes: 3, squeeze: true, drive: true, thermal: true }
    }
}

/// Random network whose pointer dynamics are stable with margin for both
/// qubit states. Rates are O(1) rad/µs.
pub fn random_network(rng: &mut StdRng, draw: Draw) -> ModeNetwork {
    loop {
        let n = rng.random_range(1..=draw.max_modes);
        let labels: Vec<String> = (0..n).map(|k| format!("M{k}")).collect();
        let modes: Vec<ModeSpec> = labels
            .iter()
            .map(|l| {
                let n_th = if draw.thermal && rng.random_bool(0.6) { rng.random_range(0.0..0.5) } else { 0.0 };
                ModeSpec::new(
                    l.as_str(),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(0.2..3.0),
                    n_th,
                    rng.random_range(-1.5..1.5),
                )
            })
            .collect();
        let mut couplings = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                if rng.random_bool(0.75) {
                    couplings.push(Coupling::beam_splitter(
                        &labels[j],
                        &labels[k],
                        rng.random_range(0.0..2.0),
                        rng.random_range(-PI..PI),
                    ));
                }
            }
            if draw.squeeze && rng.random_bool(0.35) {
                let lam = rng.random_range(0.0..0.45) * modes[j].kappa;
                couplings.push(Coupling::squeeze(&labels[j], lam, rng.random_range(-PI..PI)));
            }
            if draw.drive && rng.random_bool(0.6) {
                couplings.push(Coupling::drive(&labels[j], rng.random_range(0.0..2.0), rng.random_range(-PI..PI)));
            }
        }
        let net = ModeNetwork::new(modes, couplings).unwrap();
        let model = assemble(&net).unwrap();
        let ok = validate(&model).iter().all(|d| !matches!(d, Diagnostic::Unstable { .. }))
            && [1.0, -1.0].iter().all(|&s| {
                let (a, _) = readout_core::network_model::pointer_dynamical_matrix(&model, s);
                readout_core::linalg::spectral_abscissa(&a).unwrap() < -0.02
            });
        if ok {
            return net;
        }
    }
}
