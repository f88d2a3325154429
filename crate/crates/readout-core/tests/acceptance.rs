//! Acceptance checks: one PASS/FAIL line per criterion with the measured
//! values and the wall time against its budget. Exits non-zero on any FAIL.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use common::{coherent_mdrate, nonreciprocity_ca, random_network, rel, thermal_pdrate, Amp, Draw};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use readout_core::fock_oracle::{eg_block_with_convergence, reference_scenarios};
use readout_core::gaussian_dynamics::{
    dephasing_rates, integrate, pointer_state, steady_state_covariance, GaussianEGState,
};
use readout_core::linalg::{complexify, fro_c, spectral_abscissa, symplectic_form};
use readout_core::network_model::{assemble, pointer_dynamical_matrix, Coupling, ModeNetwork, ModeSpec};
use readout_core::ode::Tolerances;
use readout_core::protocols::{
    ac_chevron, diagnostic_optimum, dispersive_from_pair, fit_release, ChevronParams, ReleaseTrace,
};
use readout_core::scattering_io::{measurement_rate, nonreciprocity, reflection_gain, scattering};
use readout_core::units::{mhz, to_mhz};
use readout_core::C64;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn worst(acc: &mut f64, v: f64) {
    if v.is_nan() || v > *acc {
        *acc = v;
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn single_mode(delta: f64, kappa: f64, n_th: f64, chi: f64, eps: f64) -> ModeNetwork {
    let drives = if eps > 0.0 { vec![Coupling::drive("C", eps, 0.0)] } else { vec![] };
    ModeNetwork::new(vec![ModeSpec::new("C", delta, kappa, n_th, chi)], drives).unwrap()
}

/// 1. Single-mode closed forms over a 10×10×5 grid, 10⁻⁹ relative.
fn single_mode_oracles() -> Outcome {
    let kappa = mhz(1.0);
    let (mut e_th, mut e_coh, mut e_zero) = (0f64, 0f64, 0f64);
    for x in geomspace(0.1, 10.0, 10) {
        for y in linspace(-5.0, 5.0, 10) {
            let (chi, delta) = (x * kappa, y * kappa);
            for n_th in linspace(0.0, 0.5, 5) {
                let r = dephasing_rates(&assemble(&single_mode(delta, kappa, n_th, chi, 0.0)).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let want = thermal_pdrate(kappa, chi, n_th);
                if n_th == 0.0 {
                    // the closed form vanishes; compare on the κ scale
                    worst(&mut e_zero, (r.gamma_par - want).abs() / kappa);
                } else {
                    worst(&mut e_th, rel(r.gamma_par, want));
                }
            }
            for eps in linspace(0.2, 2.0, 5) {
                let eps = eps * kappa;
                let r = dephasing_rates(&assemble(&single_mode(delta, kappa, 0.0, chi, eps)).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                worst(&mut e_coh, rel(r.gamma_meas, coherent_mdrate(kappa, chi, delta, eps)));
                worst(&mut e_zero, r.gamma_par.abs() / kappa);
            }
        }
    }
    check(
        e_th < 1e-9 && e_coh < 1e-9 && e_zero < 1e-9,
        format!("max rel err thermal Γ_par {e_th:.1e}, coherent Γ_meas {e_coh:.1e}; vanishing cases {e_zero:.1e}·κ (1000 points)"),
    )
}

/// 2. Fock-space equivalence on the reference scenarios: 1 %, leakage < 10⁻⁶.
fn fock_equivalence() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for sc in reference_scenarios() {
        let c = eg_block_with_convergence(&sc.network, &sc.config).map_err(|e| format!("{}: {e}", sc.name))?;
        let leak = c.base.max_leakage.max(c.refined.max_leakage);
        let delta = c.base.rel_delta_trajectory.max(c.refined.rel_delta_trajectory);
        ok &= delta < 1e-2 && leak < 1e-6 && c.pass;
        lines.push(format!("{} Δ {delta:.1e} leak {leak:.1e} cutoff Δ {:.1e}", sc.name, c.rel_change));
    }
    check(ok, lines.join("; "))
}

/// 3. N_CA = 1 at the device point and the closed form on random networks.
fn nonreciprocity_checks() -> Outcome {
    let amp = Amp { g_ac: mhz(5.934), ..Amp::device(0.0, -1.0) };
    let model = assemble(&amp.network()).map_err(|e| e.to_string())?;
    let mut dev: f64 = 0.0;
    for s in [1.0, -1.0] {
        let n = nonreciprocity(&model, "C", "A", s, 0.0).map_err(|e| e.to_string())?;
        worst(&mut dev, (n.quadrature - 1.0).abs());
    }
    let mut rng = StdRng::seed_from_u64(2024);
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let kappa = [0, 1, 2].map(|_| rng.random_range(0.1..5.0));
        let g = [0, 1, 2].map(|_| rng.random_range(0.1..3.0));
        let phi = rng.random_range(-PI..PI);
        let chi = rng.random_range(-2.0..2.0);
        let net = ModeNetwork::new(
            vec![
                ModeSpec::new("A", 0.0, kappa[0], 0.0, 0.0),
                ModeSpec::new("B", 0.0, kappa[1], 0.0, 0.0),
                ModeSpec::new("C", 0.0, kappa[2], 0.0, chi),
            ],
            vec![
                Coupling::beam_splitter("A", "B", g[0], 0.0),
                Coupling::beam_splitter("B", "C", g[1], 0.0),
                Coupling::beam_splitter("A", "C", g[2], phi),
            ],
        )
        .unwrap();
        let m = assemble(&net).map_err(|e| e.to_string())?;
        let want = nonreciprocity_ca(kappa, g[0], g[1], g[2], phi);
        for s in [1.0, -1.0] {
            // unstable draws have no scattering matrix; the bound holds regardless
            let (a, _) = pointer_dynamical_matrix(&m, s);
            if spectral_abscissa(&a).map_err(|e| e.to_string())? >= 0.0 {
                continue;
            }
            let n = nonreciprocity(&m, "C", "A", s, 0.0).map_err(|e| e.to_string())?;
            worst(&mut err, (n.quadrature - want).abs());
        }
    }
    check(
        dev < 1e-9 && err < 1e-9,
        format!("device |N_CA − 1| = {dev:.1e} (g_AC = 5.934 MHz); random max |ΔN| = {err:.1e} over 100 networks"),
    )
}

fn max_real_part(net: &ModeNetwork) -> f64 {
    let m = assemble(net).unwrap();
    [1.0, -1.0]
        .iter()
        .map(|&s| spectral_abscissa(&pointer_dynamical_matrix(&m, s).0).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// 4. λ_max, λ(20 dB), ⟨c†c⟩ range and the efficiency limit.
fn amplifier_anchors() -> Outcome {
    let base = Amp { g_ac: mhz(5.934), ..Amp::device(0.0, -1.0) };
    let at = |lam: f64| Amp { lambda: lam, ..base };
    let lmax = bisect(|l| max_real_part(&at(l).network()), 0.0, mhz(12.0));
    let gain_db = |l: f64| {
        let m = assemble(&at(l).network()).unwrap();
        reflection_gain(&m, "B", 1.0, None).map(|g| g.db).unwrap_or(f64::INFINITY)
    };
    let l20 = bisect(|l| gain_db(l) - 20.0, 0.0, lmax * (1.0 - 1e-9));
    let mut occ = (f64::MAX, f64::MIN);
    for l in linspace(0.0, lmax * 0.999, 40) {
        let m = assemble(&at(l).network()).map_err(|e| e.to_string())?;
        for s in [1.0, -1.0] {
            let n = pointer_state(&m, s).map_err(|e| e.to_string())?.occupancies[2];
            occ = (occ.0.min(n), occ.1.max(n));
        }
    }
    let (cab, cbc, _) = base.coop();
    let eta_lim = cbc / (1.0 + cbc) * cab / (1.0 + cab);
    let (lmax_mhz, l20_mhz) = (to_mhz(lmax), to_mhz(l20));
    check(
        rel(lmax_mhz, 10.84) < 5e-3
            && rel(l20_mhz, 9.83) < 5e-3
            && occ.0 >= 3.51 * 0.98
            && occ.1 <= 3.73 * 1.02
            && (0.975..=0.980).contains(&eta_lim),
        format!(
            "λ_max/2π = {lmax_mhz:.4} MHz, λ(20 dB)/2π = {l20_mhz:.4} MHz, ⟨c†c⟩ ∈ [{:.3}, {:.3}], η_limit = {eta_lim:.4}",
            occ.0, occ.1
        ),
    )
}

/// 5. Γ_meas independent of λ under the nonreciprocity conditions.
fn backaction_independence() -> Outcome {
    let base = Amp::device(0.0, -1.0);
    let (cab, _, _) = base.coop();
    let lmax = 0.5 * base.kappa[0] * (1.0 + cab);
    let g0 = dephasing_rates(&assemble(&base.network()).unwrap()).map_err(|e| e.to_string())?.gamma_meas;
    let mut dev: f64 = 0.0;
    for l in linspace(0.0, lmax * 0.999, 50) {
        let r = dephasing_rates(&assemble(&Amp { lambda: l, ..base }.network()).unwrap()).map_err(|e| e.to_string())?;
        worst(&mut dev, (r.gamma_meas / g0 - 1.0).abs());
    }
    check(dev < 1e-9, format!("max |Γ_meas(λ)/Γ_meas(0) − 1| = {dev:.1e} over 50 λ up to 0.999 λ_max"))
}

/// 6. Interferometer at n̄_add = 5.24.
fn interferometer_checks() -> Outcome {
    let n_add = 5.24;
    let par = |phi: f64| dephasing_rates(&assemble(&common::interferometer(phi)).unwrap()).map(|r| r.gamma_par);
    let (p_plus, p_minus) = (par(FRAC_PI_2).map_err(|e| e.to_string())?, par(-FRAC_PI_2).map_err(|e| e.to_string())?);
    let mut etas = Vec::new();
    let mut excess = f64::NEG_INFINITY;
    for k in 0..72 {
        let phi = -PI + 2.0 * PI * k as f64 / 72.0;
        let m = measurement_rate(&assemble(&common::interferometer(phi)).unwrap(), Some("B"), n_add, None)
            .map_err(|e| e.to_string())?;
        etas.push(m.eta);
        excess = excess.max(m.gamma_m - m.gamma_d);
    }
    let mean = etas.iter().sum::<f64>() / etas.len() as f64;
    check(
        p_plus > p_minus && (mean - 0.07).abs() <= 0.02 && excess <= 0.0,
        format!(
            "Γ_par(+π/2) = {:.4} kHz > Γ_par(−π/2) = {:.4} kHz; mean η = {mean:.4}; max(Γ_m − Γ_d) = {excess:.2e} /µs",
            p_plus * 1e3,
            p_minus * 1e3
        ),
    )
}

/// 7. Pipeline against the amplifier closed forms, 10⁻⁶ relative.
fn amplifier_closed_forms() -> Outcome {
    let (mut e_par, mut e_meas, mut e_m, mut e_vac) = (0f64, 0f64, 0f64, 0f64);
    for sp in [-1.0, 1.0] {
        let base = Amp::device(0.0, sp);
        let (cab, _, _) = base.coop();
        let lmax = 0.5 * base.kappa[0] * (1.0 + cab);
        for k in 0..20 {
            let amp = Amp { lambda: lmax * k as f64 / 20.0, ..base };
            let model = assemble(&amp.network()).unwrap();
            let r = dephasing_rates(&model).map_err(|e| e.to_string())?;
            // vacuum baths: Γ_par vanishes, so compare on the κ_A scale
            worst(&mut e_vac, (r.gamma_par - amp.gamma_par()).abs() / amp.kappa[0]);
            worst(&mut e_meas, rel(r.gamma_meas, amp.gamma_meas()));
            let hot = Amp { n_th: [0.05, 0.01, 0.02], ..amp };
            let r = dephasing_rates(&assemble(&hot.network()).unwrap()).map_err(|e| e.to_string())?;
            worst(&mut e_par, rel(r.gamma_par, hot.gamma_par()));
            worst(&mut e_meas, rel(r.gamma_meas, hot.gamma_meas()));
            if sp < 0.0 {
                for n_add in [0.0, 5.0] {
                    let m = measurement_rate(&model, Some("B"), n_add, None).map_err(|e| e.to_string())?;
                    worst(&mut e_m, rel(m.gamma_m, amp.gamma_m(n_add)));
                }
            }
        }
    }
    check(
        e_par < 1e-6 && e_meas < 1e-6 && e_m < 1e-6 && e_vac < 1e-9,
        format!(
            "max rel err Γ_par {e_par:.1e} (thermal), Γ_meas {e_meas:.1e} (φ = ±π/2), Γ_m {e_m:.1e} (φ = −π/2, n̄_add ∈ {{0, 5}}); vacuum Γ_par {e_vac:.1e}·κ_A"
        ),
    )
}

/// 8. Release fits, chevron linecut and the diagnostic optimum.
fn protocol_round_trips() -> Outcome {
    let t: Vec<f64> = linspace(0.0, 10.0, 201);
    let (kappa, d0, chi) = (mhz(0.10976), mhz(0.5), mhz(2.75411));
    let trace = |s: f64| ReleaseTrace::synthetic(kappa, d0 + s * chi, C64::from_polar(1.0, 0.4 * s), t.clone()).unwrap();
    let (e, g) = (trace(1.0), trace(-1.0));
    let fit = |tr: &ReleaseTrace| fit_release(tr).map_err(|e| e.to_string());
    let recover = |fe: &readout_core::protocols::ReleaseFit, fg: &readout_core::protocols::ReleaseFit| {
        let pair = dispersive_from_pair(fe, fg);
        [
            rel(fe.kappa, kappa),
            rel(fg.kappa, kappa),
            rel(fe.delta, d0 + chi),
            rel(fg.delta, d0 - chi),
            rel(pair.chi, chi),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    };
    let clean = recover(&fit(&e)?, &fit(&g)?);
    let mut rng = StdRng::seed_from_u64(8);
    let mut noisy: f64 = 0.0;
    for _ in 0..200 {
        let fe = fit(&e.with_noise(0.01, &mut rng))?;
        let fg = fit(&g.with_noise(0.01, &mut rng))?;
        worst(&mut noisy, recover(&fe, &fg));
    }

    let p = ChevronParams { kappa: mhz(0.110), g_ac: mhz(1.7), chi_c: mhz(2.754), s: 1.0 };
    let dets: Vec<f64> = linspace(2.754 - 6.0, 2.754 + 6.0, 61).into_iter().map(mhz).collect();
    let chev = ac_chevron(&p, &dets, &linspace(0.0, 2.0, 101)).map_err(|e| e.to_string())?;
    let g_err = rel(chev.fit.g, p.g_ac);

    let opt = diagnostic_optimum(mhz(39.0), mhz(0.10976), mhz(2.75411), 0.0).map_err(|e| e.to_string())?;
    let g_max = to_mhz(opt.g_max);
    check(
        clean < 1e-6 && noisy < 0.03 && g_err < 0.01 && rel(g_max, 7.25) < 0.01,
        format!(
            "release noiseless max rel err {clean:.1e}, 1% noise worst of 200 seeds {:.2}%; chevron g_AC err {:.2e}; g_max/2π = {g_max:.4} MHz",
            noisy * 100.0,
            g_err
        ),
    )
}

/// 9. Decomposition, ODE vs CARE, commutator preservation, basis independence.
fn property_suites() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut dec: f64 = 0.0;
    for _ in 0..1000 {
        let n = random_network(&mut rng, Draw::default());
        let r = dephasing_rates(&assemble(&n).unwrap()).map_err(|e| e.to_string())?;
        let floor = 1e-13 * n.modes.iter().map(|m| m.kappa).sum::<f64>();
        let scale = r.gamma_d.abs().max(r.gamma_par.abs() + r.gamma_meas.abs());
        let err = (r.gamma_par + r.gamma_meas - r.gamma_d).abs();
        worst(&mut dec, if err <= floor { 0.0 } else { err / scale });
    }

    let mut ode: f64 = 0.0;
    for _ in 0..20 {
        let n = random_network(&mut rng, Draw { max_modes: 2, ..Draw::default() });
        let model = assemble(&n).unwrap();
        let care = steady_state_covariance(&model).map_err(|e| e.to_string())?;
        let slow = care.stable_eigenvalues.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
        let traj = integrate(&model, &GaussianEGState::thermal(&model), &[0.0, 40.0 / slow], &Tolerances::strict())
            .map_err(|e| e.to_string())?;
        worst(&mut ode, fro_c(&(&traj.states[1].sigma - &care.sigma)) / fro_c(&care.sigma));
    }

    let mut sym: f64 = 0.0;
    let mut basis: f64 = 0.0;
    for _ in 0..200 {
        let n = random_network(&mut rng, Draw { squeeze: false, ..Draw::default() });
        let model = assemble(&n).unwrap();
        let om = complexify(&symplectic_form(n.modes.len()));
        let w = rng.random_range(-5.0..5.0);
        for s in [1.0, -1.0] {
            let sp = scattering(&model, s, w).map_err(|e| e.to_string())?.smat;
            let sm = scattering(&model, s, -w).map_err(|e| e.to_string())?.smat;
            worst(&mut sym, fro_c(&(sp.dot(&om).dot(&sm.t()) - &om)));
            if n.modes.len() > 1 {
                let nr = nonreciprocity(&model, &n.modes[0].label, &n.modes[1].label, s, w).map_err(|e| e.to_string())?;
                worst(&mut basis, (nr.quadrature - nr.ladder).abs());
            }
        }
    }
    check(
        dec < 1e-10 && ode < 1e-6 && sym < 1e-9 && basis < 1e-12,
        format!(
            "decomposition {dec:.1e} (1000 models), ODE vs CARE {ode:.1e} (20), ‖SΩS(−ω)ᵀ − Ω‖ {sym:.1e} (200), N basis {basis:.1e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("single-mode oracles", 10, single_mode_oracles),
        ("Fock-oracle equivalence", 300, fock_equivalence),
        ("nonreciprocity", 10, nonreciprocity_checks),
        ("amplifier anchors", 30, amplifier_anchors),
        ("squeezing-independent backaction", 10, backaction_independence),
        ("interferometer", 60, interferometer_checks),
        ("amplifier closed forms", 30, amplifier_closed_forms),
        ("protocol round trips", 120, protocol_round_trips),
        ("property suites", 300, property_suites),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = run();
        let dt = t0.elapsed();
        let in_time = dt <= Duration::from_secs(*budget);
        let (pass, detail) = match out {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {detail} [{:.2} s / {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            dt.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
