use ndarray::Array1;
use rand::rngs::StdRng;
use rand::SeedableRng;
use readout_core::network_model::{Coupling, ModeNetwork, ModeSpec};
use readout_core::protocols::*;
use readout_core::units::mhz;
use readout_core::{Error, C64};

fn two_mode(g: f64, eps: f64) -> ModeNetwork {
    ModeNetwork::new(
        vec![ModeSpec::new("B", 0.3, 5.0, 0.0, 0.0), ModeSpec::new("K", -0.7, 0.4, 0.0, 0.0)],
        vec![Coupling::beam_splitter("B", "K", g, 0.4), Coupling::drive("B", eps, 0.2)],
    )
    .unwrap()
}

#[test]
fn propagation_is_a_semigroup() {
    let (t1, t2) = (0.8, 1.7);
    let a = two_mode(1.3, 0.9);
    let b = two_mode(0.6, 0.0);
    let whole = PulseSchedule::new(vec![Segment::square(t1, a.clone()), Segment::square(t2, b.clone())]).unwrap();
    let end = simulate_mean_fields(&whole, 1.0, &Array1::zeros(2), &[t1 + t2]).unwrap().fields[0].clone();

    let first = PulseSchedule::new(vec![Segment::square(t1, a)]).unwrap();
    let mid = simulate_mean_fields(&first, 1.0, &Array1::zeros(2), &[t1]).unwrap().fields[0].clone();
    let second = PulseSchedule::new(vec![Segment::square(t2, b)]).unwrap();
    let end2 = simulate_mean_fields(&second, 1.0, &mid, &[t2]).unwrap().fields[0].clone();
    for k in 0..2 {
        assert!((end[k] - end2[k]).norm() < 1e-12 * end[k].norm().max(1.0), "{end} vs {end2}");
    }
}

#[test]
fn ramp_slices_cover_the_segment() {
    let seg = Segment::ramped(1.0, two_mode(1.0, 1.0), 0.1);
    let sched = PulseSchedule::new(vec![seg]).unwrap();
    let total: f64 = sched.slices().iter().map(|(d, _)| d).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(sched.slices().len(), 2 * RAMP_SLICES + 1);
}

#[test]
fn release_fit_is_scale_invariant() {
    let t: Vec<f64> = (0..120).map(|k| k as f64 * 0.05).collect();
    let tr = ReleaseTrace::synthetic(0.7, 3.1, C64::new(1e-5, 2e-5), t).unwrap();
    let a = fit_release(&tr).unwrap();
    let b = fit_release(&tr.scaled(C64::from_polar(3e4, 1.1))).unwrap();
    assert!((a.kappa - b.kappa).abs() < 1e-10 && (a.delta - b.delta).abs() < 1e-10);
    assert!((a.kappa - 0.7).abs() < 1e-9 && (a.delta - 3.1).abs() < 1e-9);
}

#[test]
fn release_fit_rejects_short_or_aliased_traces() {
    let short = ReleaseTrace::synthetic(0.5, 1.0, C64::new(1.0, 0.0), (0..6).map(|k| k as f64).collect()).unwrap();
    assert!(matches!(fit_release(&short), Err(Error::InsufficientSpan(_))));
    let brief = ReleaseTrace::synthetic(0.5, 1.0, C64::new(1.0, 0.0), (0..20).map(|k| k as f64 * 0.01).collect()).unwrap();
    assert!(matches!(fit_release(&brief), Err(Error::InsufficientSpan(_))));
    // 3 rad per sample aliases
    let fast = ReleaseTrace::synthetic(0.5, 30.0, C64::new(1.0, 0.0), (0..200).map(|k| k as f64 * 0.1).collect()).unwrap();
    assert!(matches!(fit_release(&fast), Err(Error::PhaseUnwrapAmbiguity { .. })));
}

#[test]
fn noisy_release_intervals_cover_truth() {
    let t: Vec<f64> = (0..201).map(|k| k as f64 * 0.05).collect();
    let (kappa, delta) = (mhz(0.11), mhz(3.25));
    let clean = ReleaseTrace::synthetic(kappa, delta, C64::new(0.0, 1.0), t).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let mut covered = 0;
    for _ in 0..200 {
        let f = fit_release(&clean.with_noise(0.01, &mut rng)).unwrap();
        if (f.kappa - kappa).abs() <= f.kappa_ci && (f.delta - delta).abs() <= f.delta_ci {
            covered += 1;
        }
    }
    // joint coverage of two 95% intervals
    assert!(covered >= 170, "{covered}");
}

#[test]
fn dispersive_shift_from_release_pair() {
    let t: Vec<f64> = (0..201).map(|k| k as f64 * 0.05).collect();
    let (d0, chi, kappa) = (mhz(0.5), mhz(2.754), mhz(0.11));
    let e = fit_release(&ReleaseTrace::synthetic(kappa, d0 + chi, C64::new(1.0, 0.0), t.clone()).unwrap()).unwrap();
    let g = fit_release(&ReleaseTrace::synthetic(kappa, d0 - chi, C64::new(1.0, 0.0), t).unwrap()).unwrap();
    let pair = dispersive_from_pair(&e, &g);
    assert!((pair.chi - chi).abs() < 1e-9 * chi);
    assert!((pair.delta_mean - d0).abs() < 1e-9 * chi);
}

#[test]
fn catch_release_traces_agree() {
    let p = CatchRelease {
        kappa_b: mhz(39.0),
        kappa_k: mhz(0.10976),
        delta_b: 0.0,
        delta_k: mhz(3.25),
        g: mhz(1.0),
        eps: mhz(0.0046),
        t0: 0.06,
        ramp: None,
        t_ev: (0..101).map(|k| k as f64 * 0.1).collect(),
    };
    let (an, num) = catch_release(&p).unwrap();
    let fa = fit_release(&an).unwrap();
    let fnum = fit_release(&num).unwrap();
    assert!((fa.kappa - p.kappa_k).abs() < 1e-9 * p.kappa_k);
    assert!((fnum.kappa - p.kappa_k).abs() < 1e-6 * p.kappa_k, "{}", fnum.kappa);
    assert!((fnum.delta - p.delta_k).abs() < 1e-6 * p.delta_k);
    // a short catch loses roughly the B fill time 2/κ_B; a long one reaches
    // the eliminated steady state
    let ratio = num.z[0] / an.z[0];
    assert!((ratio.norm() - (1.0 - 2.0 / (p.kappa_b * p.t0))).abs() < 0.02, "{ratio}");
    let (an, num) = catch_release(&CatchRelease { t0: 6.0, ..p }).unwrap();
    let ratio = num.z[0] / an.z[0];
    assert!((ratio - 1.0).norm() < 0.01, "{ratio}");
}

#[test]
fn adiabatic_pole_converges_as_kappa_b_grows() {
    let (kk, db, dk, g) = (0.3, 0.4, 1.1, 1.5);
    let mut errs = Vec::new();
    for k in 0..8 {
        let kb = 20.0 * 2f64.powi(k);
        let exact = two_mode_slow_pole(kb, kk, db, dk, g);
        let eff = adiabatic_elimination(kb, kk, db, dk, g, 1.0);
        errs.push((exact - C64::new(-0.5 * eff.kappa_eff, eff.delta_eff)).norm());
    }
    for w in errs.windows(2) {
        assert!(w[1] < w[0] * 0.6, "{errs:?}");
    }
}

#[test]
fn chevron_linecut_recovers_coupling() {
    let p = ChevronParams { kappa: mhz(0.11), g_ac: mhz(1.7), chi_c: mhz(2.754), s: 1.0 };
    let dets: Vec<f64> = (0..31).map(|k| p.chi_c + mhz(-3.0 + 0.2 * k as f64)).collect();
    let times: Vec<f64> = (0..101).map(|k| k as f64 * 0.02).collect();
    let c = ac_chevron(&p, &dets, &times).unwrap();
    assert!((c.fit.g - p.g_ac).abs() < 1e-3 * p.g_ac, "{:?}", c.fit);
    // on resonance the magnitude is exp(−κt/2)|cos(g t)|
    let t = 0.37;
    assert!((chevron_magnitude(&p, p.chi_c, t) - (-0.5 * p.kappa * t).exp() * (p.g_ac * t).cos().abs()).abs() < 1e-12);
}

#[test]
fn diagnostic_optimum_is_grid_argmax() {
    let (kb, kc, chi) = (mhz(39.0), mhz(0.10976), mhz(2.75411));
    let opt = diagnostic_optimum(kb, kc, chi, 0.0).unwrap();
    let grid: Vec<f64> = (1..4000).map(|k| mhz(0.005) * k as f64).collect();
    let best = grid
        .iter()
        .copied()
        .max_by(|a, b| effective_mdrate(kb, kc, chi, *a, 1.0).total_cmp(&effective_mdrate(kb, kc, chi, *b, 1.0)))
        .unwrap();
    assert!((best - opt.g_max).abs() <= mhz(0.005), "{best} vs {}", opt.g_max);
    assert!(matches!(diagnostic_optimum(kb, 3.0, 1.0, 0.0), Err(Error::DomainError(_))));
    assert_eq!(diagnostic_optimum(kb, 2.0, 1.0, 0.0).unwrap().g_max, 0.0);
}
