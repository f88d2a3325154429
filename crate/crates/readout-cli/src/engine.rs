//! Sweep engine. Points are evaluated on a bounded rayon pool and collected
//! by index, so tables do not depend on scheduling order.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use readout_core::gaussian_dynamics::{dephasing_rates, pointer_state};
use readout_core::network_model::{assemble, QuadratureModel};
use readout_core::ode::Tolerances;
use readout_core::protocols::{self, CatchRelease, ChevronParams};
use readout_core::scattering_io::{
    basis_change, measurement_rate, nonreciprocity, pointer_ellipse, reflection_gain, scattering, stability,
    AmplifierParams, Verdict,
};
use readout_core::units::{mhz, to_mhz};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::scenario::{CatchReleaseScenario, ChevronScenario, CoopMapScenario, Output, Scenario, SweepScenario};
use crate::table::{config_hash, Metadata, ResultTable, Row, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TolProfile {
    #[default]
    Strict,
    Fast,
}

impl TolProfile {
    pub fn tolerances(self) -> Tolerances {
        match self {
            TolProfile::Strict => Tolerances::strict(),
            TolProfile::Fast => Tolerances::fast(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TolProfile::Strict => "strict",
            TolProfile::Fast => "fast",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
    pub tol_profile: TolProfile,
    pub preset: Option<String>,
}

pub(crate) fn pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| CliError::Pool(e.to_string()))
}

pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> CliResult<ResultTable> {
    sc.validate()?;
    let pool = pool(opts.workers)?;
    let (columns, rows, extra) = pool.install(|| match sc {
        Scenario::Sweep(s) => run_sweep(s),
        Scenario::CooperativityMap(m) => run_coop_map(m),
        Scenario::AcChevron(c) => run_chevron(c),
        Scenario::CatchRelease(c) => run_catch_release(c),
    })?;
    let config = serde_json::to_value(sc).expect("scenarios serialise");
    Ok(ResultTable {
        columns,
        rows,
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: config_hash(&config),
            tol_profile: opts.tol_profile.name().into(),
            tolerances: opts.tol_profile.tolerances(),
            preset: opts.preset.clone(),
            source: sc.source().map(str::to_owned),
            config,
            extra,
        },
    })
}

type Tables = (Vec<String>, Vec<Row>, Value);

fn run_sweep(s: &SweepScenario) -> CliResult<Tables> {
    let columns = s.columns();
    let points: Vec<(Option<f64>, SweepScenario)> = match &s.sweep {
        None => vec![(None, s.clone())],
        Some(sw) => sw
            .grid
            .values()?
            .into_iter()
            .map(|v| Ok((Some(v), s.with_parameter(&sw.parameter, v)?)))
            .collect::<CliResult<_>>()?,
    };
    let width = columns.len();
    let rows = points
        .par_iter()
        .map(|(v, point)| {
            let mut values: Vec<Option<f64>> = v.map(Some).into_iter().collect();
            let mut error = None;
            match point.network.to_network().and_then(|n| assemble(&n)) {
                Ok(model) => {
                    for o in &point.outputs {
                        let n = o.columns(point.n_add).len();
                        match eval_output(&model, point, o) {
                            Ok(xs) => values.extend(xs.into_iter().map(Some)),
                            Err(e) => {
                                values.extend(std::iter::repeat_n(None, n));
                                error.get_or_insert_with(|| e.to_string());
                            }
                        }
                    }
                }
                Err(e) => error = Some(e.to_string()),
            }
            values.resize(width, None);
            match error {
                None => Row::ok(values),
                Some(e) => Row { values, status: Status::Error, error: Some(e) },
            }
        })
        .collect();
    Ok((columns, rows, Value::Null))
}

fn mode_index(model: &QuadratureModel, label: &str) -> readout_core::Result<usize> {
    model.index_of(label).ok_or_else(|| readout_core::Error::UnknownMode(label.into()))
}

fn eval_output(model: &QuadratureModel, sc: &SweepScenario, o: &Output) -> readout_core::Result<Vec<f64>> {
    let meas = |n_add: &Option<f64>| measurement_rate(model, sc.monitored.as_deref(), n_add.unwrap_or(sc.n_add), sc.theta_m);
    Ok(match o {
        Output::GammaPar => vec![dephasing_rates(model)?.gamma_par],
        Output::GammaMeas => vec![dephasing_rates(model)?.gamma_meas],
        Output::GammaD => vec![dephasing_rates(model)?.gamma_d],
        Output::BShift => vec![dephasing_rates(model)?.b_shift],
        Output::GammaM { n_add } => vec![meas(n_add)?.gamma_m],
        Output::Eta { n_add } => vec![meas(n_add)?.eta],
        Output::Inefficiency { n_add } => vec![1.0 - meas(n_add)?.eta],
        Output::ThetaM => vec![meas(&None)?.theta_m],
        Output::Nonreciprocity { k, j, s } => vec![nonreciprocity(model, k, j, *s, 0.0)?.ladder],
        Output::Gain { mode, s } => vec![reflection_gain(model, mode, *s, None)?.db],
        Output::SEntry { row, col, s } => {
            let (r, c) = (mode_index(model, row)?, mode_index(model, col)?);
            let sm = basis_change(&scattering(model, *s, 0.0)?.smat);
            vec![sm[[2 * r, 2 * c]].norm()]
        }
        Output::Occupancy { mode, s } => vec![pointer_state(model, *s)?.occupancies[mode_index(model, mode)?]],
        Output::Ellipse { mode, s, confidence } => {
            let e = pointer_ellipse(&pointer_state(model, *s)?, mode_index(model, mode)?, *confidence)?;
            vec![e.center[0], e.center[1], e.axes[0], e.axes[1], e.angle]
        }
        Output::Stability => vec![stability(model, None)?.max_real_part],
    })
}

pub const COOP_MAP_COLUMNS: [&str; 12] = [
    "C_AB[1]",
    "C_BC[1]",
    "C_AC[1]",
    "C_lambda[1]",
    "lambda[MHz]",
    "g_AB[MHz]",
    "g_BC[MHz]",
    "g_AC[MHz]",
    "Gamma_par[1/us]",
    "Gamma_meas[1/us]",
    "Gamma_d[1/us]",
    "G_BB[dB]",
];

fn run_coop_map(m: &CoopMapScenario) -> CliResult<Tables> {
    let (cab, cbc) = (m.c_ab.values()?, m.c_bc.values()?);
    let points: Vec<(f64, f64)> = cab.iter().flat_map(|&a| cbc.iter().map(move |&b| (a, b))).collect();
    let [ka, kb, kc] = m.kappa_mhz.map(mhz);
    let target = 10f64.powf(m.gain_db / 10.0);
    let rows = points
        .par_iter()
        .map(|&(c_ab, c_bc)| {
            let base = AmplifierParams {
                kappa_a: ka,
                kappa_b: kb,
                kappa_c: kc,
                n_a: m.n_th[0],
                n_b: m.n_th[1],
                n_c: m.n_th[2],
                chi_c: mhz(m.chi_c_mhz),
                g_ab: 0.5 * (c_ab * ka * kb).sqrt(),
                g_bc: 0.5 * (c_bc * kb * kc).sqrt(),
                g_ac: 0.0,
                phi: m.phi,
                lambda: 0.0,
                theta: m.theta,
                eps: mhz(m.eps_mhz),
                drive_phase: m.drive_phase,
            }
            .with_matched_ac();
            let mut values = vec![Some(c_ab), Some(c_bc), Some(base.coop_ac())];
            values.extend([None; 9]);
            let Some(lambda) = base.lambda_for_gain(target, m.bisect_rtol) else {
                return Row { values, status: Status::Unstable, error: None };
            };
            let p = AmplifierParams { lambda, ..base };
            values[3] = Some(p.coop_lambda());
            values[4] = Some(to_mhz(lambda));
            values[5] = Some(to_mhz(p.g_ab));
            values[6] = Some(to_mhz(p.g_bc));
            values[7] = Some(to_mhz(p.g_ac));
            let eval = || -> readout_core::Result<Option<[f64; 4]>> {
                let model = assemble(&p.network())?;
                if stability(&model, Some(&p))?.verdict != Verdict::Stable {
                    return Ok(None);
                }
                let r = dephasing_rates(&model)?;
                let g = reflection_gain(&model, "B", 1.0, None)?;
                Ok(Some([r.gamma_par, r.gamma_meas, r.gamma_d, g.db]))
            };
            match eval() {
                Ok(Some(x)) => {
                    for (k, v) in x.into_iter().enumerate() {
                        values[8 + k] = Some(v);
                    }
                    Row::ok(values)
                }
                Ok(None) => Row { values, status: Status::Unstable, error: None },
                Err(e) => Row { values, status: Status::Error, error: Some(e.to_string()) },
            }
        })
        .collect();
    Ok((COOP_MAP_COLUMNS.iter().map(|s| s.to_string()).collect(), rows, Value::Null))
}

fn run_chevron(c: &ChevronScenario) -> CliResult<Tables> {
    let p = ChevronParams { kappa: mhz(c.kappa_mhz), g_ac: mhz(c.g_ac_mhz), chi_c: mhz(c.chi_c_mhz), s: c.s };
    let dets = c.detuning_mhz.values()?;
    let times = c.t_ev_us.values()?;
    let rows: Vec<Row> = times
        .par_iter()
        .flat_map_iter(|&t| {
            dets.iter().map(move |&d| Row::ok(vec![Some(t), Some(d), Some(protocols::chevron_magnitude(&p, mhz(d), t))]))
        })
        .collect();
    let extra = match protocols::fit_linecut(&times, &times.iter().map(|&t| protocols::chevron_magnitude(&p, p.s * p.chi_c, t)).collect::<Vec<_>>()) {
        Ok(f) => json!({
            "linecut_detuning_MHz": c.s * c.chi_c_mhz,
            "fitted_g_AC_MHz": to_mhz(f.g),
            "fitted_kappa_MHz": to_mhz(f.kappa),
            "fit_rms": f.rms,
        }),
        Err(e) => json!({ "fit_error": e.to_string() }),
    };
    Ok((vec!["t_ev[us]".into(), "Delta_AC[MHz]".into(), "|z|[1]".into()], rows, extra))
}

fn run_catch_release(c: &CatchReleaseScenario) -> CliResult<Tables> {
    let t_ev = c.t_ev_us.values()?;
    let mut rng = StdRng::seed_from_u64(c.seed);
    let mut traces = vec![];
    let mut fits = vec![];
    let mut extra = serde_json::Map::new();
    for s in [1.0, -1.0] {
        let p = CatchRelease {
            kappa_b: mhz(c.kappa_b_mhz),
            kappa_k: mhz(c.kappa_k_mhz),
            delta_b: mhz(c.delta_b_mhz),
            delta_k: mhz(c.delta_k_mhz + s * c.chi_k_mhz),
            g: mhz(c.g_mhz),
            eps: mhz(c.eps_mhz),
            t0: c.t0_us,
            ramp: c.ramp_us,
            t_ev: t_ev.clone(),
        };
        let (analytic, numeric) = protocols::catch_release(&p)?;
        let trace = if c.noise > 0.0 { numeric.with_noise(c.noise, &mut rng) } else { numeric };
        let key = if s > 0.0 { "s=+1" } else { "s=-1" };
        let fit = protocols::fit_release(&trace);
        match &fit {
            Ok(f) => {
                extra.insert(
                    key.into(),
                    json!({
                        "kappa_MHz": to_mhz(f.kappa), "kappa_ci_MHz": to_mhz(f.kappa_ci),
                        "delta_MHz": to_mhz(f.delta), "delta_ci_MHz": to_mhz(f.delta_ci),
                        "analytic_kappa_MHz": protocols::fit_release(&analytic).map(|a| to_mhz(a.kappa)).ok(),
                    }),
                );
            }
            Err(e) => {
                extra.insert(key.into(), json!({ "fit_error": e.to_string() }));
            }
        }
        fits.push(fit.ok());
        traces.push(trace);
    }
    if let [Some(e), Some(g)] = &fits[..] {
        let d = protocols::dispersive_from_pair(e, g);
        extra.insert("chi_MHz".into(), json!(to_mhz(d.chi)));
        extra.insert("chi_ci_MHz".into(), json!(to_mhz(d.chi_ci)));
    }
    let rows = (0..t_ev.len())
        .map(|i| {
            let z = [traces[0].z[i], traces[1].z[i]];
            Row::ok(vec![Some(t_ev[i]), Some(z[0].re), Some(z[0].im), Some(z[1].re), Some(z[1].im)])
        })
        .collect();
    let columns = ["t_ev[us]", "Re_z(s=+1)[1]", "Im_z(s=+1)[1]", "Re_z(s=-1)[1]", "Im_z(s=-1)[1]"];
    Ok((columns.iter().map(|s| s.to_string()).collect(), rows, Value::Object(extra)))
}
