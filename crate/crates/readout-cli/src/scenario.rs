//! Scenario files. A scenario is a TOML (or JSON) document tagged by
//! `scenario = "sweep" | "cooperativity_map" | "ac_chevron" | "catch_release"`.
//! Frequencies are linear in MHz, times in µs, phases in radians.

use std::path::Path;

use readout_core::network_model::NetworkConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum Scenario {
    Sweep(SweepScenario),
    CooperativityMap(CoopMapScenario),
    AcChevron(ChevronScenario),
    CatchRelease(CatchReleaseScenario),
}

impl Scenario {
    pub fn source(&self) -> Option<&str> {
        match self {
            Scenario::Sweep(s) => s.source.as_deref(),
            Scenario::CooperativityMap(s) => s.source.as_deref(),
            Scenario::AcChevron(s) => s.source.as_deref(),
            Scenario::CatchRelease(s) => s.source.as_deref(),
        }
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        let sc: Scenario = toml::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let sc: Scenario = serde_json::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        match self {
            Scenario::Sweep(s) => s.validate(),
            Scenario::CooperativityMap(m) => {
                nonempty(&m.c_ab, "c_ab")?;
                nonempty(&m.c_bc, "c_bc")
            }
            Scenario::AcChevron(c) => {
                nonempty(&c.detuning_mhz, "detuning_MHz")?;
                nonempty(&c.t_ev_us, "t_ev_us")
            }
            Scenario::CatchRelease(c) => nonempty(&c.t_ev_us, "t_ev_us"),
        }
    }
}

fn nonempty(g: &Grid, name: &str) -> CliResult<()> {
    let v = g.values()?;
    if v.is_empty() {
        return Err(CliError::ConfigParse(format!("grid `{name}` is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::ConfigParse(format!("grid `{name}` has non-finite values")));
    }
    Ok(())
}

/// Either an explicit list or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        /// Geometric instead of linear spacing.
        #[serde(default)]
        log: bool,
    },
}

impl Grid {
    pub fn linspace(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range { start, stop, count, log: false }
    }

    pub fn geomspace(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range { start, stop, count, log: true }
    }

    pub fn values(&self) -> CliResult<Vec<f64>> {
        match self {
            Grid::Values(v) => Ok(v.clone()),
            Grid::Range { start, stop, count, log } => {
                if *log && !(*start > 0.0 && *stop > 0.0) {
                    return Err(CliError::ConfigParse("geometric grid needs positive bounds".into()));
                }
                let n = *count;
                Ok((0..n)
                    .map(|i| {
                        let x = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                        if *log {
                            (start.ln() + x * (stop.ln() - start.ln())).exp()
                        } else {
                            start + x * (stop - start)
                        }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// e.g. `modes.C.kappa_MHz`, `couplings.2.phi`, `n_add`, `theta_m`.
    pub parameter: String,
    pub grid: Grid,
}

/// Requested output quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Output {
    GammaPar,
    GammaMeas,
    GammaD,
    BShift,
    GammaM {
        #[serde(default)]
        n_add: Option<f64>,
    },
    Eta {
        #[serde(default)]
        n_add: Option<f64>,
    },
    Inefficiency {
        #[serde(default)]
        n_add: Option<f64>,
    },
    ThetaM,
    Nonreciprocity {
        k: String,
        j: String,
        #[serde(default = "plus")]
        s: f64,
    },
    Gain {
        mode: String,
        #[serde(default = "plus")]
        s: f64,
    },
    SEntry {
        row: String,
        col: String,
        #[serde(default = "plus")]
        s: f64,
    },
    Occupancy {
        mode: String,
        s: f64,
    },
    Ellipse {
        mode: String,
        s: f64,
        #[serde(default = "ninety_nine")]
        confidence: f64,
    },
    Stability,
}

fn plus() -> f64 {
    1.0
}

fn ninety_nine() -> f64 {
    0.99
}

fn sign(s: f64) -> &'static str {
    if s >= 0.0 {
        "+1"
    } else {
        "-1"
    }
}

impl Output {
    /// Column headers with units embedded.
    pub fn columns(&self, default_n_add: f64) -> Vec<String> {
        let na = |n: &Option<f64>| n.unwrap_or(default_n_add);
        match self {
            Output::GammaPar => vec!["Gamma_par[1/us]".into()],
            Output::GammaMeas => vec!["Gamma_meas[1/us]".into()],
            Output::GammaD => vec!["Gamma_d[1/us]".into()],
            Output::BShift => vec!["B_shift[1/us]".into()],
            Output::GammaM { n_add } => vec![format!("Gamma_m(n_add={})[1/us]", na(n_add))],
            Output::Eta { n_add } => vec![format!("eta(n_add={})[1]", na(n_add))],
            Output::Inefficiency { n_add } => vec![format!("1-eta(n_add={})[1]", na(n_add))],
            Output::ThetaM => vec!["theta_m[rad]".into()],
            Output::Nonreciprocity { k, j, s } => vec![format!("N_{k}{j}(s={})[1]", sign(*s))],
            Output::Gain { mode, s } => vec![format!("G_{mode}{mode}(s={})[dB]", sign(*s))],
            Output::SEntry { row, col, s } => vec![format!("|S_{row}{col}|(s={})[1]", sign(*s))],
            Output::Occupancy { mode, s } => vec![format!("n_{mode}(s={})[quanta]", sign(*s))],
            Output::Ellipse { mode, s, .. } => ["q0", "p0", "major", "minor"]
                .iter()
                .map(|f| format!("{f}_{mode}(s={})[1]", sign(*s)))
                .chain([format!("angle_{mode}(s={})[rad]", sign(*s))])
                .collect(),
            Output::Stability => vec!["max_re[1/us]".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub network: NetworkConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monitored: Option<String>,
    #[serde(default)]
    pub n_add: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    pub outputs: Vec<Output>,
}

fn unit_of(path: &str) -> &'static str {
    let last = path.rsplit('.').next().unwrap_or(path);
    if last.ends_with("_MHz") {
        "MHz"
    } else if matches!(last, "phi" | "theta" | "theta_m") {
        "rad"
    } else if matches!(last, "n_th" | "n_add") {
        "quanta"
    } else {
        "1"
    }
}

impl SweepScenario {
    pub fn validate(&self) -> CliResult<()> {
        self.network.to_network().map_err(|e| CliError::ConfigParse(e.to_string()))?;
        if self.outputs.is_empty() {
            return Err(CliError::ConfigParse("no outputs requested".into()));
        }
        if let Some(sw) = &self.sweep {
            nonempty(&sw.grid, "sweep.grid")?;
            self.with_parameter(&sw.parameter, sw.grid.values()?[0])?;
        }
        Ok(())
    }

    pub fn sweep_column(&self) -> Option<String> {
        self.sweep.as_ref().map(|s| format!("{}[{}]", s.parameter, unit_of(&s.parameter)))
    }

    pub fn columns(&self) -> Vec<String> {
        self.sweep_column()
            .into_iter()
            .chain(self.outputs.iter().flat_map(|o| o.columns(self.n_add)))
            .collect()
    }

    /// Copy with the parameter at `path` set to `value`.
    pub fn with_parameter(&self, path: &str, value: f64) -> CliResult<Self> {
        let bad = |why: &str| CliError::ConfigParse(format!("parameter path `{path}`: {why}"));
        let mut out = self.clone();
        match path {
            "n_add" => {
                out.n_add = value;
                return Ok(out);
            }
            "theta_m" => {
                out.theta_m = Some(value);
                return Ok(out);
            }
            _ => {}
        }
        let parts: Vec<&str> = path.split('.').collect();
        let [section, key, field] = parts[..] else {
            return Err(bad("expected `modes.<label>.<field>` or `couplings.<index>.<field>`"));
        };
        let mut net = serde_json::to_value(&self.network).expect("network serialises");
        let entry = match section {
            "modes" => net["modes"]
                .as_array_mut()
                .and_then(|ms| ms.iter_mut().find(|m| m["label"] == Value::from(key)))
                .ok_or_else(|| bad("no such mode"))?,
            "couplings" => {
                let i: usize = key.parse().map_err(|_| bad("coupling index is not an integer"))?;
                net["couplings"].as_array_mut().and_then(|cs| cs.get_mut(i)).ok_or_else(|| bad("no such coupling"))?
            }
            _ => return Err(bad("unknown section")),
        };
        if field == "label" || field == "kind" || field == "mode" || field == "j" || field == "k" {
            return Err(bad("not a numeric field"));
        }
        entry[field] = Value::from(value);
        out.network = serde_json::from_value(net).map_err(|e| bad(&e.to_string()))?;
        out.network.to_network().map_err(|e| bad(&e.to_string()))?;
        Ok(out)
    }
}

/// Fixed-gain cooperativity map of the embedded amplifier: per (C_AB, C_BC)
/// point, C_AC = C_AB C_BC and C_λ is solved for the target gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoopMapScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(rename = "kappa_MHz")]
    pub kappa_mhz: [f64; 3],
    #[serde(default)]
    pub n_th: [f64; 3],
    #[serde(rename = "chi_C_MHz")]
    pub chi_c_mhz: f64,
    #[serde(rename = "eps_MHz")]
    pub eps_mhz: f64,
    pub theta: f64,
    #[serde(default)]
    pub drive_phase: f64,
    pub phi: f64,
    pub gain_db: f64,
    #[serde(default = "default_rtol")]
    pub bisect_rtol: f64,
    pub c_ab: Grid,
    pub c_bc: Grid,
}

fn default_rtol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChevronScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(rename = "kappa_MHz")]
    pub kappa_mhz: f64,
    #[serde(rename = "g_AC_MHz")]
    pub g_ac_mhz: f64,
    #[serde(rename = "chi_C_MHz")]
    pub chi_c_mhz: f64,
    pub s: f64,
    /// Δ_AC grid.
    #[serde(rename = "detuning_MHz")]
    pub detuning_mhz: Grid,
    pub t_ev_us: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatchReleaseScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(rename = "kappa_B_MHz")]
    pub kappa_b_mhz: f64,
    #[serde(rename = "kappa_K_MHz")]
    pub kappa_k_mhz: f64,
    #[serde(rename = "delta_B_MHz", default)]
    pub delta_b_mhz: f64,
    /// Detuning of K without the qubit shift.
    #[serde(rename = "delta_K_MHz", default)]
    pub delta_k_mhz: f64,
    #[serde(rename = "chi_K_MHz", default)]
    pub chi_k_mhz: f64,
    #[serde(rename = "g_MHz")]
    pub g_mhz: f64,
    #[serde(rename = "eps_MHz")]
    pub eps_mhz: f64,
    pub t0_us: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp_us: Option<f64>,
    pub t_ev_us: Grid,
    /// Multiplicative complex noise rms; zero for clean traces.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}
