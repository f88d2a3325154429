//! Serialized network description. Frequencies are linear (f/2π) in MHz,
//! phases in radians. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use super::{Coupling, ModeNetwork, ModeSpec};
use crate::units::{mhz, to_mhz};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub label: String,
    #[serde(rename = "f_detuning_MHz", default)]
    pub f_detuning_mhz: f64,
    #[serde(rename = "kappa_MHz")]
    pub kappa_mhz: f64,
    #[serde(default)]
    pub n_th: f64,
    #[serde(rename = "chi_MHz", default)]
    pub chi_mhz: f64,
    #[serde(rename = "longitudinal_MHz", default, skip_serializing_if = "is_zero")]
    pub longitudinal_mhz: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingConfig {
    BeamSplitter {
        j: String,
        k: String,
        #[serde(rename = "g_MHz")]
        g_mhz: f64,
        #[serde(default)]
        phi: f64,
    },
    Squeeze {
        mode: String,
        #[serde(rename = "lambda_MHz")]
        lambda_mhz: f64,
        #[serde(default)]
        theta: f64,
    },
    Drive {
        mode: String,
        #[serde(rename = "eps_MHz")]
        eps_mhz: f64,
        #[serde(default)]
        phi: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub modes: Vec<ModeConfig>,
    #[serde(default)]
    pub couplings: Vec<CouplingConfig>,
    #[serde(rename = "qubit_energy_shift_MHz", default, skip_serializing_if = "Option::is_none")]
    pub qubit_energy_shift_mhz: Option<f64>,
}

impl NetworkConfig {
    pub fn to_network(&self) -> Result<ModeNetwork> {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                ModeSpec::new(m.label.clone(), mhz(m.f_detuning_mhz), mhz(m.kappa_mhz), m.n_th, mhz(m.chi_mhz))
                    .with_longitudinal(mhz(m.longitudinal_mhz))
            })
            .collect();
        let couplings = self
            .couplings
            .iter()
            .map(|c| match c {
                CouplingConfig::BeamSplitter { j, k, g_mhz, phi } => Coupling::beam_splitter(j, k, mhz(*g_mhz), *phi),
                CouplingConfig::Squeeze { mode, lambda_mhz, theta } => Coupling::squeeze(mode, mhz(*lambda_mhz), *theta),
                CouplingConfig::Drive { mode, eps_mhz, phi } => Coupling::drive(mode, mhz(*eps_mhz), *phi),
            })
            .collect();
        let mut net = ModeNetwork::new(modes, couplings)?;
        net.qubit_energy_shift = self.qubit_energy_shift_mhz.map(mhz);
        Ok(net)
    }

    pub fn from_network(net: &ModeNetwork) -> Self {
        NetworkConfig {
            modes: net
                .modes
                .iter()
                .map(|m| ModeConfig {
                    label: m.label.clone(),
                    f_detuning_mhz: to_mhz(m.detuning),
                    kappa_mhz: to_mhz(m.kappa),
                    n_th: m.n_th,
                    chi_mhz: to_mhz(m.chi),
                    longitudinal_mhz: to_mhz(m.longitudinal),
                })
                .collect(),
            couplings: net
                .couplings
                .iter()
                .map(|c| match c {
                    Coupling::BeamSplitter { j, k, g, phi } => {
                        CouplingConfig::BeamSplitter { j: j.clone(), k: k.clone(), g_mhz: to_mhz(*g), phi: *phi }
                    }
                    Coupling::Squeeze { mode, lambda, theta } => {
                        CouplingConfig::Squeeze { mode: mode.clone(), lambda_mhz: to_mhz(*lambda), theta: *theta }
                    }
                    Coupling::Drive { mode, eps, phi } => {
                        CouplingConfig::Drive { mode: mode.clone(), eps_mhz: to_mhz(*eps), phi: *phi }
                    }
                })
                .collect(),
            qubit_energy_shift_mhz: net.qubit_energy_shift.map(to_mhz),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
[[modes]]
label = "B"
kappa_MHz = 39.0

[[modes]]
label = "C"
kappa_MHz = 0.11
chi_MHz = 2.754
n_th = 0.0081

[[couplings]]
kind = "beam_splitter"
j = "B"
k = "C"
g_MHz = 7.98

[[couplings]]
kind = "drive"
mode = "B"
eps_MHz = 3.7
"#;

    #[test]
    fn parses_and_converts_units() {
        let cfg: NetworkConfig = toml::from_str(DOC).unwrap();
        let net = cfg.to_network().unwrap();
        assert!((net.modes[1].chi - 2.0 * std::f64::consts::PI * 2.754).abs() < 1e-12);
        assert_eq!(net.couplings.len(), 2);
        let back = NetworkConfig::from_network(&net);
        assert!((back.modes[1].chi_mhz - 2.754).abs() < 1e-12);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad_mode = DOC.replace("n_th = 0.0081", "n_th = 0.0081\nq_factor = 3");
        assert!(toml::from_str::<NetworkConfig>(&bad_mode).is_err());
        let bad_coupling = DOC.replace("g_MHz = 7.98", "g_MHz = 7.98\nphase = 1.0");
        assert!(toml::from_str::<NetworkConfig>(&bad_coupling).is_err());
        let bad_kind = DOC.replace("kind = \"drive\"", "kind = \"pump\"");
        assert!(toml::from_str::<NetworkConfig>(&bad_kind).is_err());
        let bad_top = format!("extra = 1\n{DOC}");
        assert!(toml::from_str::<NetworkConfig>(&bad_top).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg: NetworkConfig = toml::from_str(DOC).unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: NetworkConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(cfg, back);
    }
}
