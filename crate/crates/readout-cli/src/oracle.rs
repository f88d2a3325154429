//! `readout oracle`: Fock-space cross-checks of the Gaussian pipeline with a
//! PASS/FAIL verdict per instance.

use rayon::prelude::*;
use readout_core::fock_oracle::{self, FockConfig};
use readout_core::network_model::{ModeNetwork, NetworkConfig};
use serde::{Deserialize, Serialize};

use crate::engine::{pool, TolProfile};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInstance {
    pub name: String,
    pub network: NetworkConfig,
    pub cutoffs: Vec<usize>,
    pub t_end_us: f64,
    #[serde(default = "both_signs")]
    pub pointer_signs: Vec<f64>,
}

fn both_signs() -> Vec<f64> {
    vec![1.0, -1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    pub instances: Vec<OracleInstance>,
}

impl OracleFile {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::ConfigParse(e.to_string()))
    }

    /// The built-in reference instances.
    pub fn reference() -> Self {
        OracleFile {
            instances: fock_oracle::reference_scenarios()
                .into_iter()
                .map(|s| OracleInstance {
                    name: s.name.into(),
                    network: NetworkConfig::from_network(&s.network),
                    cutoffs: s.config.cutoffs,
                    t_end_us: s.config.t_end,
                    pointer_signs: both_signs(),
                })
                .collect(),
        }
    }
}

/// Pass thresholds.
pub const MAX_GAMMA_D_DELTA: f64 = 1e-2;
pub const MAX_CUTOFF_CHANGE: f64 = 1e-3;
pub const MAX_LEAKAGE: f64 = 1e-6;
pub const MAX_MOMENT_DELTA: f64 = 5e-3;
pub const MAX_HERMITICITY: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub name: String,
    pub cutoffs: Vec<usize>,
    pub gamma_d_fock: Option<f64>,
    pub gamma_d_gaussian: Option<f64>,
    pub gamma_d_steady: Option<f64>,
    pub rel_delta: Option<f64>,
    pub cutoff_rel_change: Option<f64>,
    pub max_leakage: Option<f64>,
    pub pointer_rel_delta_sigma: Option<f64>,
    pub pointer_rel_delta_mu: Option<f64>,
    pub pointer_hermiticity: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn run_instance(inst: &OracleInstance, tol: TolProfile) -> OracleRow {
    let mut row = OracleRow {
        name: inst.name.clone(),
        cutoffs: inst.cutoffs.clone(),
        gamma_d_fock: None,
        gamma_d_gaussian: None,
        gamma_d_steady: None,
        rel_delta: None,
        cutoff_rel_change: None,
        max_leakage: None,
        pointer_rel_delta_sigma: None,
        pointer_rel_delta_mu: None,
        pointer_hermiticity: None,
        pass: false,
        error: None,
    };
    let result = (|| -> readout_core::Result<()> {
        let net: ModeNetwork = inst.network.to_network()?;
        let cfg = FockConfig { tolerances: tol.tolerances(), ..FockConfig::new(inst.cutoffs.clone(), inst.t_end_us) };
        let conv = fock_oracle::eg_block_with_convergence(&net, &cfg)?;
        row.gamma_d_fock = Some(conv.base.gamma_d_final);
        row.gamma_d_gaussian = conv.base.gamma_d_gaussian.last().copied();
        row.gamma_d_steady = Some(conv.base.gamma_d_steady);
        row.rel_delta = Some(conv.base.rel_delta_trajectory);
        row.cutoff_rel_change = Some(conv.rel_change);
        row.max_leakage = Some(conv.base.max_leakage.max(conv.refined.max_leakage));
        let (mut ds, mut dm, mut h) = (0f64, 0f64, 0f64);
        for &s in &inst.pointer_signs {
            let p = fock_oracle::evolve_pointer(&net, &cfg, s)?;
            ds = ds.max(p.rel_delta_sigma);
            dm = dm.max(p.rel_delta_mu);
            h = h.max(p.max_hermiticity_error);
        }
        if !inst.pointer_signs.is_empty() {
            row.pointer_rel_delta_sigma = Some(ds);
            row.pointer_rel_delta_mu = Some(dm);
            row.pointer_hermiticity = Some(h);
        }
        row.pass = conv.pass
            && conv.base.max_leakage < MAX_LEAKAGE
            && conv.base.rel_delta_trajectory < MAX_GAMMA_D_DELTA
            && conv.rel_change < MAX_CUTOFF_CHANGE
            && ds < MAX_MOMENT_DELTA
            && dm < MAX_MOMENT_DELTA
            && h < MAX_HERMITICITY;
        Ok(())
    })();
    if let Err(e) = result {
        row.pass = false;
        row.error = Some(e.to_string());
    }
    row
}

pub fn run_oracle(file: &OracleFile, tol: TolProfile, workers: Option<usize>) -> CliResult<Vec<OracleRow>> {
    Ok(pool(workers)?.install(|| file.instances.par_iter().map(|i| run_instance(i, tol)).collect()))
}
