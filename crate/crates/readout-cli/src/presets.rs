//! Built-in scenarios reproducing the figure parameter sets as tables.
//! Every value below is stated in MHz (f/2π), µs or radians.

use std::f64::consts::{FRAC_PI_2, PI};

use readout_core::network_model::{CouplingConfig, ModeConfig, NetworkConfig};

use crate::error::{CliError, CliResult};
use crate::scenario::{
    CatchReleaseScenario, ChevronScenario, CoopMapScenario, Grid, Output, Scenario, SweepScenario, SweepSpec,
};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub scenario: Scenario,
}

fn mode(label: &str, kappa: f64, n_th: f64, chi: f64) -> ModeConfig {
    ModeConfig { label: label.into(), f_detuning_mhz: 0.0, kappa_mhz: kappa, n_th, chi_mhz: chi, longitudinal_mhz: 0.0 }
}

fn bs(j: &str, k: &str, g: f64, phi: f64) -> CouplingConfig {
    CouplingConfig::BeamSplitter { j: j.into(), k: k.into(), g_mhz: g, phi }
}

/// Device interferometer: measured linewidths, shifts and occupancies with
/// (g_AB, g_BC, g_AC) = (14.5, 7.98, 6.2) MHz and ε = 3.7 MHz on B. The loop
/// phase is the phase of the AC term (coupling index 2).
pub fn interferometer_network() -> NetworkConfig {
    NetworkConfig {
        modes: vec![mode("A", 0.11492, 0.33, 520e-6), mode("B", 39.0, 0.0030, 0.236), mode("C", 0.10976, 0.0081, 2.75411)],
        couplings: vec![
            bs("A", "B", 14.5, 0.0),
            bs("B", "C", 7.98, 0.0),
            bs("A", "C", 6.2, 0.0),
            CouplingConfig::Drive { mode: "B".into(), eps_mhz: 3.7, phi: 0.0 },
        ],
        qubit_energy_shift_mhz: None,
    }
}

/// Embedded amplifier at the nonreciprocity point: κ = (0.115, 39.0, 0.110),
/// (g_AB, g_BC, g_AC) = (14.5, 7.98, 5.934), χ_C = 2.754, vacuum baths,
/// ε = 20 MHz with φ_d = 0, squeezing phase θ = −π/2 (coupling index 3).
pub fn amplifier_network(lambda_mhz: f64, phi: f64) -> NetworkConfig {
    NetworkConfig {
        modes: vec![mode("A", 0.115, 0.0, 0.0), mode("B", 39.0, 0.0, 0.0), mode("C", 0.110, 0.0, 2.754)],
        couplings: vec![
            bs("A", "B", 14.5, 0.0),
            bs("B", "C", 7.98, 0.0),
            bs("A", "C", 5.934, phi),
            CouplingConfig::Squeeze { mode: "A".into(), lambda_mhz, theta: -FRAC_PI_2 },
            CouplingConfig::Drive { mode: "B".into(), eps_mhz: 20.0, phi: 0.0 },
        ],
        qubit_energy_shift_mhz: None,
    }
}

fn amplifier_sweep(phi: f64, source: &str) -> Scenario {
    Scenario::Sweep(SweepScenario {
        source: Some(source.into()),
        network: amplifier_network(0.0, phi),
        monitored: Some("B".into()),
        n_add: 0.0,
        theta_m: None,
        // stops short of λ_max = 10.84 MHz where the gain diverges
        sweep: Some(SweepSpec { parameter: "couplings.3.lambda_MHz".into(), grid: Grid::linspace(0.0, 10.8, 55) }),
        outputs: vec![
            Output::GammaPar,
            Output::GammaMeas,
            Output::GammaD,
            Output::GammaM { n_add: Some(0.0) },
            Output::GammaM { n_add: Some(5.0) },
            Output::Inefficiency { n_add: Some(0.0) },
            Output::Inefficiency { n_add: Some(5.0) },
            Output::Gain { mode: "B".into(), s: 1.0 },
            Output::Nonreciprocity { k: "C".into(), j: "A".into(), s: 1.0 },
            Output::Occupancy { mode: "C".into(), s: 1.0 },
            Output::Occupancy { mode: "C".into(), s: -1.0 },
        ],
    })
}

pub fn all() -> Vec<Preset> {
    let interferometer = Scenario::Sweep(SweepScenario {
        source: Some("Fig. 5: interferometer rates and efficiency versus loop phase".into()),
        network: interferometer_network(),
        monitored: Some("B".into()),
        n_add: 5.24,
        theta_m: None,
        sweep: Some(SweepSpec { parameter: "couplings.2.phi".into(), grid: Grid::linspace(-PI, PI, 41) }),
        outputs: vec![
            Output::GammaPar,
            Output::GammaMeas,
            Output::GammaD,
            Output::GammaM { n_add: None },
            Output::Eta { n_add: None },
            Output::ThetaM,
        ],
    });

    let ellipse_outputs = ["A", "B", "C"]
        .iter()
        .flat_map(|m| [1.0, -1.0].map(|s| Output::Ellipse { mode: m.to_string(), s, confidence: 0.99 }))
        .collect();
    let ellipses = Scenario::Sweep(SweepScenario {
        source: Some("Fig. 6: 99% pointer-state ellipses without squeezing and at 20 dB gain".into()),
        network: amplifier_network(0.0, -FRAC_PI_2),
        monitored: Some("B".into()),
        n_add: 0.0,
        theta_m: None,
        sweep: Some(SweepSpec { parameter: "couplings.3.lambda_MHz".into(), grid: Grid::Values(vec![0.0, 9.83]) }),
        outputs: ellipse_outputs,
    });

    let coop = Scenario::CooperativityMap(CoopMapScenario {
        source: Some("Fig. 10: dephasing rates over (C_AB, C_BC) at fixed 20 dB gain and matched C_AC".into()),
        kappa_mhz: [0.115, 39.0, 0.110],
        n_th: [0.0; 3],
        chi_c_mhz: 2.754,
        eps_mhz: 20.0,
        theta: -FRAC_PI_2,
        drive_phase: 0.0,
        phi: -FRAC_PI_2,
        gain_db: 20.0,
        bisect_rtol: 1e-6,
        c_ab: Grid::geomspace(1.0, 1000.0, 31),
        c_bc: Grid::geomspace(1.0, 1000.0, 31),
    });

    let chevron = Scenario::AcChevron(ChevronScenario {
        source: Some("Fig. 13(b): AC catch-and-release chevron, g_AC = 1.7 MHz".into()),
        kappa_mhz: 0.110,
        g_ac_mhz: 1.7,
        chi_c_mhz: 2.754,
        s: 1.0,
        detuning_mhz: Grid::linspace(2.754 - 6.0, 2.754 + 6.0, 61),
        t_ev_us: Grid::linspace(0.0, 2.0, 101),
    });

    let release = Scenario::CatchRelease(CatchReleaseScenario {
        source: Some("Fig. 12: C-mode catch-and-release traces and fits for both qubit states".into()),
        kappa_b_mhz: 39.0,
        kappa_k_mhz: 0.10976,
        delta_b_mhz: 0.0,
        delta_k_mhz: 0.5,
        chi_k_mhz: 2.75411,
        g_mhz: 1.0,
        eps_mhz: 0.0046,
        t0_us: 0.06,
        ramp_us: Some(0.01),
        t_ev_us: Grid::linspace(0.0, 10.0, 201),
        noise: 0.0,
        seed: 0,
    });

    vec![
        Preset { name: "interferometer_phase", description: "Γ_par, Γ_meas, Γ_d, Γ_m, η versus interferometer phase", scenario: interferometer },
        Preset {
            name: "amplifier_gain",
            description: "embedded amplifier rates, 1−η (n̄_add = 0, 5), gain and N_CA versus λ at φ = −π/2",
            scenario: amplifier_sweep(-FRAC_PI_2, "Fig. 7: embedded amplifier versus squeezing, ε = 20 MHz"),
        },
        Preset {
            name: "amplifier_gain_reversed",
            description: "as amplifier_gain with the circulation reversed (φ = +π/2)",
            scenario: amplifier_sweep(FRAC_PI_2, "Fig. 7(a), dashed: embedded amplifier with φ = +π/2"),
        },
        Preset { name: "pointer_ellipses", description: "per-mode 99% Wigner ellipses for s = ±1 at λ = 0 and 9.83 MHz", scenario: ellipses },
        Preset { name: "cooperativity_map", description: "Γ_par, Γ_meas over (C_AB, C_BC) at 20 dB with instability mask", scenario: coop },
        Preset { name: "ac_chevron", description: "|z| over (t_ev, Δ_AC) with a linecut fit of g_AC", scenario: chevron },
        Preset { name: "catch_release", description: "C-mode release traces for s = ±1 with κ, Δ and χ fits", scenario: release },
    ]
}

pub fn get(name: &str) -> CliResult<Scenario> {
    all().into_iter().find(|p| p.name == name).map(|p| p.scenario).ok_or_else(|| CliError::UnknownPreset(name.into()))
}
