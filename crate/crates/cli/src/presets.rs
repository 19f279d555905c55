//! Built-in experiment presets.
//!
//! Both presets use the 40-agent economic-dispatch style instance: penalized
//! quadratic costs with g in (0, 0.05] and c in (0, 5], soft box [20, 100],
//! unit weighting factors, demand 2500, over a connected Erdős–Rényi graph
//! with 20% link probability. The discretization step dt = 0.01 and the
//! 10^5-step budget are artifact choices, picked so the noise-free run
//! converges while the chattering bound stays well inside the box width.
//!
//! - `fig1`: noise-free comparison of the sign, accelerated-sign, and linear
//!   consensus laws (accelerated exponents 0.4 and 2).
//! - `fig2`: the sign law under Gaussian N(0, 0.001) link noise, with
//!   drift-based termination.

use crate::doc::{
    BoxDoc, CostsDoc, DynamicsDoc, ExperimentDocument, InitDoc, NetworkDoc, NoiseDoc, ProblemDoc,
    RandomCostsDoc, RunDoc, WeightsDoc,
};

pub const PRESET_NAMES: [&str; 2] = ["fig1", "fig2"];

const GRAPH_SEED: u64 = 60;
const COST_SEED: u64 = 11;
const INIT_SEED: u64 = 13;
const NOISE_SEED: u64 = 17;

fn base_document(law: &str, noise: NoiseDoc) -> ExperimentDocument {
    let accelerated = law == "accelerated";
    ExperimentDocument {
        problem: ProblemDoc {
            n: 40,
            b: 2500.0,
            a: WeightsDoc::Constant(1.0),
            costs: CostsDoc {
                g: None,
                c: None,
                random: Some(RandomCostsDoc {
                    g_range: [0.0, 0.05],
                    c_range: [0.0, 5.0],
                    seed: Some(COST_SEED),
                }),
            },
            box_limits: Some(BoxDoc {
                min: 20.0,
                max: 100.0,
                slope: 1.0,
            }),
        },
        network: NetworkDoc {
            kind: "erdos_renyi".into(),
            p: Some(0.2),
            weight: Some(1.0),
            seed: Some(GRAPH_SEED),
            require_connected: Some(true),
            edges: None,
            frames: None,
            b_window: None,
        },
        dynamics: DynamicsDoc {
            law: law.into(),
            mu1: accelerated.then_some(0.4),
            mu2: accelerated.then_some(2.0),
            dt: 0.01,
        },
        noise,
        init: InitDoc {
            kind: "feasible_random".into(),
            lo: Some(20.0),
            hi: Some(100.0),
            values: None,
            seed: Some(INIT_SEED),
        },
        run: RunDoc {
            max_steps: 100_000,
            drift_tol: Some(1e-6),
            window: Some(5),
            state_stride: Some(10),
        },
        output: None,
    }
}

fn no_noise() -> NoiseDoc {
    NoiseDoc {
        kind: "none".into(),
        mean: None,
        variance: None,
        std_dev: None,
        lo: None,
        hi: None,
        amplitude: None,
        probability: None,
        symmetric: None,
        seed: None,
    }
}

fn gaussian_noise() -> NoiseDoc {
    NoiseDoc {
        kind: "gaussian".into(),
        mean: Some(0.0),
        variance: Some(0.001),
        std_dev: None,
        lo: None,
        hi: None,
        amplitude: None,
        probability: None,
        symmetric: Some(false),
        seed: Some(NOISE_SEED),
    }
}

/// The labeled documents a preset expands to, or `None` for an unknown name.
pub fn documents(name: &str) -> Option<Vec<(String, ExperimentDocument)>> {
    match name {
        "fig1" => Some(
            ["sign", "accelerated", "linear"]
                .iter()
                .map(|law| (law.to_string(), base_document(law, no_noise())))
                .collect(),
        ),
        "fig2" => Some(vec![(
            "sign".into(),
            base_document("sign", gaussian_noise()),
        )]),
        _ => None,
    }
}

/// Human-readable preset table for `drasim presets`.
pub fn listing() -> String {
    let mut out = String::new();
    out.push_str("available presets\n");
    out.push_str("=================\n\n");
    out.push_str("shared instance\n");
    out.push_str("  n = 40 agents, demand b = 2500, weighting a_i = 1\n");
    out.push_str("  costs: g_i x^2 + c_i x with g_i in (0, 0.05], c_i in (0, 5]");
    out.push_str(&format!(" (cost seed {COST_SEED})\n"));
    out.push_str("  soft box penalty: x_min = 20, x_max = 100, slope 1\n");
    out.push_str("  network: Erdos-Renyi, 20% linking probability, unit weights,\n");
    out.push_str(&format!(
        "           regenerated from seed {GRAPH_SEED} until connected\n"
    ));
    out.push_str(&format!(
        "  init: feasible random in [20, 100] (seed {INIT_SEED}); dt = 0.01; max 100000 steps\n\n"
    ));
    out.push_str("fig1  noise-free comparison of the update laws\n");
    out.push_str("      laws: sign | accelerated (exponents 0.4, 2) | linear\n");
    out.push_str("      noise: none\n\n");
    out.push_str("fig2  sign law under noisy links, drift-based termination\n");
    out.push_str(&format!(
        "      noise: gaussian, mean 0, variance 0.001, independent per direction (seed {NOISE_SEED})\n"
    ));
    out.push_str("      termination: drift_tol 1e-6, window 5\n");
    out
}
