//! Experiment documents: the JSON schema the CLI consumes, and their
//! resolution into runnable configs.
//!
//! Documents are strict: unknown keys are rejected, and every section's
//! fields are checked against its `kind`. Any seed left out is generated
//! and written back into the resolved document, so the summary emitted
//! after a run always describes an exactly replayable experiment.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use drasim_core::{
    gen_erdos_renyi, random_costs, BoxPenalty, CostModel, DynamicsSpec, ExperimentConfig, InitRule,
    Law, NetworkSchedule, NoiseKind, NoiseModel, Problem, ScheduleFrame, SeedSet, TerminationRule,
    WeightMatrix,
};

/// A document-level error; the message starts with the offending key path.
#[derive(Debug, Clone)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::error::Error for DocError {}

fn err<T>(path: &str, msg: impl std::fmt::Display) -> Result<T, DocError> {
    Err(DocError(format!("{path}: {msg}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDocument {
    pub problem: ProblemDoc,
    pub network: NetworkDoc,
    pub dynamics: DynamicsDoc,
    pub noise: NoiseDoc,
    pub init: InitDoc,
    pub run: RunDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub n: usize,
    pub b: f64,
    pub a: WeightsDoc,
    pub costs: CostsDoc,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub box_limits: Option<BoxDoc>,
}

/// Either one constant for all agents or a per-agent list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsDoc {
    Constant(f64),
    PerAgent(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomCostsDoc>,
}

/// Coefficients drawn uniformly from half-open ranges `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCostsDoc {
    pub g_range: [f64; 2],
    pub c_range: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxDoc {
    pub min: f64,
    pub max: f64,
    #[serde(default = "default_slope")]
    pub slope: f64,
}

fn default_slope() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    /// One of `erdos_renyi`, `complete`, `ring`, `custom`, `schedule`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require_connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<FrameDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_window: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub duration: u64,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsDoc {
    /// One of `sign`, `accelerated`, `linear`.
    pub law: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDoc {
    /// One of `none`, `gaussian`, `uniform`, `impulsive`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    /// Gaussian spread, given either as `variance` or as `std_dev`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_dev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitDoc {
    /// One of `feasible_random`, `equal_split`, `explicit`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDoc {
    pub max_steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_stride: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

/// Parse a document, rejecting unknown keys; errors carry the key path.
pub fn parse_document(text: &str) -> Result<ExperimentDocument, DocError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| DocError(format!("{}: {}", e.path(), e.inner())))
}

/// A document with every seed made concrete, plus the config it denotes.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub document: ExperimentDocument,
    pub config: ExperimentConfig,
    pub trace_name: String,
    pub summary_name: String,
}

/// Replayable entropy source for omitted seeds.
fn auto_seed() -> u64 {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    drasim_core::rng::mix64(nanos ^ COUNTER.fetch_add(1, Ordering::Relaxed).wrapping_mul(0x9E37))
}

fn pick_seed(explicit: Option<u64>, overridden: Option<u64>) -> u64 {
    overridden.or(explicit).unwrap_or_else(auto_seed)
}

/// Reject non-`None` fields that do not belong to the section's kind.
fn forbid(path: &str, kind: &str, fields: &[(&str, bool)]) -> Result<(), DocError> {
    for (name, present) in fields {
        if *present {
            return err(
                &format!("{path}.{name}"),
                format!("not applicable to kind `{kind}`"),
            );
        }
    }
    Ok(())
}

fn require<T: Copy>(value: Option<T>, path: &str) -> Result<T, DocError> {
    value.ok_or_else(|| DocError(format!("{path}: required field is missing")))
}

/// Resolve a document into a runnable config.
///
/// `seed_override`, when given, replaces the network seed with S, the init
/// seed with S+1, and the noise seed with S+2 (each only where the section
/// actually uses randomness). Cost seeds are never overridden so the problem
/// instance stays fixed across seed sweeps.
pub fn resolve(
    doc: &ExperimentDocument,
    seed_override: Option<u64>,
    stride_override: Option<u64>,
) -> Result<Resolved, DocError> {
    let mut resolved = doc.clone();
    let n = doc.problem.n;
    if n < 2 {
        return err("problem.n", format!("need at least 2 agents, got {n}"));
    }

    // Weights.
    let a: Vec<f64> = match &doc.problem.a {
        WeightsDoc::Constant(c) => vec![*c; n],
        WeightsDoc::PerAgent(v) => {
            if v.len() != n {
                return err(
                    "problem.a",
                    format!("length {} does not match problem.n = {n}", v.len()),
                );
            }
            v.clone()
        }
    };

    // Box penalty.
    let penalty = match &doc.problem.box_limits {
        Some(b) => Some(
            BoxPenalty::with_slope(b.min, b.max, b.slope)
                .map_err(|e| DocError(format!("problem.box: {e}")))?,
        ),
        None => None,
    };

    // Costs: explicit lists or random ranges.
    let costs_doc = &doc.problem.costs;
    let costs: Vec<CostModel> = match (&costs_doc.g, &costs_doc.c, &costs_doc.random) {
        (Some(g), Some(c), None) => {
            if g.len() != n {
                return err(
                    "problem.costs.g",
                    format!("length {} does not match problem.n = {n}", g.len()),
                );
            }
            if c.len() != n {
                return err(
                    "problem.costs.c",
                    format!("length {} does not match problem.n = {n}", c.len()),
                );
            }
            g.iter()
                .zip(c)
                .enumerate()
                .map(|(i, (&gi, &ci))| {
                    let m = CostModel::new(gi, ci)
                        .map_err(|e| DocError(format!("problem.costs.g[{i}]: {e}")))?;
                    Ok(match penalty {
                        Some(p) => m.with_penalty(p),
                        None => m,
                    })
                })
                .collect::<Result<_, DocError>>()?
        }
        (None, None, Some(random)) => {
            let seed = pick_seed(random.seed, None);
            resolved.problem.costs.random.as_mut().unwrap().seed = Some(seed);
            random_costs(
                n,
                (random.g_range[0], random.g_range[1]),
                (random.c_range[0], random.c_range[1]),
                penalty,
                seed,
            )
            .map_err(|e| DocError(format!("problem.costs.random: {e}")))?
        }
        _ => {
            return err(
                "problem.costs",
                "give either explicit `g` and `c` lists or a `random` block",
            )
        }
    };

    let problem =
        Problem::new(costs, a, doc.problem.b).map_err(|e| DocError(format!("problem: {e}")))?;

    // Network.
    let net = &doc.network;
    let net_kind = net.kind.as_str();
    let mut graph_seed = 0u64;
    let schedule = match net_kind {
        "erdos_renyi" => {
            forbid(
                "network",
                net_kind,
                &[
                    ("edges", net.edges.is_some()),
                    ("frames", net.frames.is_some()),
                ],
            )?;
            let p = require(net.p, "network.p")?;
            let weight = net.weight.unwrap_or(1.0);
            let require_connected = net.require_connected.unwrap_or(true);
            let base_seed = pick_seed(net.seed, seed_override);
            let mut chosen = None;
            for attempt in 0..1000u64 {
                let seed = base_seed.wrapping_add(attempt);
                let w = gen_erdos_renyi(n, p, weight, seed)
                    .map_err(|e| DocError(format!("network: {e}")))?;
                if !require_connected || w.is_connected() {
                    chosen = Some((seed, w));
                    break;
                }
            }
            let Some((seed, w)) = chosen else {
                return err(
                    "network.seed",
                    format!("no connected graph within 1000 seeds from {base_seed}; raise p"),
                );
            };
            graph_seed = seed;
            resolved.network.seed = Some(seed);
            resolved.network.weight = Some(weight);
            resolved.network.require_connected = Some(require_connected);
            NetworkSchedule::static_graph(w)
        }
        "complete" | "ring" => {
            forbid(
                "network",
                net_kind,
                &[
                    ("p", net.p.is_some()),
                    ("seed", net.seed.is_some()),
                    ("require_connected", net.require_connected.is_some()),
                    ("edges", net.edges.is_some()),
                    ("frames", net.frames.is_some()),
                ],
            )?;
            let weight = net.weight.unwrap_or(1.0);
            resolved.network.weight = Some(weight);
            let w = if net_kind == "complete" {
                WeightMatrix::complete(n, weight)
            } else {
                WeightMatrix::ring(n, weight)
            }
            .map_err(|e| DocError(format!("network: {e}")))?;
            NetworkSchedule::static_graph(w)
        }
        "custom" => {
            forbid(
                "network",
                net_kind,
                &[
                    ("p", net.p.is_some()),
                    ("weight", net.weight.is_some()),
                    ("seed", net.seed.is_some()),
                    ("require_connected", net.require_connected.is_some()),
                    ("frames", net.frames.is_some()),
                ],
            )?;
            let edges = net
                .edges
                .as_ref()
                .ok_or_else(|| DocError("network.edges: required field is missing".into()))?;
            let w = WeightMatrix::from_edges(n, edges)
                .map_err(|e| DocError(format!("network.edges: {e}")))?;
            NetworkSchedule::static_graph(w)
        }
        "schedule" => {
            forbid(
                "network",
                net_kind,
                &[
                    ("p", net.p.is_some()),
                    ("weight", net.weight.is_some()),
                    ("seed", net.seed.is_some()),
                    ("require_connected", net.require_connected.is_some()),
                    ("edges", net.edges.is_some()),
                ],
            )?;
            let frames = net
                .frames
                .as_ref()
                .ok_or_else(|| DocError("network.frames: required field is missing".into()))?;
            let built: Vec<ScheduleFrame> = frames
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    Ok(ScheduleFrame {
                        weights: WeightMatrix::from_edges(n, &f.edges)
                            .map_err(|e| DocError(format!("network.frames[{k}].edges: {e}")))?,
                        duration: f.duration,
                    })
                })
                .collect::<Result<_, DocError>>()?;
            NetworkSchedule::new(built).map_err(|e| DocError(format!("network.frames: {e}")))?
        }
        other => return err(
            "network.kind",
            format!(
                "unknown kind `{other}`; expected erdos_renyi, complete, ring, custom, or schedule"
            ),
        ),
    };
    let schedule = match net.b_window {
        Some(b) => schedule
            .with_window(b)
            .map_err(|e| DocError(format!("network.b_window: {e}")))?,
        None => schedule,
    };

    // Dynamics.
    let dyn_doc = &doc.dynamics;
    let law = match dyn_doc.law.as_str() {
        "sign" => Law::Sign,
        "accelerated" => Law::Accelerated,
        "linear" => Law::Linear,
        other => {
            return err(
                "dynamics.law",
                format!("unknown law `{other}`; expected sign, accelerated, or linear"),
            )
        }
    };
    if law != Law::Accelerated {
        forbid(
            "dynamics",
            &dyn_doc.law,
            &[
                ("mu1", dyn_doc.mu1.is_some()),
                ("mu2", dyn_doc.mu2.is_some()),
            ],
        )?;
    }
    let mu1 = dyn_doc.mu1.unwrap_or(DynamicsSpec::DEFAULT_MU1);
    let mu2 = dyn_doc.mu2.unwrap_or(DynamicsSpec::DEFAULT_MU2);
    if law == Law::Accelerated {
        resolved.dynamics.mu1 = Some(mu1);
        resolved.dynamics.mu2 = Some(mu2);
    }
    let dynamics = DynamicsSpec::new(law, mu1, mu2, dyn_doc.dt)
        .map_err(|e| DocError(format!("dynamics: {e}")))?;

    // Noise.
    let noise_doc = &doc.noise;
    let noise_kind = noise_doc.kind.as_str();
    let mut noise_seed = 0u64;
    let kind = match noise_kind {
        "none" => {
            forbid(
                "noise",
                noise_kind,
                &[
                    ("mean", noise_doc.mean.is_some()),
                    ("variance", noise_doc.variance.is_some()),
                    ("std_dev", noise_doc.std_dev.is_some()),
                    ("lo", noise_doc.lo.is_some()),
                    ("hi", noise_doc.hi.is_some()),
                    ("amplitude", noise_doc.amplitude.is_some()),
                    ("probability", noise_doc.probability.is_some()),
                    ("seed", noise_doc.seed.is_some()),
                ],
            )?;
            NoiseKind::None
        }
        "gaussian" => {
            forbid(
                "noise",
                noise_kind,
                &[
                    ("lo", noise_doc.lo.is_some()),
                    ("hi", noise_doc.hi.is_some()),
                    ("amplitude", noise_doc.amplitude.is_some()),
                    ("probability", noise_doc.probability.is_some()),
                ],
            )?;
            let variance = match (noise_doc.variance, noise_doc.std_dev) {
                (Some(v), None) => v,
                (None, Some(s)) => s * s,
                (Some(_), Some(_)) => {
                    return err("noise.std_dev", "give either variance or std_dev, not both")
                }
                (None, None) => return err("noise.variance", "required field is missing"),
            };
            NoiseKind::Gaussian {
                mean: noise_doc.mean.unwrap_or(0.0),
                variance,
            }
        }
        "uniform" => {
            forbid(
                "noise",
                noise_kind,
                &[
                    ("mean", noise_doc.mean.is_some()),
                    ("variance", noise_doc.variance.is_some()),
                    ("std_dev", noise_doc.std_dev.is_some()),
                    ("amplitude", noise_doc.amplitude.is_some()),
                    ("probability", noise_doc.probability.is_some()),
                ],
            )?;
            NoiseKind::Uniform {
                lo: require(noise_doc.lo, "noise.lo")?,
                hi: require(noise_doc.hi, "noise.hi")?,
            }
        }
        "impulsive" => {
            forbid(
                "noise",
                noise_kind,
                &[
                    ("mean", noise_doc.mean.is_some()),
                    ("variance", noise_doc.variance.is_some()),
                    ("std_dev", noise_doc.std_dev.is_some()),
                    ("lo", noise_doc.lo.is_some()),
                    ("hi", noise_doc.hi.is_some()),
                ],
            )?;
            NoiseKind::Impulsive {
                amplitude: require(noise_doc.amplitude, "noise.amplitude")?,
                probability: require(noise_doc.probability, "noise.probability")?,
            }
        }
        other => {
            return err(
                "noise.kind",
                format!("unknown kind `{other}`; expected none, gaussian, uniform, or impulsive"),
            )
        }
    };
    let mut noise = NoiseModel::new(kind).map_err(|e| DocError(format!("noise: {e}")))?;
    if noise_doc.symmetric.unwrap_or(false) {
        noise = noise.symmetric();
    }
    if noise_kind != "none" {
        noise_seed = pick_seed(noise_doc.seed, seed_override.map(|s| s.wrapping_add(2)));
        resolved.noise.seed = Some(noise_seed);
    }

    // Init.
    let init_doc = &doc.init;
    let mut init_seed = 0u64;
    let init = match init_doc.kind.as_str() {
        "feasible_random" => {
            forbid(
                "init",
                "feasible_random",
                &[("values", init_doc.values.is_some())],
            )?;
            init_seed = pick_seed(init_doc.seed, seed_override.map(|s| s.wrapping_add(1)));
            resolved.init.seed = Some(init_seed);
            InitRule::FeasibleRandom {
                lo: require(init_doc.lo, "init.lo")?,
                hi: require(init_doc.hi, "init.hi")?,
            }
        }
        "equal_split" => {
            forbid(
                "init",
                "equal_split",
                &[
                    ("lo", init_doc.lo.is_some()),
                    ("hi", init_doc.hi.is_some()),
                    ("values", init_doc.values.is_some()),
                    ("seed", init_doc.seed.is_some()),
                ],
            )?;
            InitRule::EqualSplit
        }
        "explicit" => {
            forbid(
                "init",
                "explicit",
                &[
                    ("lo", init_doc.lo.is_some()),
                    ("hi", init_doc.hi.is_some()),
                    ("seed", init_doc.seed.is_some()),
                ],
            )?;
            let values = init_doc
                .values
                .as_ref()
                .ok_or_else(|| DocError("init.values: required field is missing".into()))?;
            InitRule::Explicit(values.clone())
        }
        other => {
            return err(
                "init.kind",
                format!(
                    "unknown kind `{other}`; expected feasible_random, equal_split, or explicit"
                ),
            )
        }
    };

    // Run parameters.
    let termination = TerminationRule::new(
        doc.run.drift_tol.unwrap_or(1e-6),
        doc.run.window.unwrap_or(5),
    )
    .map_err(|e| DocError(format!("run: {e}")))?;
    let state_stride = stride_override.or(doc.run.state_stride).unwrap_or(10);
    if let Some(s) = stride_override {
        resolved.run.state_stride = Some(s);
    }

    let config = ExperimentConfig {
        problem,
        schedule,
        dynamics,
        noise,
        init,
        termination,
        max_steps: doc.run.max_steps,
        state_stride,
        seeds: SeedSet {
            graph: graph_seed,
            init: init_seed,
            noise: noise_seed,
        },
    };
    config
        .validate()
        .map_err(|e| DocError(format!("run: {e}")))?;

    let output = doc.output.clone().unwrap_or(OutputDoc {
        trace: None,
        summary: None,
    });
    Ok(Resolved {
        document: resolved,
        config,
        trace_name: output.trace.unwrap_or_else(|| "trace.csv".into()),
        summary_name: output.summary.unwrap_or_else(|| "summary.json".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> String {
        r#"{
            "problem": {
                "n": 3, "b": 6.0, "a": 1.0,
                "costs": {"g": [0.5, 1.0, 0.25], "c": [1.0, 0.0, -1.0]}
            },
            "network": {"kind": "complete"},
            "dynamics": {"law": "sign", "dt": 0.01},
            "noise": {"kind": "none"},
            "init": {"kind": "equal_split"},
            "run": {"max_steps": 100}
        }"#
        .to_string()
    }

    #[test]
    fn minimal_document_resolves() {
        let doc = parse_document(&minimal_doc()).unwrap();
        let resolved = resolve(&doc, None, None).unwrap();
        assert_eq!(resolved.config.problem.n(), 3);
        assert_eq!(resolved.config.max_steps, 100);
        assert_eq!(resolved.config.state_stride, 10);
        assert_eq!(resolved.trace_name, "trace.csv");
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let text = minimal_doc().replace("\"max_steps\": 100", "\"max_steps\": 100, \"bogus\": 1");
        let e = parse_document(&text).unwrap_err();
        assert!(e.0.contains("bogus"), "{e}");
        assert!(e.0.contains("run"), "{e}");
    }

    #[test]
    fn inapplicable_keys_are_rejected() {
        let text = minimal_doc().replace(
            "\"kind\": \"complete\"",
            "\"kind\": \"complete\", \"p\": 0.5",
        );
        let doc = parse_document(&text).unwrap();
        let e = resolve(&doc, None, None).unwrap_err();
        assert!(e.0.starts_with("network.p"), "{e}");
    }

    #[test]
    fn gaussian_accepts_either_spread_spelling() {
        let base = minimal_doc();
        let with_var = base.replace(
            r#"{"kind": "none"}"#,
            r#"{"kind": "gaussian", "variance": 0.04, "seed": 5}"#,
        );
        let with_std = base.replace(
            r#"{"kind": "none"}"#,
            r#"{"kind": "gaussian", "std_dev": 0.2, "seed": 5}"#,
        );
        let a = resolve(&parse_document(&with_var).unwrap(), None, None).unwrap();
        let b = resolve(&parse_document(&with_std).unwrap(), None, None).unwrap();
        let var_of = |m: &drasim_core::NoiseModel| match m.kind {
            NoiseKind::Gaussian { variance, .. } => variance,
            _ => panic!("expected gaussian"),
        };
        let (va, vb) = (var_of(&a.config.noise), var_of(&b.config.noise));
        assert!((va - vb).abs() < 1e-15, "{va} vs {vb}");

        let both = base.replace(
            r#"{"kind": "none"}"#,
            r#"{"kind": "gaussian", "variance": 0.04, "std_dev": 0.2}"#,
        );
        let e = resolve(&parse_document(&both).unwrap(), None, None).unwrap_err();
        assert!(e.0.contains("std_dev"), "{e}");
    }

    #[test]
    fn resolved_document_reproduces_the_config() {
        let text = minimal_doc()
            .replace(
                r#""costs": {"g": [0.5, 1.0, 0.25], "c": [1.0, 0.0, -1.0]}"#,
                r#""costs": {"random": {"g_range": [0.0, 0.05], "c_range": [0.0, 5.0]}}"#,
            )
            .replace(
                r#"{"kind": "complete"}"#,
                r#"{"kind": "erdos_renyi", "p": 0.6}"#,
            )
            .replace(
                r#"{"kind": "equal_split"}"#,
                r#"{"kind": "feasible_random", "lo": 0.0, "hi": 4.0}"#,
            );
        let doc = parse_document(&text).unwrap();
        let first = resolve(&doc, None, None).unwrap();
        // All seeds were auto-generated; the resolved doc must replay exactly.
        let second = resolve(&first.document, None, None).unwrap();
        assert_eq!(first.config, second.config);
        assert_eq!(first.document, second.document);
    }

    #[test]
    fn seed_override_is_applied_where_randomness_lives() {
        let text = minimal_doc()
            .replace(
                r#"{"kind": "complete"}"#,
                r#"{"kind": "erdos_renyi", "p": 0.9, "seed": 1}"#,
            )
            .replace(
                r#"{"kind": "equal_split"}"#,
                r#"{"kind": "feasible_random", "lo": 0.0, "hi": 4.0, "seed": 2}"#,
            )
            .replace(
                r#"{"kind": "none"}"#,
                r#"{"kind": "uniform", "lo": -0.1, "hi": 0.1, "seed": 3}"#,
            );
        let doc = parse_document(&text).unwrap();
        let r = resolve(&doc, Some(100), None).unwrap();
        assert_eq!(r.config.seeds.graph, 100);
        assert_eq!(r.config.seeds.init, 101);
        assert_eq!(r.config.seeds.noise, 102);
    }
}
