//! Trajectory runner: initialization, per-step network lookup, noise
//! sampling, dynamics step, metric recording, and drift-based termination.
//!
//! A run is single-threaded and fully deterministic: identical configs
//! produce identical traces byte for byte. Independent runs (sweeps,
//! comparisons) may execute concurrently since they share only immutable
//! inputs.

use crate::dynamics::{self, DynamicsSpec, LinkNoise, StepInput};
use crate::error::{Error, Result};
use crate::model::{self, Problem, ORACLE_TOL};
use crate::network::NetworkSchedule;
use crate::noise::{sample_link_noise, NoiseModel};
use crate::rng::Stream;
use crate::trace::{Trace, TraceRecord};

/// Feasibility slack for accepting an initial state.
pub const INIT_TOL: f64 = 1e-9;

/// How the initial state is produced. Every rule yields a feasible x(0).
#[derive(Debug, Clone, PartialEq)]
pub enum InitRule {
    /// Uniform draw in `[lo, hi]^n`, then projected onto the constraint
    /// hyperplane along `a`.
    FeasibleRandom { lo: f64, hi: f64 },
    /// Caller-supplied state; rejected if it violates the constraint.
    Explicit(Vec<f64>),
    /// The same value b / (sum a_i) for every agent.
    EqualSplit,
}

/// Termination: feasibility drift above tolerance sustained over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminationRule {
    pub drift_tol: f64,
    pub window: u32,
}

impl TerminationRule {
    pub fn new(drift_tol: f64, window: u32) -> Result<Self> {
        if drift_tol <= 0.0 || drift_tol.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "drift tolerance must be > 0, got {drift_tol}"
            )));
        }
        if window == 0 {
            return Err(Error::InvalidConfig(
                "termination window must be >= 1".into(),
            ));
        }
        Ok(Self { drift_tol, window })
    }
}

impl Default for TerminationRule {
    fn default() -> Self {
        Self {
            drift_tol: 1e-6,
            window: 5,
        }
    }
}

/// Seeds of every random ingredient, recorded so any run is replayable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSet {
    pub graph: u64,
    pub init: u64,
    pub noise: u64,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub schedule: NetworkSchedule,
    pub dynamics: DynamicsSpec,
    pub noise: NoiseModel,
    pub init: InitRule,
    pub termination: TerminationRule,
    pub max_steps: u64,
    /// Record the full state vector every this many steps; 0 disables
    /// snapshots entirely.
    pub state_stride: u64,
    pub seeds: SeedSet,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be >= 1".into()));
        }
        if self.schedule.n() != self.problem.n() {
            return Err(Error::DimensionMismatch {
                expected: self.problem.n(),
                got: self.schedule.n(),
            });
        }
        Ok(())
    }
}

/// Gradient-consensus gap of a recorded state.
///
/// For smooth states this is the plain spread of the gradient ratios. An
/// agent within one step's reach of a box-penalty kink (per-step motion is
/// bounded by `dt * sum_j W_ij / a_i`) chatters across a subgradient jump
/// the discretization cannot resolve, so such an agent contributes the whole
/// ratio interval spanned by the jump instead of a point. The gap is the
/// smallest uniform enlargement that gives all agents a common ratio.
pub fn consensus_gap(problem: &Problem, x: &[f64], row_sums: &[f64], dt: f64) -> f64 {
    let mut max_lo = f64::NEG_INFINITY;
    let mut min_hi = f64::INFINITY;
    for ((cost, &xi), (&ai, &row)) in problem
        .costs()
        .iter()
        .zip(x)
        .zip(problem.a().iter().zip(row_sums))
    {
        let r = cost.gradient(xi) / ai;
        let (mut lo, mut hi) = (r, r);
        if let Some(p) = &cost.penalty {
            let eps = dt * row / ai.abs();
            for (kink, below_extra, above_extra) in
                [(p.x_min, -p.slope, 0.0), (p.x_max, 0.0, p.slope)]
            {
                if (xi - kink).abs() <= eps {
                    let smooth = 2.0 * cost.g * kink + cost.c;
                    let below = (smooth + below_extra) / ai;
                    let above = (smooth + above_extra) / ai;
                    lo = lo.min(below.min(above));
                    hi = hi.max(below.max(above));
                }
            }
        }
        max_lo = max_lo.max(lo);
        min_hi = min_hi.min(hi);
    }
    (max_lo - min_hi).max(0.0)
}

/// Build a feasible initial state.
pub fn make_initial_state(rule: &InitRule, problem: &Problem, seed: u64) -> Result<Vec<f64>> {
    let n = problem.n();
    let a = problem.a();
    let b = problem.b();
    let tol = INIT_TOL * (1.0 + b.abs());
    match rule {
        InitRule::FeasibleRandom { lo, hi } => {
            if lo > hi || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "feasible-random range must satisfy lo <= hi, got [{lo}, {hi}]"
                )));
            }
            let mut stream = Stream::keyed(&[seed, 0x1417]);
            let mut x: Vec<f64> = (0..n).map(|_| stream.next_in(*lo, *hi)).collect();
            let delta = b - problem.weighted_sum(&x);
            let a_norm_sq: f64 = a.iter().map(|ai| ai * ai).sum();
            for (xi, &ai) in x.iter_mut().zip(a) {
                *xi += delta * ai / a_norm_sq;
            }
            let imbalance = problem.feasibility_drift(&x).abs();
            if imbalance > tol {
                return Err(Error::InvalidConfig(format!(
                    "projection left |a'x - b| = {imbalance}; range [{lo}, {hi}] too extreme"
                )));
            }
            Ok(x)
        }
        InitRule::Explicit(x) => {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
            let imbalance = problem.feasibility_drift(x).abs();
            if imbalance > tol {
                return Err(Error::InfeasibleExplicit {
                    imbalance,
                    tolerance: tol,
                });
            }
            Ok(x.clone())
        }
        InitRule::EqualSplit => {
            let a_sum: f64 = a.iter().sum();
            if a_sum.abs() < 1e-12 {
                return Err(Error::InvalidConfig(
                    "equal split undefined: weights sum to zero".into(),
                ));
            }
            Ok(vec![b / a_sum; n])
        }
    }
}

/// Run one trajectory to termination or `max_steps`.
///
/// Per iteration k (from 1): look up the frame for step k-1, sample link
/// noise with counter k-1, advance the state, and record metrics for the
/// post-step state. Termination fires at the first step where
/// `|a'x - b| > drift_tol * (1 + |b|)` has held for `window` consecutive
/// steps.
///
/// A state that goes non-finite or wanders more than nine orders of
/// magnitude beyond the problem scale aborts with
/// [`Error::NumericalDivergence`]; an unstable step size would otherwise
/// trip the drift criterion through rounding noise long before reaching
/// infinity and masquerade as a clean termination.
pub fn run(config: &ExperimentConfig) -> Result<Trace> {
    config.validate()?;
    let problem = &config.problem;
    let kkt = model::solve_kkt(problem, ORACLE_TOL)?;

    let mut x = make_initial_state(&config.init, problem, config.seeds.init)?;
    let initial_residual = model::residual(problem, &x, kkt.f_star)?;
    let state_scale = x
        .iter()
        .chain(&kkt.x_star)
        .fold(1.0f64, |acc, &v| acc.max(v.abs()));
    let excursion_limit = 1e9 * state_scale;

    let dt = config.dynamics.dt;
    let mut eps_bound = 0.0f64;
    for frame in config.schedule.frames() {
        eps_bound = eps_bound.max(dynamics::epsilon_bound(problem, &frame.weights, dt)?);
    }

    // Directed link lists and row sums per frame, computed once.
    let frame_links: Vec<Vec<(usize, usize)>> = config
        .schedule
        .frames()
        .iter()
        .map(|f| f.weights.directed_links())
        .collect();
    let frame_row_sums: Vec<Vec<f64>> = config
        .schedule
        .frames()
        .iter()
        .map(|f| (0..f.weights.n()).map(|i| f.weights.row_sum(i)).collect())
        .collect();

    let drift_threshold = config.termination.drift_tol * (1.0 + problem.b().abs());
    let empty_noise = LinkNoise::new();
    let mut records = Vec::new();
    let mut violation_run = 0u32;
    let mut termination_step = None;
    let mut drift_onset_step = None;
    let mut steps_run = 0;

    for k in 1..=config.max_steps {
        let frame_idx = config.schedule.frame_index_at(k - 1);
        let weights = &config.schedule.frames()[frame_idx].weights;
        let noise_map;
        let noise = if config.noise.is_none() {
            &empty_noise
        } else {
            noise_map = sample_link_noise(
                &config.noise,
                k - 1,
                &frame_links[frame_idx],
                config.seeds.noise,
            );
            &noise_map
        };

        x = dynamics::step(
            problem,
            &config.dynamics,
            StepInput {
                x: &x,
                weights,
                noise,
            },
        )?;
        if x.iter()
            .any(|v| !v.is_finite() || v.abs() > excursion_limit)
        {
            return Err(Error::NumericalDivergence { step: k });
        }

        let drift = problem.feasibility_drift(&x);
        let res = model::residual(problem, &x, kkt.f_star)?;
        let gap = consensus_gap(problem, &x, &frame_row_sums[frame_idx], dt);
        let snapshot = config.state_stride > 0 && k % config.state_stride == 0;
        records.push(TraceRecord {
            step: k,
            time: k as f64 * dt,
            residual: res,
            drift,
            max_grad_gap: gap,
            state: snapshot.then(|| x.clone()),
        });
        steps_run = k;

        if drift.abs() > drift_threshold {
            violation_run += 1;
            if violation_run >= config.termination.window {
                termination_step = Some(k);
                drift_onset_step = Some(k + 1 - violation_run as u64);
                break;
            }
        } else {
            violation_run = 0;
        }
    }

    Ok(Trace {
        records,
        steps_run,
        termination_step,
        drift_onset_step,
        initial_residual,
        final_state: x,
        epsilon_bound: eps_bound,
        f_star: kkt.f_star,
        phi_star: kkt.phi_star,
        dt,
        n: problem.n(),
        seeds: config.seeds,
    })
}

/// Run several configs that differ only in their dynamics spec, for aligned
/// side-by-side residual curves.
pub fn compare(configs: &[ExperimentConfig]) -> Result<Vec<Trace>> {
    let Some(first) = configs.first() else {
        return Ok(Vec::new());
    };
    for other in &configs[1..] {
        let field = if other.problem != first.problem {
            Some("problem")
        } else if other.schedule != first.schedule {
            Some("schedule")
        } else if other.noise != first.noise {
            Some("noise")
        } else if other.init != first.init {
            Some("init")
        } else if other.termination != first.termination {
            Some("termination")
        } else if other.max_steps != first.max_steps {
            Some("max_steps")
        } else if other.state_stride != first.state_stride {
            Some("state_stride")
        } else if other.seeds != first.seeds {
            Some("seeds")
        } else {
            None
        };
        if let Some(field) = field {
            return Err(Error::MismatchedBaseline { field });
        }
    }
    if configs.len() == 1 {
        return Ok(vec![run(first)?]);
    }
    // Runs are independent and deterministic; fan out and collect in order.
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| scope.spawn(move || run(config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("run thread panicked"))
            .collect()
    })
}
