//! Deterministic simulation of noise-robust distributed resource allocation.
//!
//! A group of agents splits a demand `b` by driving the per-agent gradient
//! ratios `grad f_i(x_i) / a_i` to consensus over a communication network,
//! using only neighbor-to-neighbor exchanges. The update laws pass each
//! pairwise disagreement through a signum-family nonlinearity, which makes
//! the trajectories insensitive to additive link noise away from consensus
//! and conserves the weighted resource sum `a' x` exactly while noise is
//! absent.
//!
//! The crate provides:
//!
//! - [`model`]: the allocation problem, penalized quadratic costs, and an
//!   independent centralized KKT oracle used only for verification;
//! - [`dynamics`]: the sign, accelerated-sign, and linear-consensus update
//!   laws and the chattering bound of the discretization;
//! - [`network`]: weight matrices, random topologies, and time-varying
//!   schedules with uniform-connectivity checking;
//! - [`noise`]: seeded counter-based per-link noise;
//! - [`sim`]: the trajectory runner with drift-based termination;
//! - [`trace`]: per-step records and CSV output.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod network;
pub mod noise;
pub mod rng;
pub mod sim;
pub mod trace;

pub use dynamics::{epsilon_bound, sgn, sgn_mu, step, DynamicsSpec, Law, LinkNoise, StepInput};
pub use error::{Error, Result};
pub use model::{
    random_costs, residual, solve_kkt, BoxPenalty, CostModel, KktSolution, Problem, ORACLE_TOL,
};
pub use network::{gen_erdos_renyi, NetworkSchedule, ScheduleFrame, WeightMatrix};
pub use noise::{sample_link_noise, NoiseKind, NoiseModel};
pub use sim::{
    compare, consensus_gap, make_initial_state, run, ExperimentConfig, InitRule, SeedSet,
    TerminationRule,
};
pub use trace::{Trace, TraceRecord};
