//! Error type shared by all simulation modules.

/// Errors produced by problem construction, the KKT oracle, the dynamics,
/// and the simulation engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A cost function is not strictly convex (quadratic coefficient g ≤ 0).
    #[error("agent {agent}: cost is not strictly convex (g = {g})")]
    NonConvex { agent: usize, g: f64 },

    /// The KKT bisection could not bracket the demand. The achievable range
    /// reports what the weighted resource sum spans over the search interval.
    #[error("cannot bracket demand {demand}: achievable range [{achievable_lo}, {achievable_hi}]")]
    NoBracket {
        demand: f64,
        achievable_lo: f64,
        achievable_hi: f64,
    },

    /// A vector or matrix has the wrong size for the problem.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A weight matrix entry violates W_ij = W_ji.
    #[error("asymmetric weights at ({i}, {j}): {w_ij} != {w_ji}")]
    AsymmetricWeights {
        i: usize,
        j: usize,
        w_ij: f64,
        w_ji: f64,
    },

    /// Exponent of sgn^mu must be positive.
    #[error("invalid sign exponent mu = {mu}; must be > 0")]
    InvalidExponent { mu: f64 },

    /// The chattering bound requires every weighting factor a_i > 0.
    #[error("weight vector entry a[{index}] = {value} is not positive")]
    NonPositiveWeightVector { index: usize, value: f64 },

    /// A network schedule needs at least one frame.
    #[error("network schedule has no frames")]
    EmptySchedule,

    /// An explicit initial state violates the resource-demand constraint.
    #[error(
        "explicit initial state infeasible: |a'x - b| = {imbalance} exceeds tolerance {tolerance}"
    )]
    InfeasibleExplicit { imbalance: f64, tolerance: f64 },

    /// A state became non-finite during integration.
    #[error("numerical divergence at step {step}: state is non-finite (try a smaller dt)")]
    NumericalDivergence { step: u64 },

    /// compare() requires configs that differ only in their dynamics spec.
    #[error("mismatched baseline: configs differ in field `{field}`")]
    MismatchedBaseline { field: &'static str },

    /// Construction-time invariant violation not covered by a specific variant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
