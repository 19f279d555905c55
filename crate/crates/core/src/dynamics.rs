//! Sign-based update laws over one Euler step.
//!
//! Each agent drives its state against the weighted disagreement of gradient
//! ratios with its neighbors:
//!
//! ```text
//! x_i' = x_i - dt/a_i * sum_j W_ij * phi(d_ij + nu_ij),
//! d_ij = grad f_i(x_i)/a_i - grad f_j(x_j)/a_j
//! ```
//!
//! where `phi` is `sgn` for the robust law, `sgn + sgn^mu1 + sgn^mu2` for
//! the accelerated law, and the identity for the linear consensus baseline.
//! Symmetric weights plus odd `phi` conserve `a' x` exactly in the absence
//! of noise, which is what makes the trajectories all-time feasible.
//!
//! Integration is explicit forward Euler with fixed `dt`; the chattering
//! bound computed by [`epsilon_bound`] is stated for exactly this scheme.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Problem;
use crate::network::WeightMatrix;

/// Which update law drives the agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Sign,
    Accelerated,
    Linear,
}

impl Law {
    pub fn name(&self) -> &'static str {
        match self {
            Law::Sign => "sign",
            Law::Accelerated => "accelerated",
            Law::Linear => "linear",
        }
    }
}

/// Update law plus its exponents and step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsSpec {
    pub law: Law,
    pub mu1: f64,
    pub mu2: f64,
    pub dt: f64,
}

impl DynamicsSpec {
    /// Default accelerated exponents: one sublinear, one superlinear.
    pub const DEFAULT_MU1: f64 = 0.4;
    pub const DEFAULT_MU2: f64 = 2.0;

    pub fn new(law: Law, mu1: f64, mu2: f64, dt: f64) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "step size dt must be finite and > 0, got {dt}"
            )));
        }
        if law == Law::Accelerated {
            for mu in [mu1, mu2] {
                if mu <= 0.0 || !mu.is_finite() {
                    return Err(Error::InvalidExponent { mu });
                }
                // mu = 1 silently duplicates the plain sign term.
                if mu == 1.0 {
                    return Err(Error::InvalidConfig(
                        "accelerated exponents must differ from 1".into(),
                    ));
                }
            }
        }
        Ok(Self { law, mu1, mu2, dt })
    }

    pub fn sign(dt: f64) -> Result<Self> {
        Self::new(Law::Sign, Self::DEFAULT_MU1, Self::DEFAULT_MU2, dt)
    }

    pub fn accelerated(dt: f64, mu1: f64, mu2: f64) -> Result<Self> {
        Self::new(Law::Accelerated, mu1, mu2, dt)
    }

    pub fn linear(dt: f64) -> Result<Self> {
        Self::new(Law::Linear, Self::DEFAULT_MU1, Self::DEFAULT_MU2, dt)
    }
}

/// Noise samples per directed link (i, j); absent links read as zero.
pub type LinkNoise = HashMap<(usize, usize), f64>;

/// State, topology, and noise feeding one step.
#[derive(Debug, Clone, Copy)]
pub struct StepInput<'a> {
    pub x: &'a [f64],
    pub weights: &'a WeightMatrix,
    pub noise: &'a LinkNoise,
}

/// Signum with `sgn(0) = 0`, the equilibrium value.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Odd power `sgn^mu(x) = x |x|^(mu-1)`, zero at the origin for every mu > 0.
pub fn sgn_mu(x: f64, mu: f64) -> Result<f64> {
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::InvalidExponent { mu });
    }
    Ok(sgn_mu_unchecked(x, mu))
}

#[inline]
fn sgn_mu_unchecked(x: f64, mu: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.abs().powf(mu - 1.0)
    }
}

#[inline]
fn phi(spec: &DynamicsSpec, d: f64) -> f64 {
    match spec.law {
        Law::Sign => sgn(d),
        Law::Accelerated => sgn(d) + sgn_mu_unchecked(d, spec.mu1) + sgn_mu_unchecked(d, spec.mu2),
        Law::Linear => d,
    }
}

/// Advance the state by one Euler step of the chosen law.
///
/// Noise is read per directed link, so the two endpoints of a link may see
/// different disturbances. Gradient ratios are evaluated once per agent and
/// differenced per active link; the pairwise differences are exactly
/// antisymmetric, which keeps `a' x` conserved to rounding when the noise
/// is absent.
pub fn step(problem: &Problem, spec: &DynamicsSpec, input: StepInput<'_>) -> Result<Vec<f64>> {
    let n = problem.n();
    if input.x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: input.x.len(),
        });
    }
    if input.weights.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: input.weights.n(),
        });
    }
    if spec.law == Law::Accelerated {
        debug_assert!(spec.mu1 > 0.0 && spec.mu2 > 0.0);
    }

    let mut ratios = Vec::new();
    problem.gradient_ratios(input.x, &mut ratios);

    let mut accum = vec![0.0f64; n];
    let no_noise = input.noise.is_empty();
    for (i, j, w) in input.weights.edges() {
        let d = ratios[i] - ratios[j];
        if no_noise {
            // phi is odd, so the reverse direction is the exact negation.
            let f = phi(spec, d);
            accum[i] += w * f;
            accum[j] -= w * f;
        } else {
            let nu_ij = input.noise.get(&(i, j)).copied().unwrap_or(0.0);
            let nu_ji = input.noise.get(&(j, i)).copied().unwrap_or(0.0);
            accum[i] += w * phi(spec, d + nu_ij);
            accum[j] += w * phi(spec, -d + nu_ji);
        }
    }

    Ok(input
        .x
        .iter()
        .zip(&accum)
        .zip(problem.a())
        .map(|((&xi, &acc), &ai)| xi - spec.dt / ai * acc)
        .collect())
}

/// Chattering-amplitude bound of the discretized sign dynamics:
/// `dt / (2 min_i a_i) * max_i sum_j W_ij`.
///
/// The row sum is maximized over agents to make the bound network-wide.
pub fn epsilon_bound(problem: &Problem, weights: &WeightMatrix, dt: f64) -> Result<f64> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "step size dt must be finite and > 0, got {dt}"
        )));
    }
    if weights.n() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: weights.n(),
        });
    }
    let mut min_a = f64::INFINITY;
    for (index, &ai) in problem.a().iter().enumerate() {
        if ai <= 0.0 {
            return Err(Error::NonPositiveWeightVector { index, value: ai });
        }
        min_a = min_a.min(ai);
    }
    Ok(dt / (2.0 * min_a) * weights.max_row_sum())
}
