//! Allocation problem model and the centralized KKT oracle.
//!
//! The problem is to split a demand `b` among `n` agents, minimizing the sum
//! of strictly convex local costs subject to `a' x = b`. Each local cost is
//! a quadratic `g x^2 + c x`, optionally penalized outside a box by
//! piecewise-linear hinge terms. The oracle solves the optimality condition
//! `grad f_i(x_i) = phi * a_i` for all agents by bisection on the scalar
//! multiplier `phi`; it exists to verify the distributed dynamics and plays
//! no part in them.

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Piecewise-linear box penalty: `slope * max(x - x_max, 0) + slope * max(x_min - x, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxPenalty {
    pub x_min: f64,
    pub x_max: f64,
    pub slope: f64,
}

impl BoxPenalty {
    /// Penalty with unit slope, the hinge `h(u) = max(u, 0)`.
    pub fn new(x_min: f64, x_max: f64) -> Result<Self> {
        Self::with_slope(x_min, x_max, 1.0)
    }

    pub fn with_slope(x_min: f64, x_max: f64, slope: f64) -> Result<Self> {
        if x_min >= x_max || x_min.is_nan() || x_max.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "box penalty requires x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if slope < 0.0 || !slope.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "box penalty slope must be finite and >= 0, got {slope}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            slope,
        })
    }

    fn value(&self, x: f64) -> f64 {
        self.slope * ((x - self.x_max).max(0.0) + (self.x_min - x).max(0.0))
    }

    /// Subgradient selection: the penalty contributes nothing exactly at the
    /// kinks x_min and x_max.
    fn gradient(&self, x: f64) -> f64 {
        if x > self.x_max {
            self.slope
        } else if x < self.x_min {
            -self.slope
        } else {
            0.0
        }
    }
}

/// Strictly convex local cost `g x^2 + c x`, plus an optional box penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub g: f64,
    pub c: f64,
    pub penalty: Option<BoxPenalty>,
}

impl CostModel {
    pub fn new(g: f64, c: f64) -> Result<Self> {
        if g <= 0.0 || !g.is_finite() {
            return Err(Error::NonConvex { agent: 0, g });
        }
        if !c.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "linear coefficient must be finite, got {c}"
            )));
        }
        Ok(Self {
            g,
            c,
            penalty: None,
        })
    }

    pub fn with_penalty(mut self, penalty: BoxPenalty) -> Self {
        self.penalty = Some(penalty);
        self
    }

    /// Cost value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let smooth = self.g * x * x + self.c * x;
        match &self.penalty {
            Some(p) => smooth + p.value(x),
            None => smooth,
        }
    }

    /// Cost gradient at `x` (smooth-part gradient exactly at penalty kinks).
    pub fn gradient(&self, x: f64) -> f64 {
        let smooth = 2.0 * self.g * x + self.c;
        match &self.penalty {
            Some(p) => smooth + p.gradient(x),
            None => smooth,
        }
    }

    /// Invert `gradient(x) = target` for the unique `x`.
    ///
    /// The gradient is strictly increasing with upward jumps of `slope` at
    /// the box edges; targets landing inside a jump map to the kink itself.
    fn invert_gradient(&self, target: f64) -> f64 {
        let mid = (target - self.c) / (2.0 * self.g);
        let Some(p) = &self.penalty else {
            return mid;
        };
        if mid < p.x_min {
            let lo = (target - self.c + p.slope) / (2.0 * self.g);
            if lo < p.x_min {
                lo
            } else {
                p.x_min
            }
        } else if mid > p.x_max {
            let hi = (target - self.c - p.slope) / (2.0 * self.g);
            if hi > p.x_max {
                hi
            } else {
                p.x_max
            }
        } else {
            mid
        }
    }
}

/// Draw `n` cost models with `g` in `(g_lo, g_hi]` and `c` in `(c_lo, c_hi]`,
/// deterministically from `seed`.
pub fn random_costs(
    n: usize,
    g_range: (f64, f64),
    c_range: (f64, f64),
    penalty: Option<BoxPenalty>,
    seed: u64,
) -> Result<Vec<CostModel>> {
    let (g_lo, g_hi) = g_range;
    let (c_lo, c_hi) = c_range;
    if g_lo < 0.0 || g_lo >= g_hi || g_lo.is_nan() || g_hi.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "g range must satisfy 0 <= lo < hi, got ({g_lo}, {g_hi}]"
        )));
    }
    if c_lo >= c_hi || c_lo.is_nan() || c_hi.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "c range must satisfy lo < hi, got ({c_lo}, {c_hi}]"
        )));
    }
    let mut stream = Stream::keyed(&[seed, 0xC057]);
    (0..n)
        .map(|_| {
            let g = stream.next_in_open_lo(g_lo, g_hi);
            let c = stream.next_in_open_lo(c_lo, c_hi);
            let mut m = CostModel::new(g, c)?;
            if let Some(p) = penalty {
                m = m.with_penalty(p);
            }
            Ok(m)
        })
        .collect()
}

/// The allocation instance: local costs, weighting factors, and demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    costs: Vec<CostModel>,
    a: Vec<f64>,
    b: f64,
}

impl Problem {
    pub fn new(costs: Vec<CostModel>, a: Vec<f64>, b: f64) -> Result<Self> {
        let n = costs.len();
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 agents, got {n}"
            )));
        }
        if a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        for (i, cost) in costs.iter().enumerate() {
            if cost.g <= 0.0 || cost.g.is_nan() {
                return Err(Error::NonConvex {
                    agent: i,
                    g: cost.g,
                });
            }
        }
        if let Some(i) = a.iter().position(|&ai| ai == 0.0 || !ai.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "weight a[{i}] = {} must be nonzero and finite",
                a[i]
            )));
        }
        if !b.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "demand must be finite, got {b}"
            )));
        }
        Ok(Self { costs, a, b })
    }

    /// Agents with identical costs and unit weights.
    pub fn uniform(n: usize, cost: CostModel, b: f64) -> Result<Self> {
        Self::new(vec![cost; n], vec![1.0; n], b)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[CostModel] {
        &self.costs
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Total cost `F(x)`.
    pub fn total_cost(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n());
        self.costs
            .iter()
            .zip(x)
            .map(|(cost, &xi)| cost.value(xi))
            .sum()
    }

    /// Weighted resource sum `a' x`.
    pub fn weighted_sum(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n());
        self.a.iter().zip(x).map(|(&ai, &xi)| ai * xi).sum()
    }

    /// Constraint violation `a' x - b`.
    pub fn feasibility_drift(&self, x: &[f64]) -> f64 {
        self.weighted_sum(x) - self.b
    }

    /// Gradient ratios `grad f_i(x_i) / a_i`, the quantities the dynamics
    /// drive to consensus. Writes into `out` to avoid per-step allocation.
    pub fn gradient_ratios(&self, x: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(x.len(), self.n());
        out.clear();
        out.extend(
            self.costs
                .iter()
                .zip(x)
                .zip(&self.a)
                .map(|((cost, &xi), &ai)| cost.gradient(xi) / ai),
        );
    }
}

/// Exact optimizer produced by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    pub x_star: Vec<f64>,
    pub phi_star: f64,
    pub f_star: f64,
}

/// Default oracle tolerance on `|a' x - b|`; far below the simulation noise
/// floor so oracle error never pollutes trajectory verdicts.
pub const ORACLE_TOL: f64 = 1e-10;

const X_BIG: f64 = 1e9;
const MAX_EXPAND: u32 = 200;
const MAX_BISECT: u32 = 500;

/// Solve the optimality system `grad f_i(x_i) = phi a_i`, `a' x = b` by
/// bisection on `phi`.
///
/// For each candidate multiplier the per-agent monotone gradient map is
/// inverted in closed form, making the weighted sum a continuous
/// nondecreasing function of `phi`; bisection then pins the multiplier to
/// machine precision or until the demand is met within `tol`.
pub fn solve_kkt(problem: &Problem, tol: f64) -> Result<KktSolution> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "oracle tolerance must be > 0, got {tol}"
        )));
    }
    for (i, cost) in problem.costs().iter().enumerate() {
        if cost.g <= 0.0 || cost.g.is_nan() {
            return Err(Error::NonConvex {
                agent: i,
                g: cost.g,
            });
        }
    }

    let weighted_sum_at = |phi: f64| -> f64 {
        problem
            .costs()
            .iter()
            .zip(problem.a())
            .map(|(cost, &ai)| ai * cost.invert_gradient(phi * ai))
            .sum()
    };

    // Initial bracket from the gradient-ratio range at +/- X_BIG.
    let mut phi_lo = f64::INFINITY;
    let mut phi_hi = f64::NEG_INFINITY;
    for (cost, &ai) in problem.costs().iter().zip(problem.a()) {
        for x in [-X_BIG, X_BIG] {
            let r = cost.gradient(x) / ai;
            phi_lo = phi_lo.min(r);
            phi_hi = phi_hi.max(r);
        }
    }

    let b = problem.b();
    let mut s_lo = weighted_sum_at(phi_lo);
    let mut s_hi = weighted_sum_at(phi_hi);
    let mut expansions = 0;
    while s_lo > b || b > s_hi || s_lo.is_nan() || s_hi.is_nan() {
        if expansions >= MAX_EXPAND
            || !s_lo.is_finite()
            || !s_hi.is_finite()
            || !phi_lo.is_finite()
            || !phi_hi.is_finite()
        {
            return Err(Error::NoBracket {
                demand: b,
                achievable_lo: s_lo,
                achievable_hi: s_hi,
            });
        }
        let width = (phi_hi - phi_lo).max(1.0);
        if s_lo > b {
            phi_lo -= width;
            s_lo = weighted_sum_at(phi_lo);
        }
        if s_hi < b {
            phi_hi += width;
            s_hi = weighted_sum_at(phi_hi);
        }
        expansions += 1;
    }

    // Bisect to interval collapse; cheap and leaves x* accurate to rounding,
    // well inside any tol the caller asked for.
    let mut phi = 0.5 * (phi_lo + phi_hi);
    for _ in 0..MAX_BISECT {
        phi = 0.5 * (phi_lo + phi_hi);
        let s = weighted_sum_at(phi);
        if s < b {
            phi_lo = phi;
        } else {
            phi_hi = phi;
        }
        if phi_hi - phi_lo <= f64::EPSILON * phi.abs().max(1.0) {
            break;
        }
    }

    let x_star: Vec<f64> = problem
        .costs()
        .iter()
        .zip(problem.a())
        .map(|(cost, &ai)| cost.invert_gradient(phi * ai))
        .collect();
    let imbalance = problem.feasibility_drift(&x_star);
    if imbalance.abs() > tol.max(1e-9 * (1.0 + b.abs())) {
        // Continuity of the weighted sum makes this unreachable for valid
        // problems; report rather than return a silently loose solution.
        return Err(Error::NoBracket {
            demand: b,
            achievable_lo: b - imbalance,
            achievable_hi: b - imbalance,
        });
    }
    let f_star = problem.total_cost(&x_star);
    Ok(KktSolution {
        x_star,
        phi_star: phi,
        f_star,
    })
}

/// Residual `F(x) - F*`, the Lyapunov function of the dynamics.
pub fn residual(problem: &Problem, x: &[f64], f_star: f64) -> Result<f64> {
    if x.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: x.len(),
        });
    }
    Ok(problem.total_cost(x) - f_star)
}
