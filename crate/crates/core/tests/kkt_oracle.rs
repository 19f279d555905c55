//! Cross-checks the KKT bisection oracle against an independent dense
//! projected-gradient solver, and pins the optimal cost of the standard
//! 40-agent experiment instance as a golden value.

use drasim_core::model::{random_costs, solve_kkt, BoxPenalty, CostModel, Problem, ORACLE_TOL};
use drasim_core::rng::Stream;

/// Dense projected (sub)gradient descent on the constraint hyperplane:
/// a fixed-step phase followed by a diminishing-step tail to settle across
/// penalty kinks. Independent of the bisection path.
fn projected_gradient(problem: &Problem, fixed_iters: usize, tail_iters: usize) -> Vec<f64> {
    let n = problem.n();
    let a = problem.a();
    let a_norm_sq: f64 = a.iter().map(|ai| ai * ai).sum();
    let lipschitz = problem
        .costs()
        .iter()
        .map(|c| 2.0 * c.g)
        .fold(f64::NEG_INFINITY, f64::max);
    let base_step = 1.0 / lipschitz;

    // Feasible start.
    let a_sum: f64 = a.iter().sum();
    let mut x = vec![problem.b() / a_sum; n];

    let iterate = |x: &mut Vec<f64>, step: f64| {
        for (xi, cost) in x.iter_mut().zip(problem.costs()) {
            *xi -= step * cost.gradient(*xi);
        }
        let delta = problem.b() - problem.weighted_sum(x);
        for (xi, &ai) in x.iter_mut().zip(a) {
            *xi += delta * ai / a_norm_sq;
        }
    };

    for _ in 0..fixed_iters {
        iterate(&mut x, base_step);
    }
    for k in 1..=tail_iters {
        iterate(&mut x, base_step / k as f64);
    }
    x
}

#[test]
fn oracle_matches_projected_gradient_on_quadratics() {
    for seed in 0..25u64 {
        let mut s = Stream::keyed(&[seed, 0xFACE]);
        let n = 2 + (s.next_u64() % 9) as usize;
        let costs: Vec<CostModel> = (0..n)
            .map(|_| CostModel::new(s.next_in(0.1, 2.0), s.next_in(-5.0, 5.0)).unwrap())
            .collect();
        let a: Vec<f64> = (0..n).map(|_| s.next_in(0.5, 2.0)).collect();
        let b = s.next_in(-10.0, 10.0);
        let problem = Problem::new(costs, a, b).unwrap();

        let kkt = solve_kkt(&problem, ORACLE_TOL).unwrap();
        let reference = projected_gradient(&problem, 2_000, 0);

        let dist: f64 = kkt
            .x_star
            .iter()
            .zip(&reference)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(
            dist <= 1e-6 * (1.0 + norm),
            "seed {seed}: |x_oracle - x_pg| = {dist}"
        );
    }
}

/// The 40-agent instance of the standard experiment preset: penalized
/// quadratic costs with g in (0, 0.05], c in (0, 5], box [20, 100], unit
/// weights, demand 2500, cost seed 11.
fn preset_instance() -> Problem {
    let costs = random_costs(
        40,
        (0.0, 0.05),
        (0.0, 5.0),
        Some(BoxPenalty::new(20.0, 100.0).unwrap()),
        11,
    )
    .unwrap();
    Problem::new(costs, vec![1.0; 40], 2500.0).unwrap()
}

#[test]
fn preset_optimum_is_pinned() {
    let problem = preset_instance();
    let kkt = solve_kkt(&problem, ORACLE_TOL).unwrap();

    // Golden values frozen from this oracle, cross-checked below by the
    // independent projected-gradient solve.
    const F_STAR: f64 = 6.716531452718358e3;
    const PHI_STAR: f64 = 3.56224072489962e0;
    assert!(
        (kkt.f_star - F_STAR).abs() <= 1e-9 * (1.0 + F_STAR.abs()),
        "F* drifted: {:.12e}",
        kkt.f_star
    );
    assert!(
        (kkt.phi_star - PHI_STAR).abs() <= 1e-9 * (1.0 + PHI_STAR.abs()),
        "phi* drifted: {:.12e}",
        kkt.phi_star
    );

    assert!(problem.feasibility_drift(&kkt.x_star).abs() <= 10.0 * ORACLE_TOL);

    let reference = projected_gradient(&problem, 20_000, 50_000);
    let f_ref = problem.total_cost(&reference);
    assert!(
        (f_ref - kkt.f_star).abs() <= 1e-6 * (1.0 + kkt.f_star.abs()),
        "projected gradient disagrees: {f_ref} vs {}",
        kkt.f_star
    );
}
