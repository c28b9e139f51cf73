use nag_core::{build_cournot, FeasibleSet, GameInstance, Player, SeparableQuadratic};
use nag_network::{build_topology, TopologyKind, WeightMatrix};
use nag_oracle::solve_reference;
use nag_solver::{
    prop2_bounds, run_algorithm1, run_algorithm1_with, run_diminishing_baseline, step_algorithm1,
    step_centralized, theory_constants, RunStatus, SolverConfig, SolverState,
};

/// Two players, `f_i = x_i²` on `[−1, 1]`, so `F_i = 2x_i`.
fn square_game() -> GameInstance {
    let set = FeasibleSet::boxed(vec![-1.0], vec![1.0]).unwrap();
    let player = || Player::new(SeparableQuadratic::new(1.0, vec![0.0]), set.clone());
    GameInstance::new(vec![player(), player()]).unwrap()
}

fn pair_weights() -> WeightMatrix {
    WeightMatrix::from_edges(&build_topology(TopologyKind::Complete, 2).unwrap()).unwrap()
}

fn weights(kind: TopologyKind, n: usize) -> WeightMatrix {
    WeightMatrix::from_edges(&build_topology(kind, n).unwrap()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn hand_stepped_round() {
    let state = SolverState {
        x: vec![1.0, 1.0],
        v: vec![1.0, 1.0],
        iteration: 0,
    };
    let next = step_algorithm1(&state, &square_game(), &pair_weights(), 0.25, 1.0).unwrap();
    assert_eq!(next.x, vec![0.5, 0.5]);
    assert_eq!(next.v, vec![0.5, 0.5]);
    assert_eq!(next.iteration, 1);

    let relaxed = step_algorithm1(&state, &square_game(), &pair_weights(), 0.25, 0.5).unwrap();
    assert_eq!(relaxed.x, vec![0.75, 0.75]);
    assert_eq!(relaxed.v, vec![0.75, 0.75]);
}

#[test]
fn equilibrium_with_consensus_is_a_fixed_point() {
    let game = build_cournot(6, 3, 2, 500.0).unwrap();
    let sol = solve_reference(&game, 1e-13).unwrap();
    let mean = game.aggregate(&sol.x_star).unwrap();
    let state = SolverState {
        x: sol.x_star.clone(),
        v: mean
            .iter()
            .cycle()
            .take(game.stacked_len())
            .copied()
            .collect(),
        iteration: 0,
    };
    let w = weights(TopologyKind::Linear, 6);
    let next = step_algorithm1(&state, &game, &w, 0.05, 0.7).unwrap();
    assert!(close(&next.x, &state.x, 1e-10));
    assert!(close(&next.v, &state.v, 1e-10));
}

#[test]
fn exact_tracking_reduces_to_centralized_step() {
    let game = build_cournot(5, 2, 8, 500.0).unwrap();
    let w = weights(TopologyKind::Log, 5);
    let mut rng = nag_core::UniformStream::new(5);
    let x = game.random_feasible(&mut rng).unwrap();
    let mean = game.aggregate(&x).unwrap();
    let state = SolverState {
        v: mean.iter().cycle().take(x.len()).copied().collect(),
        x: x.clone(),
        iteration: 0,
    };
    let distributed = step_algorithm1(&state, &game, &w, 0.04, 1.0).unwrap();
    let centralized = step_centralized(&x, &game, 0.04).unwrap();
    assert!(close(&distributed.x, &centralized, 1e-12));
}

#[test]
fn centralized_step_examples() {
    let game = square_game();
    assert_eq!(
        step_centralized(&[1.0, 1.0], &game, 0.25).unwrap(),
        vec![0.5, 0.5]
    );
    assert_eq!(
        step_centralized(&[0.3, -0.7], &game, 0.0).unwrap(),
        vec![0.3, -0.7]
    );

    let cournot = build_cournot(4, 2, 1, 500.0).unwrap();
    let sol = solve_reference(&cournot, 1e-13).unwrap();
    let next = step_centralized(&sol.x_star, &cournot, 0.05).unwrap();
    assert!(close(&next, &sol.x_star, 1e-10));
}

#[test]
fn zero_iterations_records_only_the_start() {
    let game = build_cournot(4, 2, 1, 500.0).unwrap();
    let x0 = vec![0.0; game.stacked_len()];
    let trace = run_algorithm1(
        &game,
        &weights(TopologyKind::Complete, 4),
        &SolverConfig::fixed(0.05, 0.9, 0),
        &x0,
        None,
    )
    .unwrap();
    assert_eq!(trace.records.len(), 1);
    assert_eq!(trace.iterations(), 0);
    assert!(trace.step_sizes.is_empty());
}

#[test]
fn averaging_network_decays_geometrically() {
    // σ = 0: two players with exact averaging
    let game = build_cournot(2, 3, 4, 500.0).unwrap();
    let w = pair_weights();
    assert!(w.sigma() < 1e-14);
    let c = game.monotonicity_constants().unwrap();
    let region = prop2_bounds(c.mu, c.lipschitz, w.sigma()).unwrap();
    let alpha = 0.5 * region.alpha_max(1.0);
    let theory = theory_constants(alpha, 1.0, c.mu, c.lipschitz, w.sigma()).unwrap();
    let sol = solve_reference(&game, 1e-13).unwrap();
    let x0 = vec![0.0; game.stacked_len()];
    let trace = run_algorithm1(
        &game,
        &w,
        &SolverConfig::fixed(alpha, 1.0, 300),
        &x0,
        Some(&sol.x_star),
    )
    .unwrap();
    let gaps = trace.gaps();
    for k in 2..gaps.len() {
        assert!(gaps[k] <= gaps[k - 1]);
        // ‖x^k − x*‖² ≤ ρ^k ‖x⁰ − x*‖² with M triangular
        assert!(gaps[k] * gaps[k] <= theory.rho.powi(k as i32) * gaps[0] * gaps[0] * (1.0 + 1e-8));
    }
}

#[test]
fn tracking_sum_and_feasibility_hold_every_iteration() {
    let game = build_cournot(10, 4, 12, 500.0).unwrap();
    let w = weights(TopologyKind::Linear, 10);
    let x0 = vec![100.0; game.stacked_len()];
    let p = game.dim();
    let mut checked = 0;
    run_algorithm1_with(
        &game,
        &w,
        &SolverConfig::fixed(0.08, 0.85, 150),
        &x0,
        None,
        |state| {
            for (sv, sx) in state.column_sums(p) {
                assert!((sv - sx).abs() <= 1e-8 * (1.0 + sx.abs()));
            }
            assert!(game.contains(&state.x, 1e-10));
            checked += 1;
        },
    )
    .unwrap();
    assert_eq!(checked, 151);
}

#[test]
fn distributed_iteration_reaches_the_reference() {
    let game = build_cournot(5, 2, 3, 500.0).unwrap();
    let tol = 1e-12;
    let sol = solve_reference(&game, tol).unwrap();
    let w = weights(TopologyKind::Complete, 5);
    let x0 = vec![0.0; game.stacked_len()];
    let cfg = SolverConfig::fixed(0.05, 0.9, 20_000).with_gap_tolerance(tol);
    let trace = run_algorithm1(&game, &w, &cfg, &x0, None).unwrap();
    assert_eq!(trace.status, RunStatus::Converged);
    let d: f64 = trace
        .final_state
        .x
        .iter()
        .zip(&sol.x_star)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    // both points sit within their residual-implied error bounds of x*
    assert!(d <= 10.0 * sol.error_bound.max(tol), "distance {d:e}");
}

#[test]
fn runs_are_bit_identical() {
    let game = build_cournot(8, 3, 6, 500.0).unwrap();
    let w = weights(TopologyKind::Log, 8);
    let x0 = vec![1.0; game.stacked_len()];
    let cfg = SolverConfig::fixed(0.07, 0.9, 80);
    let a = run_algorithm1(&game, &w, &cfg, &x0, None).unwrap();
    let b = run_algorithm1(&game, &w, &cfg, &x0, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn oversized_steps_do_not_converge() {
    let game = build_cournot(6, 2, 1, 500.0).unwrap();
    let sol = solve_reference(&game, 1e-12).unwrap();
    let w = weights(TopologyKind::Complete, 6);
    let x0 = vec![0.0; game.stacked_len()];
    let cfg = SolverConfig::fixed(50.0, 1.0, 2_000).with_gap_tolerance(1e-6);
    let trace = run_algorithm1(&game, &w, &cfg, &x0, Some(&sol.x_star)).unwrap();
    assert_eq!(trace.status, RunStatus::MaxIterations);
    assert!(trace.final_gap().unwrap() > 1.0);
    assert!(game.contains(&trace.final_state.x, 1e-8));
}

#[test]
fn baseline_schedule_and_vanishing_step() {
    let game = build_cournot(4, 2, 2, 500.0).unwrap();
    let w = weights(TopologyKind::Complete, 4);
    let x0 = vec![3.0; game.stacked_len()];
    let trace = run_diminishing_baseline(&game, &w, 0.4, 25, &x0, None).unwrap();
    assert_eq!(trace.step_sizes.len(), 25);
    for (k, &a) in trace.step_sizes.iter().enumerate() {
        assert_eq!(a, 0.4 / (k + 1) as f64);
    }

    let tiny = run_diminishing_baseline(&game, &w, 1e-12, 1, &x0, None).unwrap();
    let start = game.project(&x0).unwrap();
    assert!(close(&tiny.final_state.x, &start, 1e-9));
}

#[test]
fn baseline_is_slower_than_tuned_fixed_steps() {
    let game = build_cournot(20, 10, 0, 500.0).unwrap();
    let sol = solve_reference(&game, 1e-12).unwrap();
    let w = weights(TopologyKind::Linear, 20);
    let x0 = vec![0.0; game.stacked_len()];
    let fixed = run_algorithm1(
        &game,
        &w,
        &SolverConfig::fixed(0.1, 0.9, 200),
        &x0,
        Some(&sol.x_star),
    )
    .unwrap();
    let baseline = run_diminishing_baseline(&game, &w, 0.1, 200, &x0, Some(&sol.x_star)).unwrap();
    assert_eq!(fixed.records[0].gap, baseline.records[0].gap);
    assert!(baseline.final_gap().unwrap() > fixed.final_gap().unwrap());
}

#[test]
fn certificate_bounds_every_step() {
    let game = build_cournot(8, 3, 10, 500.0).unwrap();
    let sol = solve_reference(&game, 1e-13).unwrap();
    let c = game.monotonicity_constants().unwrap();
    let x0 = vec![0.0; game.stacked_len()];
    for kind in TopologyKind::ALL {
        let w = weights(kind, 8);
        let region = prop2_bounds(c.mu, c.lipschitz, w.sigma()).unwrap();
        let beta = 0.5 * region.beta_max;
        let alpha = 0.5 * region.alpha_max(beta);
        let theory = theory_constants(alpha, beta, c.mu, c.lipschitz, w.sigma()).unwrap();
        assert!(theory.is_certified());
        let trace = run_algorithm1(
            &game,
            &w,
            &SolverConfig::fixed(alpha, beta, 200),
            &x0,
            Some(&sol.x_star),
        )
        .unwrap();
        for pair in trace.records.windows(2) {
            let bound = theory.apply(pair[0].zeta().unwrap());
            let next = pair[1].zeta().unwrap();
            for j in 0..2 {
                assert!(
                    next[j] <= bound[j] * (1.0 + 1e-8),
                    "{kind}: k={}, {next:?} vs {bound:?}",
                    pair[0].iteration
                );
            }
        }
    }
}
