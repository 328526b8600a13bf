mod common;

use common::{brute_optimum, brute_public_hosting, default_params, random_graph, rng};
use hcplace::exact::exact_solve;
use hcplace::metaheuristics::{
    bpso_solve, bpso_solve_traced, ga_solve, greedy_solve, position_from_draws, repair_placement,
    sigmoid, velocity_update_with, BpsoConfig, ConstraintHandling, GaConfig, Particle,
};
use hcplace::model::{CostParams, Placement};
use proptest::prelude::*;
use rand::Rng;

fn small_bpso(seed: u64) -> BpsoConfig {
    BpsoConfig {
        swarm_size: 20,
        max_iters: 60,
        ..BpsoConfig::default()
    }
    .with_seed(seed)
}

fn small_ga(seed: u64) -> GaConfig {
    GaConfig {
        population: 30,
        generations: 40,
        ..GaConfig::default()
    }
    .with_seed(seed)
}

#[test]
fn heuristics_are_feasible_and_bounded_by_oracle() {
    let mut r = rng(21);
    for case in 0..60 {
        let n = r.gen_range(3..=10);
        let p = r.gen_range(0.1..0.9);
        let graph = random_graph(&mut r, n, p);
        let params = default_params(graph.hq_from_fraction(r.gen_range(0.0..=1.0)).unwrap());
        let (optimum, _) = brute_optimum(&graph, &params).unwrap();
        let results = [
            bpso_solve(&graph, &params, &small_bpso(case)).unwrap(),
            ga_solve(&graph, &params, &small_ga(case)).unwrap(),
            greedy_solve(&graph, &params).unwrap(),
        ];
        for result in results {
            let bits = result.placement.to_u8();
            assert!(result.feasible, "{} case {case}", result.solver_name);
            assert!(brute_public_hosting(&graph, &bits) >= params.hq);
            assert!(
                result.total() >= optimum - 1e-9 * optimum.max(1.0),
                "{} beat the optimum",
                result.solver_name
            );
        }
    }
}

#[test]
fn penalty_mode_still_returns_feasible_placements() {
    let mut r = rng(22);
    for seed in 0..20 {
        let graph = random_graph(&mut r, 9, 0.5);
        let params = default_params(graph.hq_from_fraction(0.6).unwrap());
        let bpso = BpsoConfig {
            repair: ConstraintHandling::Penalty,
            ..small_bpso(seed)
        };
        let ga = GaConfig {
            repair: ConstraintHandling::Penalty,
            ..small_ga(seed)
        };
        assert!(bpso_solve(&graph, &params, &bpso).unwrap().feasible);
        assert!(ga_solve(&graph, &params, &ga).unwrap().feasible);
    }
}

#[test]
fn same_seed_same_outcome() {
    let mut r = rng(23);
    let graph = random_graph(&mut r, 14, 0.4);
    let params = default_params(graph.hq_from_fraction(0.5).unwrap());
    let cfg = BpsoConfig::default().with_seed(7);
    assert!(bpso_solve(&graph, &params, &cfg)
        .unwrap()
        .same_outcome(&bpso_solve(&graph, &params, &cfg).unwrap()));
    let cfg = GaConfig::default().with_seed(7);
    assert!(ga_solve(&graph, &params, &cfg)
        .unwrap()
        .same_outcome(&ga_solve(&graph, &params, &cfg).unwrap()));
}

#[test]
fn gbest_never_increases_and_velocity_stays_clamped() {
    let mut r = rng(24);
    for seed in 0..10 {
        let graph = random_graph(&mut r, 13, 0.5);
        let params = default_params(graph.hq_from_fraction(0.3).unwrap());
        let cfg = BpsoConfig::default().with_seed(seed);
        let (result, trace) = bpso_solve_traced(&graph, &params, &cfg).unwrap();
        assert!(trace.gbest_history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(trace.gbest_history.len() as u64, result.iterations + 1);
        assert!(trace.max_abs_velocity <= cfg.v_max);
        assert!((trace.gbest_history.last().unwrap() - result.total()).abs() < 1e-9);
    }
}

#[test]
fn bpso_within_ten_percent_on_random_batch() {
    let mut r = rng(25);
    let mut within = 0;
    for seed in 0..100 {
        let n = r.gen_range(5..=15);
        let p = r.gen_range(0.2..0.8);
        let graph = random_graph(&mut r, n, p);
        let params = default_params(graph.hq_from_fraction(r.gen_range(0.1..=0.9)).unwrap());
        let optimum = exact_solve(&graph, &params).unwrap().total();
        let found = bpso_solve(&graph, &params, &BpsoConfig::default().with_seed(seed))
            .unwrap()
            .total();
        if found <= 1.10 * optimum + 1e-9 {
            within += 1;
        }
    }
    assert!(within >= 90, "only {within}/100 within 10%");
}

#[test]
fn greedy_uses_at_most_n_squared_evaluations() {
    let mut r = rng(26);
    for _ in 0..20 {
        let n = r.gen_range(1..=20);
        let graph = random_graph(&mut r, n, 0.3);
        let result = greedy_solve(&graph, &default_params(graph.total_hosting())).unwrap();
        assert!(result.evaluations <= (n * n) as u64);
        assert_eq!(result.placement, Placement::all_public(n));
    }
}

#[test]
fn infeasible_instances_are_errors_for_heuristics() {
    let mut r = rng(27);
    let graph = random_graph(&mut r, 6, 0.5);
    let params = default_params(graph.total_hosting() + 0.5);
    assert!(bpso_solve(&graph, &params, &BpsoConfig::default()).is_err());
    assert!(ga_solve(&graph, &params, &GaConfig::default()).is_err());
    assert!(greedy_solve(&graph, &params).is_err());
}

proptest! {
    #[test]
    fn sigmoid_is_a_probability(v in -1e6f64..1e6) {
        let s = sigmoid(v);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s + sigmoid(-v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigmoid_strictly_inside_unit_interval_for_clamped_velocities(v in -4.0f64..=4.0) {
        let s = sigmoid(v);
        prop_assert!(s > 0.0 && s < 1.0);
    }

    #[test]
    fn repair_is_feasible_and_idempotent(seed in 0u64..500, frac in 0.0f64..=1.0, coin in 0.0f64..1.0) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=12);
        let graph = random_graph(&mut r, n, 0.4);
        let params = default_params(graph.hq_from_fraction(frac).unwrap());
        let start = Placement::new((0..n).map(|_| r.gen_bool(coin)).collect());
        let once = repair_placement(&graph, &start, &params).unwrap();
        prop_assert!(brute_public_hosting(&graph, &once.to_u8()) >= params.hq);
        prop_assert_eq!(&repair_placement(&graph, &once, &params).unwrap(), &once);
        // Repair only ever adds public services.
        for d in 0..n {
            prop_assert!(!start.is_public(d) || once.is_public(d));
        }
    }

    #[test]
    fn velocity_update_respects_clamp(
        bits in prop::collection::vec(any::<bool>(), 1..16),
        seed in any::<u64>(),
        w in 0.0f64..2.0,
        v_max in 0.5f64..8.0,
    ) {
        let n = bits.len();
        let mut r = rng(seed);
        let mut draw = |lo: f64, hi: f64| (0..n).map(|_| r.gen_range(lo..=hi)).collect::<Vec<f64>>();
        let particle = Particle {
            position: Placement::new(bits.clone()),
            velocity: draw(-v_max, v_max),
            pbest_position: Placement::new(bits.iter().map(|b| !b).collect()),
            pbest_cost: 0.0,
        };
        let gbest = Placement::new(bits.iter().enumerate().map(|(i, b)| b ^ (i % 2 == 0)).collect());
        let cfg = BpsoConfig { v_max, ..BpsoConfig::default() };
        let (r1, r2) = (draw(0.0, 1.0), draw(0.0, 1.0));
        let v = velocity_update_with(&particle, &gbest, w, &cfg, &r1, &r2).unwrap();
        prop_assert!(v.iter().all(|x| x.abs() <= v_max));
        let r3 = draw(0.0, 1.0);
        let p = position_from_draws(&v, &r3);
        for d in 0..n {
            prop_assert_eq!(p.is_public(d), sigmoid(v[d]) > r3[d]);
        }
    }
}

#[test]
fn scaling_coefficients_leaves_seeded_bpso_path_unchanged() {
    // Uniform scaling preserves every comparison, so the same seed follows the same path.
    let mut r = rng(28);
    let graph = random_graph(&mut r, 12, 0.5);
    let hq = graph.hq_from_fraction(0.5).unwrap();
    let cfg = BpsoConfig::default().with_seed(3);
    let base = bpso_solve(&graph, &default_params(hq), &cfg).unwrap();
    let scaled = bpso_solve(
        &graph,
        &CostParams::new(80.0, 40.0, 20.0, hq).unwrap(),
        &cfg,
    )
    .unwrap();
    assert_eq!(base.placement, scaled.placement);
}
