mod common;

use common::{brute_cost, brute_optimum, brute_public_hosting, default_params, random_graph, rng};
use hcplace::exact::{exact_solve, exact_solve_bnb, DEFAULT_MAX_NODES};
use hcplace::model::{is_feasible, CostParams, Placement, SbaGraph};
use rand::Rng;

#[test]
fn agrees_with_brute_force_oracle() {
    let mut r = rng(11);
    for case in 0..150 {
        let n = r.gen_range(1..=10);
        let p = r.gen_range(0.0..1.0);
        let graph = random_graph(&mut r, n, p);
        let frac = if case % 10 == 0 {
            0.0
        } else {
            r.gen_range(0.0..=1.0)
        };
        let params = default_params(graph.hq_from_fraction(frac).unwrap());
        let (best, bits) = brute_optimum(&graph, &params).unwrap();
        for result in [
            exact_solve(&graph, &params).unwrap(),
            exact_solve_bnb(&graph, &params).unwrap(),
        ] {
            assert!(result.feasible);
            assert!(
                (result.total() - best).abs() <= 1e-9 * best.max(1.0),
                "case {case}: {} vs {best}",
                result.total()
            );
            assert_eq!(
                result.placement.to_u8(),
                bits,
                "case {case}: tie-break differs"
            );
        }
    }
}

#[test]
fn optimality_witness_random_sampling() {
    let mut r = rng(12);
    for _ in 0..10 {
        let n = r.gen_range(8..=15);
        let graph = random_graph(&mut r, n, 0.4);
        let params = default_params(graph.hq_from_fraction(r.gen_range(0.1..0.9)).unwrap());
        let optimum = exact_solve(&graph, &params).unwrap().total();
        for _ in 0..1000 {
            let bits: Vec<u8> = (0..n).map(|_| r.gen_range(0..=1)).collect();
            if brute_public_hosting(&graph, &bits) >= params.hq {
                assert!(brute_cost(&graph, &bits, &params).3 >= optimum - 1e-9);
            }
        }
    }
}

#[test]
fn repeated_calls_are_bit_identical() {
    let mut r = rng(13);
    let graph = random_graph(&mut r, 12, 0.5);
    let params = default_params(graph.hq_from_fraction(0.4).unwrap());
    let a = exact_solve(&graph, &params).unwrap();
    let b = exact_solve(&graph, &params).unwrap();
    assert!(a.same_outcome(&b));
    let c = exact_solve_bnb(&graph, &params).unwrap();
    let d = exact_solve_bnb(&graph, &params).unwrap();
    assert!(c.same_outcome(&d));
}

#[test]
fn infeasible_detection() {
    let mut r = rng(14);
    let graph = random_graph(&mut r, 8, 0.5);
    let params = default_params(graph.total_hosting() + 1.0);
    let result = exact_solve(&graph, &params).unwrap();
    assert!(!result.feasible);
    assert_eq!(result.placement, Placement::all_public(8));
    assert!(brute_optimum(&graph, &params).is_none());
    for mask in 0u64..256 {
        assert!(!is_feasible(&graph, &Placement::from_mask(mask, 8), &params).unwrap());
    }
    assert!(!exact_solve_bnb(&graph, &params).unwrap().feasible);
}

#[test]
fn optimum_is_monotone_in_hq() {
    let mut r = rng(15);
    for _ in 0..5 {
        let graph = random_graph(&mut r, 12, 0.5);
        let mut previous = 0.0;
        for i in 0..=10 {
            let params = default_params(graph.hq_from_fraction(i as f64 / 10.0).unwrap());
            let total = exact_solve(&graph, &params).unwrap().total();
            assert!(total >= previous - 1e-9);
            previous = total;
        }
    }
}

#[test]
fn argmin_invariant_under_uniform_scaling() {
    let mut r = rng(16);
    for _ in 0..10 {
        let graph = random_graph(&mut r, 11, 0.5);
        let hq = graph.hq_from_fraction(r.gen_range(0.1..0.9)).unwrap();
        let base = exact_solve(&graph, &CostParams::new(40.0, 20.0, 10.0, hq).unwrap()).unwrap();
        for k in [0.5, 2.0, 10.0] {
            let scaled = CostParams::new(40.0 * k, 20.0 * k, 10.0 * k, hq).unwrap();
            assert_eq!(
                exact_solve(&graph, &scaled).unwrap().placement,
                base.placement
            );
            assert_eq!(
                exact_solve_bnb(&graph, &scaled).unwrap().placement,
                base.placement
            );
        }
    }
}

#[test]
fn full_threshold_forces_all_public() {
    let mut r = rng(17);
    let graph = random_graph(&mut r, 9, 0.5);
    let params = default_params(graph.total_hosting());
    let result = exact_solve(&graph, &params).unwrap();
    assert_eq!(result.placement, Placement::all_public(9));
    let expected = brute_cost(&graph, &[1; 9], &params).3;
    assert!((result.total() - expected).abs() < 1e-9 * expected);
}

#[test]
fn bnb_prunes() {
    let mut r = rng(18);
    let graph = random_graph(&mut r, 16, 0.3);
    let params = default_params(graph.hq_from_fraction(0.2).unwrap());
    let full = exact_solve(&graph, &params).unwrap();
    let bnb = exact_solve_bnb(&graph, &params).unwrap();
    assert_eq!(full.placement, bnb.placement);
    assert!(
        bnb.evaluations < full.evaluations / 4,
        "bnb {} vs full {}",
        bnb.evaluations,
        full.evaluations
    );
}

#[test]
fn guard_default_is_thirty() {
    assert_eq!(DEFAULT_MAX_NODES, 30);
    let graph = SbaGraph::from_parts(&[1.0; 31], &[]).unwrap();
    assert!(exact_solve(&graph, &default_params(0.0)).is_err());
}
