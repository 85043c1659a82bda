use fixtrace_core::pipeline::{run_algorithm, PipelineConfig, ALL_ALGORITHMS};
use fixtrace_core::solvers::{solve_alg1_dijkstra, solve_alg1_sweep, solve_alg2_with, solve_baseline, Alg2Options};
use fixtrace_core::synth::{gen_comb, gen_random_graph, gen_star};
use fixtrace_core::verify::{brute_force_enclosing_cycle, brute_force_shortest_path};
use fixtrace_core::{build_cut_graph, build_graph, replicate, verify_cycle, Algorithm, ReplicationRange};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn costs_are_ordered_and_bounded_by_the_oracles(n in 6usize..=14, seed in 0u64..1_000_000) {
        let g = gen_random_graph(n, seed).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        let base = solve_baseline(&cut);
        let a1 = solve_alg1_dijkstra(&cut);
        prop_assert_eq!(a1.as_ref().map(|p| p.d), brute_force_shortest_path(&cut).unwrap().map(|p| p.d));
        let Some(a1) = a1 else {
            prop_assert!(base.is_none());
            return Ok(());
        };
        let tilde = replicate(&cut, ReplicationRange::Wide);
        let a2 = solve_alg2_with(&tilde, &a1, Alg2Options::default());
        prop_assert!(a2.d <= a1.d);
        if let Some(b) = &base {
            prop_assert!(a1.d <= b.d);
        }
        // Algorithm II returns some simple enclosing cycle, so the global
        // optimum bounds it from below.
        let best = brute_force_enclosing_cycle(&g, None).unwrap().unwrap();
        prop_assert!(best.d <= a2.d);
        for p in [Some(&a1), Some(&a2), base.as_ref()].into_iter().flatten() {
            prop_assert!(verify_cycle(p, &g.query).unwrap().passed(), "{} rejected", p.algorithm);
        }
    }

    #[test]
    fn sweep_matches_dijkstra(n in 4usize..=16, seed in 0u64..1_000_000) {
        let g = gen_random_graph(n, seed).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        let sweep = solve_alg1_sweep(&cut, cut.nodes.len() + 1);
        prop_assert_eq!(sweep.map(|p| p.d), solve_alg1_dijkstra(&cut).map(|p| p.d));
    }

    #[test]
    fn alg2_is_deterministic(n in 6usize..=16, seed in 0u64..1_000_000) {
        let g = gen_random_graph(n, seed).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        if let Some(a1) = solve_alg1_dijkstra(&cut) {
            let tilde = replicate(&cut, ReplicationRange::Wide);
            let x = solve_alg2_with(&tilde, &a1, Alg2Options::default());
            let y = solve_alg2_with(&tilde, &a1, Alg2Options::default());
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn narrow_replication_also_verifies(n in 6usize..=16, seed in 0u64..1_000_000) {
        let g = gen_random_graph(n, seed).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        if let Some(a1) = solve_alg1_dijkstra(&cut) {
            let tilde = replicate(&cut, ReplicationRange::Narrow);
            let a2 = solve_alg2_with(&tilde, &a1, Alg2Options::default());
            prop_assert!(a2.d <= a1.d);
            prop_assert!(verify_cycle(&a2, &g.query).unwrap().passed());
        }
    }
}

#[test]
fn pass_limit_is_respected() {
    let inst = gen_comb(4, 3).unwrap();
    let g = build_graph(&inst.fragments, inst.query).unwrap();
    let cut = build_cut_graph(&g).unwrap();
    let a1 = solve_alg1_dijkstra(&cut).unwrap();
    let tilde = replicate(&cut, ReplicationRange::Wide);
    let capped = solve_alg2_with(&tilde, &a1, Alg2Options { max_passes: Some(1) });
    assert_eq!(capped.passes, Some(1));
    assert!(capped.d <= a1.d);
    assert!(verify_cycle(&capped, &g.query).unwrap().passed());
}

#[test]
fn comb_alg2_recovers_the_whole_shape() {
    let inst = gen_comb(3, 7).unwrap();
    let g = build_graph(&inst.fragments, inst.query).unwrap();
    let cfg = PipelineConfig::default();
    let a1 = run_algorithm(&g, Algorithm::Alg1Dijkstra, &cfg).unwrap();
    let a2 = run_algorithm(&g, Algorithm::Alg2, &cfg).unwrap();
    assert_eq!(a2.cost(), Some(inst.ground_truth.d));
    assert!(a2.cost() < a1.cost());
}

#[test]
fn stars_cost_the_same_under_every_solver() {
    for seed in 0..10 {
        let inst = gen_star(4 + seed as usize % 4, 20.0, 30.0, 2, seed).unwrap();
        let g = build_graph(&inst.fragments, inst.query).unwrap();
        for alg in ALL_ALGORITHMS {
            let run = run_algorithm(&g, alg, &PipelineConfig::default()).unwrap();
            assert_eq!(run.cost(), Some(inst.ground_truth.d), "seed {seed} {alg}");
        }
    }
}
