//! Expected values computed by the brute-force oracle and checked against the
//! solver, plus cross-checks of small named graphs.

use std::collections::BTreeSet;

use fvs_core::instances::{gen_gnm, gen_planted, parse};
use fvs_core::oracle::brute_force_min_fvs;
use fvs_core::reduction::Instance;
use fvs_core::solver::{solve_decision, solve_minimum, PruneMode, SolverConfig};
use fvs_core::MultiGraph;

fn petersen() -> MultiGraph {
    let mut g = MultiGraph::with_vertices(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5).unwrap();
        g.add_edge(i, i + 5).unwrap();
        g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
    }
    g
}

fn complete(n: u32) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn decide(g: &MultiGraph, k: i64, cfg: &SolverConfig) -> Option<usize> {
    let inst = Instance::new(g.clone(), BTreeSet::new(), k).unwrap();
    solve_decision(inst, cfg).0.map(|s| s.len())
}

#[test]
fn petersen_needs_three() {
    let g = petersen();
    let oracle = brute_force_min_fvs(&g, &BTreeSet::new()).unwrap().unwrap();
    assert_eq!(oracle.len(), 3);
    for prune in [PruneMode::Off, PruneMode::Weak, PruneMode::Strong] {
        let cfg = SolverConfig {
            prune,
            ..SolverConfig::default()
        };
        assert_eq!(decide(&g, 2, &cfg), None);
        assert_eq!(decide(&g, 3, &cfg), Some(3));
        let (s, _) = solve_minimum(&g, &BTreeSet::new(), &cfg).unwrap();
        assert!(s.unwrap().is_valid_for(&g, &BTreeSet::new()));
    }
}

#[test]
fn complete_graphs_need_n_minus_two() {
    for n in 3..=7 {
        let g = complete(n);
        let oracle = brute_force_min_fvs(&g, &BTreeSet::new()).unwrap().unwrap();
        assert_eq!(oracle.len(), n as usize - 2);
        let cfg = SolverConfig::audited(fvs_core::MeasureParams::mc());
        let (s, stats) = solve_minimum(&g, &BTreeSet::new(), &cfg).unwrap();
        assert_eq!(s.unwrap().len(), n as usize - 2);
        assert_eq!(stats.audit.unwrap().violations(), 0);
    }
    assert_eq!(decide(&complete(4), 1, &SolverConfig::default()), None);
}

#[test]
fn gnm_optimum_matches_oracle_per_seed() {
    for seed in 0..40 {
        let g = gen_gnm(8, 12, seed);
        let oracle = brute_force_min_fvs(&g, &BTreeSet::new())
            .unwrap()
            .map(|s| s.len());
        let (s, _) = solve_minimum(&g, &BTreeSet::new(), &SolverConfig::default()).unwrap();
        assert_eq!(s.map(|s| s.len()), oracle, "seed {seed}");
    }
}

#[test]
fn planted_bounds_hold() {
    for seed in 0..10 {
        let (forest, bound) = gen_planted(10, 0, 4, seed);
        assert_eq!(bound, 0);
        assert!(forest.is_forest());
        let (g, bound) = gen_planted(10, 2, 4, seed);
        let (s, _) = solve_minimum(&g, &BTreeSet::new(), &SolverConfig::default()).unwrap();
        assert!(s.unwrap().len() <= bound);
    }
}

#[test]
fn self_loop_on_undeletable_vertex_is_infeasible() {
    let file = parse("p fvs 2 2\ne 1 1\ne 1 2\nf 1\n").unwrap();
    let (s, _) = solve_minimum(&file.graph, &file.undeletable, &SolverConfig::default()).unwrap();
    assert!(s.is_none());
    assert!(brute_force_min_fvs(&file.graph, &file.undeletable)
        .unwrap()
        .is_none());
}
