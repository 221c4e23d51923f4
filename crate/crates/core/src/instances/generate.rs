//! Seeded random instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multigraph::{MultiGraph, Vertex};

/// `m` edges drawn uniformly with replacement from the unordered pairs of
/// `n` distinct vertices. Repeated draws become parallel edges.
pub fn gen_gnm(n: u32, m: usize, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gnm_with(&mut rng, n, m)
}

fn gnm_with(rng: &mut ChaCha8Rng, n: u32, m: usize) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    if n < 2 {
        return g;
    }
    for _ in 0..m {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        g.add_edge(u, v).unwrap();
    }
    g
}

/// A random forest on `n_forest` vertices plus `k_extra` vertices with
/// `extra_degree` random edges each into the forest. Deleting the extra
/// vertices leaves the forest, so the optimum is at most `k_extra`, which is
/// returned alongside the graph.
pub fn gen_planted(
    n_forest: u32,
    k_extra: u32,
    extra_degree: u32,
    seed: u64,
) -> (MultiGraph, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::with_vertices(n_forest + k_extra);
    for v in 1..n_forest {
        // mostly attach to an earlier vertex; occasionally start a new tree
        if rng.random_bool(0.9) {
            let parent = rng.random_range(0..v);
            g.add_edge(parent, v).unwrap();
        }
    }
    if n_forest > 0 {
        for extra in n_forest..n_forest + k_extra {
            for _ in 0..extra_degree {
                let target = rng.random_range(0..n_forest);
                g.add_edge(extra, target).unwrap();
            }
        }
    }
    (g, k_extra as usize)
}

/// Bounds for [`gen_small_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallInstanceShape {
    pub max_vertices: u32,
    pub max_edges: usize,
    pub max_undeletable: usize,
}

impl Default for SmallInstanceShape {
    fn default() -> Self {
        Self {
            max_vertices: 12,
            max_edges: 20,
            max_undeletable: 3,
        }
    }
}

/// A random multigraph within `shape` and an undeletable set inducing a
/// forest.
pub fn gen_small_instance(seed: u64, shape: SmallInstanceShape) -> (MultiGraph, BTreeSet<Vertex>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=shape.max_vertices);
    let m = rng.random_range(0..=shape.max_edges);
    let g = gnm_with(&mut rng, n, m);

    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(&mut rng);
    let wanted = rng.random_range(0..=shape.max_undeletable.min(n as usize));
    let mut undeletable = BTreeSet::new();
    for v in order {
        if undeletable.len() == wanted {
            break;
        }
        undeletable.insert(v);
        if g.induced_has_cycle(&undeletable) {
            undeletable.remove(&v);
        }
    }
    (g, undeletable)
}
