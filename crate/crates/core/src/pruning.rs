//! Degree-based pruning.
//!
//! [`weak_prune`] is the rule covered by the running-time analysis.
//! [`strong_prune`] is the edge-counting rule used by practical solvers; on
//! graphs of minimum degree two it fires whenever the weak rule does (see
//! [`weak_implies_strong`]).

use crate::reduction::Instance;

/// `k < 0` or `k*D - sum_{v in F} (d(v) - 2) < 0`.
///
/// With minimum degree at least two, `true` means there is no feedback
/// vertex set of size at most `k` avoiding `F`.
pub fn weak_prune(inst: &Instance, max_degree: usize) -> bool {
    inst.k < 0 || weak_condition(inst.k, max_degree, inst.undeletable_excess())
}

fn weak_condition(k: i64, max_degree: usize, undeletable_excess: i64) -> bool {
    k * max_degree as i64 - undeletable_excess < 0
}

/// `k < 0`, or `|E| - (sum of the k' largest deletable degrees) >= |V| - k'`
/// with `k' = min(k, |V \ F|)` and `|V| > k'`.
///
/// Deleting any `k'` deletable vertices removes at most the sum of their
/// degrees in edges, so the residual graph on `|V| - k'` vertices keeps at
/// least as many edges as vertices and cannot be a forest. A solution of
/// size below `k'` extends to one of size exactly `k'`, so this refutes all
/// sizes up to `k`.
pub fn strong_prune(inst: &Instance) -> bool {
    if inst.k < 0 {
        return true;
    }
    let mut degrees: Vec<usize> = inst
        .deletable()
        .map(|v| inst.graph.degree(v).unwrap())
        .collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let take = (inst.k as usize).min(degrees.len());
    strong_condition(
        inst.graph.vertex_count(),
        inst.graph.edge_count(),
        &degrees[..take],
    )
}

fn strong_condition(vertices: usize, edges: usize, removed_degrees: &[usize]) -> bool {
    let k = removed_degrees.len();
    if vertices <= k {
        return false;
    }
    let removed: usize = removed_degrees.iter().sum();
    edges as i64 - removed as i64 >= (vertices - k) as i64
}

/// Evaluates both sides of the weak-to-strong implication on one state, with
/// the strong side computed from the `k` highest deletable degrees.
///
/// Returns `(weak fires, strong holds)`. Requires `0 <= k <= |V \ F|`.
pub fn weak_implies_strong(inst: &Instance) -> (bool, bool) {
    let mut degrees: Vec<usize> = inst
        .deletable()
        .map(|v| inst.graph.degree(v).unwrap())
        .collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let k = inst.k as usize;
    assert!(inst.k >= 0 && k <= degrees.len());
    let top = degrees.first().copied().unwrap_or(0);
    let weak = weak_condition(inst.k, top, inst.undeletable_excess());
    let removed: i64 = degrees[..k].iter().map(|&d| d as i64).sum();
    let strong =
        inst.graph.edge_count() as i64 - removed >= inst.graph.vertex_count() as i64 - inst.k;
    (weak, strong)
}
