//! Exhaustive minimum feedback vertex set for small graphs.
//!
//! Deliberately naive: subsets of the deletable vertices are tried in order
//! of increasing size, and acyclicity is tested with a standalone
//! union-find over the edge list. Nothing here shares logic with the
//! reductions or the branching search.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::multigraph::{MultiGraph, Vertex};
use crate::solver::Solution;

/// Largest number of deletable vertices the oracle accepts.
pub const ORACLE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} deletable vertices exceed the oracle limit of {ORACLE_LIMIT}")]
    TooLarge(usize),
}

/// Smallest `S` of vertices outside `undeletable` such that `G - S` is a
/// forest, or `None` if even deleting every deletable vertex leaves a cycle.
pub fn brute_force_min_fvs(
    graph: &MultiGraph,
    undeletable: &BTreeSet<Vertex>,
) -> Result<Option<Solution>, OracleError> {
    let candidates: Vec<Vertex> = graph
        .vertices()
        .filter(|v| !undeletable.contains(v))
        .collect();
    if candidates.len() > ORACLE_LIMIT {
        return Err(OracleError::TooLarge(candidates.len()));
    }
    let vertices: Vec<Vertex> = graph.vertices().collect();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .flat_map(|(u, v, m)| {
            let a = vertices.binary_search(&u).unwrap();
            let b = vertices.binary_search(&v).unwrap();
            std::iter::repeat_n((a, b), m as usize)
        })
        .collect();

    for size in 0..=candidates.len() {
        for chosen in candidates.iter().copied().combinations(size) {
            let removed: Vec<bool> = vertices.iter().map(|v| chosen.contains(v)).collect();
            if acyclic_without(vertices.len(), &edges, &removed) {
                let solution = Solution {
                    vertices: chosen.into_iter().collect(),
                };
                assert!(solution.is_valid_for(graph, undeletable));
                return Ok(Some(solution));
            }
        }
    }
    Ok(None)
}

fn acyclic_without(n: usize, edges: &[(usize, usize)], removed: &[bool]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        if removed[a] || removed[b] {
            continue;
        }
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            // covers self-loops and repeated edges as well
            return false;
        }
        parent[ra] = rb;
    }
    true
}
