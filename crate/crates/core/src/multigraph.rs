//! Undirected multigraph with edge multiplicities and self-loops.
//!
//! Parallel edges are stored as a count per unordered pair, and self-loops as
//! a count on the vertex itself. A self-loop contributes two to the degree of
//! its endpoint. Iteration order is by ascending vertex id everywhere, which
//! keeps every algorithm built on top of this type deterministic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

/// Stable opaque vertex identifier.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("vertex {0} already exists")]
    DuplicateVertex(Vertex),
    #[error("vertex {vertex} cannot be smoothed: degree {degree}, self-loops {loops}")]
    NotSmoothable {
        vertex: Vertex,
        degree: usize,
        loops: u32,
    },
    #[error("cannot contract an empty vertex set")]
    EmptyContraction,
    #[error("contraction target {0} is a vertex outside the contracted set")]
    FreshInUse(Vertex),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    // adj[u][v] = multiplicity of {u, v}; adj[u][u] = number of self-loops on u.
    adj: BTreeMap<Vertex, BTreeMap<Vertex, u32>>,
    edge_count: usize,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on the vertices `0..n` with no edges.
    pub fn with_vertices(n: u32) -> Self {
        Self {
            adj: (0..n).map(|v| (v, BTreeMap::new())).collect(),
            edge_count: 0,
        }
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.adj.insert(v, BTreeMap::new());
        Ok(())
    }

    /// Adds one copy of the edge `{u, v}`; `u == v` adds a self-loop.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.add_edges(u, v, 1)
    }

    pub fn add_edges(&mut self, u: Vertex, v: Vertex, count: u32) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if count == 0 {
            return Ok(());
        }
        *self.adj.get_mut(&u).unwrap().entry(v).or_insert(0) += count;
        if u != v {
            *self.adj.get_mut(&v).unwrap().entry(u).or_insert(0) += count;
        }
        self.edge_count += count as usize;
        Ok(())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Total edge multiplicity, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    /// Distinct neighbors of `u` other than `u` itself, with multiplicities.
    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.adj
            .get(&u)
            .into_iter()
            .flat_map(move |row| row.iter().filter(move |(&v, _)| v != u))
            .map(|(&v, &m)| (v, m))
    }

    /// Multiplicity of `{u, v}`; for `u == v` the number of self-loops.
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> u32 {
        self.adj
            .get(&u)
            .and_then(|row| row.get(&v))
            .copied()
            .unwrap_or(0)
    }

    pub fn loops(&self, u: Vertex) -> u32 {
        self.multiplicity(u, u)
    }

    /// Degree counting multiplicities; a self-loop counts twice.
    pub fn degree(&self, u: Vertex) -> Result<usize, GraphError> {
        let row = self.adj.get(&u).ok_or(GraphError::UnknownVertex(u))?;
        Ok(row
            .iter()
            .map(|(&v, &m)| if v == u { 2 * m as usize } else { m as usize })
            .sum())
    }

    /// Every edge once as `(u, v, multiplicity)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, row)| row.range(u..).map(move |(&v, &m)| (u, v, m)))
    }

    pub fn delete_vertex(&mut self, u: Vertex) -> Result<(), GraphError> {
        let row = self.adj.remove(&u).ok_or(GraphError::UnknownVertex(u))?;
        for (v, m) in row {
            self.edge_count -= m as usize;
            if v != u {
                self.adj.get_mut(&v).unwrap().remove(&u);
            }
        }
        Ok(())
    }

    /// Replaces a degree-2 vertex by an edge between its two neighbors.
    ///
    /// The new edge may be parallel to an existing one, or a self-loop when
    /// both edges of `u` go to the same neighbor. Returns the two endpoints.
    pub fn smooth_degree2(&mut self, u: Vertex) -> Result<(Vertex, Vertex), GraphError> {
        let degree = self.degree(u)?;
        let loops = self.loops(u);
        if degree != 2 || loops != 0 {
            return Err(GraphError::NotSmoothable {
                vertex: u,
                degree,
                loops,
            });
        }
        let ends: Vec<Vertex> = self
            .neighbors(u)
            .flat_map(|(v, m)| std::iter::repeat_n(v, m as usize))
            .collect();
        let (a, b) = (ends[0], ends[1]);
        self.delete_vertex(u)?;
        self.add_edge(a, b)?;
        Ok((a, b))
    }

    /// Sets the multiplicity of `{u, v}` for `u != v`.
    pub fn set_multiplicity(&mut self, u: Vertex, v: Vertex, m: u32) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        let old = self.multiplicity(u, v);
        if m == 0 {
            self.adj.get_mut(&u).unwrap().remove(&v);
            self.adj.get_mut(&v).unwrap().remove(&u);
        } else {
            self.adj.get_mut(&u).unwrap().insert(v, m);
            self.adj.get_mut(&v).unwrap().insert(u, m);
        }
        self.edge_count = self.edge_count + m as usize - old as usize;
        Ok(())
    }

    /// Identifies all vertices of `set` into the single vertex `fresh`.
    ///
    /// Edges leaving the set are redirected to `fresh` with their
    /// multiplicity. Inside the set, the edges of one spanning forest of
    /// `G[set]` are contracted away and every other internal edge copy (and
    /// every existing self-loop) becomes a self-loop on `fresh`, so
    /// `degree(fresh) = sum of degrees - 2 * (|set| - components(G[set]))`.
    /// `fresh` may be a member of `set` or a new id.
    pub fn contract_set(
        &mut self,
        set: &BTreeSet<Vertex>,
        fresh: Vertex,
    ) -> Result<(), GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptyContraction);
        }
        for &s in set {
            self.check(s)?;
        }
        if self.contains(fresh) && !set.contains(&fresh) {
            return Err(GraphError::FreshInUse(fresh));
        }

        let members: Vec<Vertex> = set.iter().copied().collect();
        let mut dsu = Dsu::new(members.len());
        let index = |v: Vertex| members.binary_search(&v).ok();
        let mut external: BTreeMap<Vertex, u32> = BTreeMap::new();
        let mut loops = 0u32;
        for (i, &s) in members.iter().enumerate() {
            for (&v, &m) in &self.adj[&s] {
                if v == s {
                    loops += m;
                } else if let Some(j) = index(v) {
                    // each internal pair is seen from both sides; count it once
                    if j > i {
                        loops += m;
                        if dsu.union(i, j) {
                            loops -= 1;
                        }
                    }
                } else {
                    *external.entry(v).or_insert(0) += m;
                }
            }
        }

        for &s in &members {
            self.delete_vertex(s)?;
        }
        self.add_vertex(fresh)?;
        self.add_edges(fresh, fresh, loops)?;
        for (v, m) in external {
            self.add_edges(fresh, v, m)?;
        }
        Ok(())
    }

    /// True iff there is no self-loop, no parallel edge and no cycle.
    pub fn is_forest(&self) -> bool {
        let all: BTreeSet<Vertex> = self.vertices().collect();
        self.forest_labels(&all).is_some()
    }

    /// True iff the induced sub-multigraph on `set` is not a forest.
    /// Ids in `set` that are not vertices of the graph are ignored.
    pub fn induced_has_cycle(&self, set: &BTreeSet<Vertex>) -> bool {
        self.forest_labels(set).is_none()
    }

    /// If `G[set]` is a forest, labels each vertex of `set` with the smallest
    /// vertex id of its tree. Returns `None` when `G[set]` contains a cycle.
    pub fn forest_labels(&self, set: &BTreeSet<Vertex>) -> Option<BTreeMap<Vertex, Vertex>> {
        let members: Vec<Vertex> = set.iter().copied().filter(|&v| self.contains(v)).collect();
        let mut dsu = Dsu::new(members.len());
        for (i, &u) in members.iter().enumerate() {
            for (&v, &m) in self.adj[&u].range(u..) {
                let Ok(j) = members.binary_search(&v) else {
                    continue;
                };
                if i == j || m >= 2 || !dsu.union(i, j) {
                    return None;
                }
            }
        }
        let mut tree_min: BTreeMap<usize, Vertex> = BTreeMap::new();
        let roots: Vec<usize> = (0..members.len()).map(|i| dsu.find(i)).collect();
        for (&root, &v) in roots.iter().zip(&members) {
            tree_min.entry(root).or_insert(v);
        }
        Some(
            roots
                .iter()
                .zip(&members)
                .map(|(root, &v)| (v, tree_min[root]))
                .collect(),
        )
    }

    /// Copy of the sub-multigraph induced by `set`.
    pub fn induced(&self, set: &BTreeSet<Vertex>) -> MultiGraph {
        let mut g = MultiGraph::new();
        for &v in set.iter().filter(|&&v| self.contains(v)) {
            g.add_vertex(v).unwrap();
        }
        for (u, v, m) in self.edges() {
            if g.contains(u) && g.contains(v) {
                g.add_edges(u, v, m).unwrap();
            }
        }
        g
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let members: Vec<Vertex> = self.vertices().collect();
        let mut dsu = Dsu::new(members.len());
        for (u, v, _) in self.edges() {
            let i = members.binary_search(&u).unwrap();
            let j = members.binary_search(&v).unwrap();
            dsu.union(i, j);
        }
        (0..members.len()).filter(|&i| dsu.find(i) == i).count()
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: u32, edges: &[(Vertex, Vertex)]) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v).unwrap();
        }
        g
    }

    fn triangle() -> MultiGraph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn k4() -> MultiGraph {
        graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    #[test]
    fn degree_counts_multiplicity_and_loops() {
        let t = triangle();
        assert!((0..3).all(|v| t.degree(v) == Ok(2)));
        let double = graph(2, &[(0, 1), (0, 1)]);
        assert_eq!(double.degree(0), Ok(2));
        assert_eq!(double.degree(1), Ok(2));
        let looped = graph(1, &[(0, 0)]);
        assert_eq!(looped.degree(0), Ok(2));
        assert_eq!(looped.edge_count(), 1);
        assert_eq!(t.degree(7), Err(GraphError::UnknownVertex(7)));
    }

    #[test]
    fn delete_vertex_examples() {
        let mut t = triangle();
        t.delete_vertex(1).unwrap();
        assert_eq!(t, graph(3, &[(0, 2)]).tap_delete(1));

        let mut g = k4();
        g.delete_vertex(3).unwrap();
        assert_eq!(g, triangle());

        let mut double = graph(2, &[(0, 1), (0, 1)]);
        double.delete_vertex(0).unwrap();
        assert_eq!(double.degree(1), Ok(0));
        assert_eq!(double.edge_count(), 0);
        assert_eq!(double.delete_vertex(0), Err(GraphError::UnknownVertex(0)));
    }

    trait TapDelete {
        fn tap_delete(self, v: Vertex) -> Self;
    }

    impl TapDelete for MultiGraph {
        fn tap_delete(mut self, v: Vertex) -> Self {
            self.delete_vertex(v).unwrap();
            self
        }
    }

    #[test]
    fn smoothing_path_triangle_and_coincident_neighbors() {
        let mut path = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.smooth_degree2(1), Ok((0, 2)));
        assert_eq!(path.multiplicity(0, 2), 1);
        assert_eq!(path.edge_count(), 1);

        let mut t = triangle();
        t.smooth_degree2(1).unwrap();
        assert_eq!(t.multiplicity(0, 2), 2);
        assert_eq!(t.degree(0), Ok(2));

        let mut g = graph(2, &[(0, 1), (0, 1), (0, 0)]);
        g.smooth_degree2(1).unwrap();
        assert_eq!(g.loops(0), 2);
        assert_eq!(g.degree(0), Ok(4));

        let mut bad = k4();
        assert!(matches!(
            bad.smooth_degree2(0),
            Err(GraphError::NotSmoothable { degree: 3, .. })
        ));
        let mut lone_loop = graph(1, &[(0, 0)]);
        assert!(lone_loop.smooth_degree2(0).is_err());
    }

    #[test]
    fn contract_star_matches_branch_degree() {
        // u = 0 with degree 4: two edges to undeletable neighbors 1 and 2
        // (degree 3 each) and two edges to 3 and 4.
        let mut g = graph(
            9,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 5),
                (1, 6),
                (2, 7),
                (2, 8),
            ],
        );
        let before: usize = [0, 1, 2].iter().map(|&v| g.degree(v).unwrap()).sum();
        assert_eq!(before, 10);
        g.contract_set(&set(&[0, 1, 2]), 100).unwrap();
        assert_eq!(g.degree(100), Ok(4 + (3 - 2) + (3 - 2)));
        assert_eq!(g.loops(100), 0);
        assert!(!g.contains(0) && !g.contains(1) && !g.contains(2));
    }

    #[test]
    fn contract_double_edge_leaves_one_loop() {
        let mut g = graph(2, &[(0, 1), (0, 1)]);
        g.contract_set(&set(&[0, 1]), 5).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.loops(5), 1);
        assert_eq!(g.degree(5), Ok(2));
        assert!(!g.is_forest());
    }

    #[test]
    fn contract_single_vertex_relabels() {
        let mut g = triangle();
        g.contract_set(&set(&[2]), 9).unwrap();
        assert_eq!(g, graph(2, &[(0, 1)]).with_vertex(9, &[0, 1]));
        let mut same = triangle();
        same.contract_set(&set(&[2]), 2).unwrap();
        assert_eq!(same, triangle());
    }

    #[test]
    fn contract_errors() {
        let mut g = triangle();
        assert_eq!(
            g.contract_set(&BTreeSet::new(), 9),
            Err(GraphError::EmptyContraction)
        );
        assert_eq!(
            g.contract_set(&set(&[0, 1]), 2),
            Err(GraphError::FreshInUse(2))
        );
        assert_eq!(
            g.contract_set(&set(&[0, 7]), 9),
            Err(GraphError::UnknownVertex(7))
        );
        assert_eq!(g, triangle());
    }

    impl MultiGraph {
        fn with_vertex(mut self, v: Vertex, nbrs: &[Vertex]) -> Self {
            self.add_vertex(v).unwrap();
            for &w in nbrs {
                self.add_edge(v, w).unwrap();
            }
            self
        }
    }

    #[test]
    fn forest_checks() {
        let path = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(path.is_forest());
        assert!(!graph(2, &[(0, 1), (0, 1)]).is_forest());
        assert!(!triangle().is_forest());
        assert!(!graph(1, &[(0, 0)]).is_forest());
        assert!(MultiGraph::new().is_forest());
    }

    #[test]
    fn induced_cycle_checks() {
        let t = triangle();
        assert!(!t.induced_has_cycle(&set(&[0, 1])));
        assert!(t.induced_has_cycle(&set(&[0, 1, 2])));
        let double = graph(2, &[(0, 1), (0, 1)]);
        assert!(double.induced_has_cycle(&set(&[0, 1])));
    }

    #[test]
    fn forest_labels_name_tree_minimum() {
        let g = graph(6, &[(3, 1), (1, 4), (2, 5)]);
        let labels = g.forest_labels(&set(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(labels[&3], 1);
        assert_eq!(labels[&4], 1);
        assert_eq!(labels[&5], 2);
        assert_eq!(labels[&2], 2);
    }

    #[test]
    fn clamp_multiplicity() {
        let mut g = graph(2, &[(0, 1), (0, 1), (0, 1)]);
        g.set_multiplicity(0, 1, 2).unwrap();
        assert_eq!(g.multiplicity(1, 0), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(0), Ok(2));
    }
}
