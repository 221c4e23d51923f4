//! Reduction rules 1-5 applied to a fixpoint in priority order.
//!
//! A rule fires only when no lower-numbered rule applies. Witnesses are picked
//! by lowest vertex id so that traces are reproducible.

use std::collections::BTreeSet;
use std::fmt;

use crate::multigraph::{GraphError, MultiGraph, Vertex};

/// Search state `(G, F, k)` plus the deletions already committed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: MultiGraph,
    /// Vertices that may not be deleted.
    pub undeletable: BTreeSet<Vertex>,
    /// Remaining budget; may go negative.
    pub k: i64,
    /// Vertices deleted so far, in ids of the original input.
    pub partial_solution: BTreeSet<Vertex>,
    next_fresh: Vertex,
}

impl Instance {
    pub fn new(
        graph: MultiGraph,
        undeletable: BTreeSet<Vertex>,
        k: i64,
    ) -> Result<Self, GraphError> {
        if let Some(&v) = undeletable.iter().find(|&&v| !graph.contains(v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        let next_fresh = graph.max_vertex().map_or(0, |v| v + 1);
        Ok(Self {
            graph,
            undeletable,
            k,
            partial_solution: BTreeSet::new(),
            next_fresh,
        })
    }

    pub fn is_undeletable(&self, v: Vertex) -> bool {
        self.undeletable.contains(&v)
    }

    pub fn deletable(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph
            .vertices()
            .filter(|v| !self.undeletable.contains(v))
    }

    fn degree(&self, v: Vertex) -> usize {
        self.graph.degree(v).expect("vertex of the instance graph")
    }

    /// `D`: the highest degree among deletable vertices, 0 if there are none.
    pub fn max_deletable_degree(&self) -> usize {
        self.deletable().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `sum over v in F of (d(v) - 2)`.
    pub fn undeletable_excess(&self) -> i64 {
        self.undeletable
            .iter()
            .map(|&v| self.degree(v) as i64 - 2)
            .sum()
    }

    /// Deletes a deletable vertex, charging it to the budget.
    pub fn take_into_solution(&mut self, v: Vertex) -> Result<(), GraphError> {
        debug_assert!(!self.is_undeletable(v));
        self.graph.delete_vertex(v)?;
        self.k -= 1;
        self.partial_solution.insert(v);
        Ok(())
    }

    /// Removes a vertex without charging the budget (rule 1).
    fn discard(&mut self, v: Vertex) {
        self.graph
            .delete_vertex(v)
            .expect("vertex of the instance graph");
        self.undeletable.remove(&v);
    }

    /// Contracts `set` into a new undeletable vertex and returns its id.
    pub fn contract_into_undeletable(
        &mut self,
        set: &BTreeSet<Vertex>,
    ) -> Result<Vertex, GraphError> {
        let fresh = self.next_fresh;
        self.graph.contract_set(set, fresh)?;
        self.next_fresh += 1;
        for v in set {
            self.undeletable.remove(v);
        }
        self.undeletable.insert(fresh);
        Ok(fresh)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Delete a vertex of degree at most one.
    LowDegree = 1,
    /// Delete a deletable vertex closing a cycle with the undeletable set.
    UndeletableCycle = 2,
    /// Smooth a degree-2 vertex.
    Smooth = 3,
    /// Clamp an edge multiplicity to two.
    ClampMultiplicity = 4,
    /// Delete a deletable vertex on a double edge to a vertex of degree <= 3.
    DoubleEdge = 5,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::LowDegree,
        Rule::UndeletableCycle,
        Rule::Smooth,
        Rule::ClampMultiplicity,
        Rule::DoubleEdge,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    /// Rules 2 and 5 spend budget.
    pub fn deletes_into_solution(self) -> bool {
        matches!(self, Rule::UndeletableCycle | Rule::DoubleEdge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: Rule,
    pub vertex: Vertex,
    /// Second endpoint when the rule acted on an edge.
    pub other: Option<Vertex>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule={} vertex={}", self.rule.id(), self.vertex)?;
        if let Some(w) = self.other {
            write!(f, " other={w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReduceStatus {
    /// No rule applies and `D >= 4`, or the graph is empty.
    Reduced,
    /// No solution can exist: a cycle inside `F`, or the budget went negative.
    Infeasible,
    /// No rule applies and `D <= 3` on a nonempty graph.
    SubcubicBase,
}

#[derive(Debug, Clone)]
pub struct ReduceOutcome {
    pub status: ReduceStatus,
    pub instance: Instance,
    pub trace: Vec<TraceEntry>,
}

/// Hooks invoked around every rule application.
pub trait ReduceObserver {
    fn before_rule(&mut self, _rule: Rule, _inst: &Instance) {}
    fn after_rule(&mut self, _rule: Rule, _inst: &Instance) {}
    fn finished(&mut self, _inst: &Instance) {}
}

impl ReduceObserver for () {}

pub fn reduce(inst: Instance) -> ReduceOutcome {
    reduce_with(inst, &mut ())
}

pub fn reduce_with<O: ReduceObserver>(mut inst: Instance, observer: &mut O) -> ReduceOutcome {
    let mut trace = Vec::new();
    loop {
        if inst.graph.induced_has_cycle(&inst.undeletable) {
            observer.finished(&inst);
            return ReduceOutcome {
                status: ReduceStatus::Infeasible,
                instance: inst,
                trace,
            };
        }
        let Some((rule, vertex, other)) = next_rule(&inst) else {
            break;
        };
        observer.before_rule(rule, &inst);
        match rule {
            Rule::LowDegree => inst.discard(vertex),
            Rule::UndeletableCycle | Rule::DoubleEdge => inst
                .take_into_solution(vertex)
                .expect("witness is a deletable vertex"),
            Rule::Smooth => {
                inst.graph
                    .smooth_degree2(vertex)
                    .expect("witness has degree two");
                inst.undeletable.remove(&vertex);
            }
            Rule::ClampMultiplicity => inst
                .graph
                .set_multiplicity(vertex, other.unwrap(), 2)
                .expect("witness edge exists"),
        }
        observer.after_rule(rule, &inst);
        trace.push(TraceEntry {
            rule,
            vertex,
            other,
        });
    }
    observer.finished(&inst);

    let status = if inst.k < 0 {
        ReduceStatus::Infeasible
    } else if inst.graph.is_empty() {
        ReduceStatus::Reduced
    } else if inst.max_deletable_degree() <= 3 {
        ReduceStatus::SubcubicBase
    } else {
        ReduceStatus::Reduced
    };
    ReduceOutcome {
        status,
        instance: inst,
        trace,
    }
}

fn next_rule(inst: &Instance) -> Option<(Rule, Vertex, Option<Vertex>)> {
    if let Some(v) = rule1_applicable(inst) {
        return Some((Rule::LowDegree, v, None));
    }
    if let Some(v) = rule2_applicable(inst) {
        return Some((Rule::UndeletableCycle, v, None));
    }
    if let Some(v) = rule3_applicable(inst) {
        return Some((Rule::Smooth, v, None));
    }
    if let Some((u, w)) = rule4_applicable(inst) {
        return Some((Rule::ClampMultiplicity, u, Some(w)));
    }
    if let Some((u, w)) = rule5_applicable(inst) {
        return Some((Rule::DoubleEdge, u, Some(w)));
    }
    None
}

/// Lowest vertex of degree at most one.
pub fn rule1_applicable(inst: &Instance) -> Option<Vertex> {
    inst.graph.vertices().find(|&v| inst.degree(v) <= 1)
}

/// Lowest deletable `u` such that `G[F + u]` has a cycle: `u` carries a
/// self-loop, a double edge into `F`, or two edges into one tree of `G[F]`.
/// Returns `None` when `G[F]` itself is cyclic.
pub fn rule2_applicable(inst: &Instance) -> Option<Vertex> {
    let labels = inst.graph.forest_labels(&inst.undeletable)?;
    inst.deletable().find(|&u| {
        if inst.graph.loops(u) > 0 {
            return true;
        }
        let mut trees = BTreeSet::new();
        inst.graph.neighbors(u).any(|(w, m)| match labels.get(&w) {
            Some(&tree) => m >= 2 || !trees.insert(tree),
            None => false,
        })
    })
}

/// Lowest vertex of degree exactly two without a self-loop.
pub fn rule3_applicable(inst: &Instance) -> Option<Vertex> {
    inst.graph
        .vertices()
        .find(|&v| inst.degree(v) == 2 && inst.graph.loops(v) == 0)
}

/// Lowest edge `(u, w)`, `u < w`, with multiplicity above two.
pub fn rule4_applicable(inst: &Instance) -> Option<(Vertex, Vertex)> {
    inst.graph
        .edges()
        .find(|&(u, w, m)| u != w && m > 2)
        .map(|(u, w, _)| (u, w))
}

/// Lowest deletable `u` with a double edge `uw` where `d(w) <= 3`.
pub fn rule5_applicable(inst: &Instance) -> Option<(Vertex, Vertex)> {
    inst.deletable().find_map(|u| {
        inst.graph
            .neighbors(u)
            .find(|&(w, m)| m >= 2 && inst.degree(w) <= 3)
            .map(|(w, _)| (u, w))
    })
}
