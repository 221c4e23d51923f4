//! Highest-degree branching with degree-based pruning.
//!
//! Each search node reduces its instance to a fixpoint, prunes, and then
//! branches on a deletable vertex `u` of maximum degree `D`: either `u` is
//! deleted, or `u` is committed to the forest by contracting it together
//! with its undeletable neighbors into one new undeletable vertex.
//!
//! With [`SolverConfig::audit`] set, every node also checks the measure
//! analysis: `mu >= 0` after pruning, no measure increase across reduction
//! bursts, exact measure drops `delta1`/`delta2` into the two children, and
//! `c^-delta1 + c^-delta2 <= 1` at every branch with `D >= 4`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::measure::{self, BranchSignature, MeasureParams, SignatureError};
use crate::multigraph::{MultiGraph, Vertex};
use crate::pruning;
use crate::reduction::{self, Instance, ReduceObserver, ReduceStatus, Rule};

/// Slack allowed on every floating-point measure assertion.
pub const MEASURE_EPS: f64 = 1e-9;

/// Largest deletable set the brute-force subcubic handler will enumerate.
pub const BRUTE_SUBCUBIC_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruneMode {
    /// Only a negative budget refutes a node.
    Off,
    /// `k*D - sum_F (d - 2) < 0`.
    #[default]
    Weak,
    /// The weak rule plus the edge-counting rule over the top-`k` degrees.
    Strong,
}

/// How nodes with `D <= 3` are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubcubicMode {
    /// Keep branching exactly as for `D >= 4`.
    #[default]
    Branch,
    /// Enumerate deletion sets when at most [`BRUTE_SUBCUBIC_LIMIT`]
    /// vertices are deletable, otherwise branch.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildOrder {
    #[default]
    DeleteFirst,
    ContractFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestId,
    /// Most undeletable neighbors, then lowest id.
    MostUndeletableNeighbors,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} {value:?}")]
pub struct UnknownOption {
    kind: &'static str,
    value: String,
}

macro_rules! named_options {
    ($ty:ident, $kind:literal, { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($ty::$variant => $name),+
                }
            }
        }

        impl std::str::FromStr for $ty {
            type Err = UnknownOption;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(UnknownOption { kind: $kind, value: s.to_string() }),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

named_options!(PruneMode, "prune mode", { Off => "off", Weak => "weak", Strong => "strong" });
named_options!(SubcubicMode, "subcubic mode", { Branch => "branch", Brute => "brute" });
named_options!(ChildOrder, "child order", {
    DeleteFirst => "delete-first",
    ContractFirst => "contract-first",
});
named_options!(TieBreak, "tie-break", {
    LowestId => "lowest-id",
    MostUndeletableNeighbors => "most-undeletable",
});

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub prune: PruneMode,
    pub subcubic: SubcubicMode,
    pub child_order: ChildOrder,
    pub tie_break: TieBreak,
    /// Check the measure analysis at every node with these parameters.
    pub audit: Option<MeasureParams>,
}

impl SolverConfig {
    pub fn audited(params: MeasureParams) -> Self {
        Self {
            audit: Some(params),
            ..Self::default()
        }
    }

    /// One-line `key=value` echo of the configuration.
    pub fn describe(&self) -> String {
        format!(
            "prune={} subcubic={} order={} tie-break={} audit={}",
            self.prune,
            self.subcubic,
            self.child_order,
            self.tie_break,
            self.audit.as_ref().map_or("off", |p| p.name()),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PruneCounts {
    pub budget: u64,
    pub weak: u64,
    pub strong: u64,
}

impl PruneCounts {
    pub fn total(&self) -> u64 {
        self.budget + self.weak + self.strong
    }
}

/// Outcome counters of the measure checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureAudit {
    pub mu_checks: u64,
    pub mu_violations: u64,
    pub min_mu: f64,
    /// Nodes that weak pruning would have cut, reached with pruning off.
    pub mu_unpruned: u64,
    pub burst_checks: u64,
    pub burst_violations: u64,
    pub max_burst_increase: f64,
    pub neutral_checks: u64,
    pub neutral_violations: u64,
    pub max_neutral_drift: f64,
    pub branch_checks: u64,
    pub branch_violations: u64,
    pub max_branch_value: f64,
    /// Branch nodes with `D <= 3`, outside the branching inequality's scope.
    pub subcubic_branches: u64,
    pub child_checks: u64,
    pub child_violations: u64,
    pub max_child_mismatch: f64,
}

impl Default for MeasureAudit {
    fn default() -> Self {
        Self {
            mu_checks: 0,
            mu_violations: 0,
            min_mu: f64::INFINITY,
            mu_unpruned: 0,
            burst_checks: 0,
            burst_violations: 0,
            max_burst_increase: f64::NEG_INFINITY,
            neutral_checks: 0,
            neutral_violations: 0,
            max_neutral_drift: 0.0,
            branch_checks: 0,
            branch_violations: 0,
            max_branch_value: f64::NEG_INFINITY,
            subcubic_branches: 0,
            child_checks: 0,
            child_violations: 0,
            max_child_mismatch: 0.0,
        }
    }
}

impl MeasureAudit {
    pub fn violations(&self) -> u64 {
        self.mu_violations
            + self.burst_violations
            + self.neutral_violations
            + self.branch_violations
            + self.child_violations
    }

    pub fn merge(&mut self, other: &MeasureAudit) {
        self.mu_checks += other.mu_checks;
        self.mu_violations += other.mu_violations;
        self.min_mu = self.min_mu.min(other.min_mu);
        self.mu_unpruned += other.mu_unpruned;
        self.burst_checks += other.burst_checks;
        self.burst_violations += other.burst_violations;
        self.max_burst_increase = self.max_burst_increase.max(other.max_burst_increase);
        self.neutral_checks += other.neutral_checks;
        self.neutral_violations += other.neutral_violations;
        self.max_neutral_drift = self.max_neutral_drift.max(other.max_neutral_drift);
        self.branch_checks += other.branch_checks;
        self.branch_violations += other.branch_violations;
        self.max_branch_value = self.max_branch_value.max(other.max_branch_value);
        self.subcubic_branches += other.subcubic_branches;
        self.child_checks += other.child_checks;
        self.child_violations += other.child_violations;
        self.max_child_mismatch = self.max_child_mismatch.max(other.max_child_mismatch);
    }

    fn check_mu(&mut self, value: f64) {
        self.mu_checks += 1;
        self.min_mu = self.min_mu.min(value);
        if value < -MEASURE_EPS {
            self.mu_violations += 1;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub branch_nodes: u64,
    pub infeasible: u64,
    pub prunes: PruneCounts,
    /// Applications of rules 1-5, indexed by `rule id - 1`.
    pub reductions: [u64; 5],
    pub depth_max: usize,
    /// Present when the search ran with a measure audit.
    pub audit: Option<MeasureAudit>,
}

impl SearchStats {
    /// Largest `c^-delta1 + c^-delta2` seen at an audited branch with `D >= 4`.
    pub fn max_branch_value(&self) -> Option<f64> {
        self.audit
            .as_ref()
            .filter(|a| a.branch_checks > 0)
            .map(|a| a.max_branch_value)
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.branch_nodes += other.branch_nodes;
        self.infeasible += other.infeasible;
        self.prunes.budget += other.prunes.budget;
        self.prunes.weak += other.prunes.weak;
        self.prunes.strong += other.prunes.strong;
        for (mine, theirs) in self.reductions.iter_mut().zip(other.reductions) {
            *mine += theirs;
        }
        self.depth_max = self.depth_max.max(other.depth_max);
        match (&mut self.audit, &other.audit) {
            (Some(mine), Some(theirs)) => mine.merge(theirs),
            (None, Some(theirs)) => self.audit = Some(theirs.clone()),
            _ => {}
        }
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes_expanded={}", self.nodes_expanded)?;
        writeln!(f, "branch_nodes={}", self.branch_nodes)?;
        writeln!(f, "infeasible={}", self.infeasible)?;
        writeln!(
            f,
            "prunes budget={} weak={} strong={}",
            self.prunes.budget, self.prunes.weak, self.prunes.strong
        )?;
        write!(f, "reductions")?;
        for rule in Rule::ALL {
            write!(
                f,
                " rule{}={}",
                rule.id(),
                self.reductions[rule.id() as usize - 1]
            )?;
        }
        writeln!(f)?;
        write!(f, "depth_max={}", self.depth_max)?;
        if let Some(a) = &self.audit {
            writeln!(f)?;
            writeln!(
                f,
                "audit mu checks={} violations={} min={:.12} unpruned={}",
                a.mu_checks, a.mu_violations, a.min_mu, a.mu_unpruned
            )?;
            writeln!(
                f,
                "audit bursts checks={} violations={} max_increase={:.12}",
                a.burst_checks, a.burst_violations, a.max_burst_increase
            )?;
            writeln!(
                f,
                "audit neutral checks={} violations={} max_drift={:.3e}",
                a.neutral_checks, a.neutral_violations, a.max_neutral_drift
            )?;
            writeln!(
                f,
                "audit branch checks={} violations={} max_value={:.12} subcubic={}",
                a.branch_checks, a.branch_violations, a.max_branch_value, a.subcubic_branches
            )?;
            write!(
                f,
                "audit children checks={} violations={} max_mismatch={:.3e}",
                a.child_checks, a.child_violations, a.max_child_mismatch
            )?;
        }
        Ok(())
    }
}

/// A feedback vertex set in ids of the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub vertices: BTreeSet<Vertex>,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Avoids `undeletable` and leaves a forest behind.
    pub fn is_valid_for(&self, graph: &MultiGraph, undeletable: &BTreeSet<Vertex>) -> bool {
        if !self.vertices.is_disjoint(undeletable) {
            return false;
        }
        let mut rest = graph.clone();
        for &v in &self.vertices {
            if rest.delete_vertex(v).is_err() {
                return false;
            }
        }
        rest.is_forest()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("vertex {0} is undeletable or missing")]
    NotDeletable(Vertex),
    #[error("double edge between {0} and undeletable {1}: instance is not reduced")]
    DoubleEdgeToUndeletable(Vertex, Vertex),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// `(D, d, d')` of a branch on `u`: `D = d(u)` and `d` the degrees of the
/// undeletable neighbors of `u`, each joined to `u` by a single edge.
pub fn branch_signature_of(inst: &Instance, u: Vertex) -> Result<BranchSignature, BranchError> {
    if inst.is_undeletable(u) || !inst.graph.contains(u) {
        return Err(BranchError::NotDeletable(u));
    }
    let mut degrees = Vec::new();
    for (w, m) in inst.graph.neighbors(u) {
        if inst.is_undeletable(w) {
            if m >= 2 {
                return Err(BranchError::DoubleEdgeToUndeletable(u, w));
            }
            degrees.push(inst.graph.degree(w).unwrap());
        }
    }
    Ok(BranchSignature::new(
        inst.graph.degree(u).unwrap(),
        degrees,
    )?)
}

/// Searches for a solution of size at most `inst.k` avoiding `inst.undeletable`.
pub fn solve_decision(inst: Instance, config: &SolverConfig) -> (Option<Solution>, SearchStats) {
    let mut search = Search::new(config);
    let found = search.run(inst, 0);
    (found.map(|vertices| Solution { vertices }), search.stats)
}

/// Smallest solution avoiding `undeletable`, found by asking the decision
/// version for `k = 0, 1, 2, ...`. `None` iff `G[undeletable]` has a cycle.
pub fn solve_minimum(
    graph: &MultiGraph,
    undeletable: &BTreeSet<Vertex>,
    config: &SolverConfig,
) -> Result<(Option<Solution>, SearchStats), crate::multigraph::GraphError> {
    let mut stats = SearchStats::default();
    if graph.induced_has_cycle(undeletable) {
        return Ok((None, stats));
    }
    let deletable = graph.vertex_count() - undeletable.len();
    for k in 0..=deletable as i64 {
        let inst = Instance::new(graph.clone(), undeletable.clone(), k)?;
        let (found, run) = solve_decision(inst, config);
        stats.merge(&run);
        if found.is_some() {
            return Ok((found, stats));
        }
    }
    unreachable!("deleting every deletable vertex leaves the forest G[F]")
}

struct Search<'a> {
    config: &'a SolverConfig,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(config: &'a SolverConfig) -> Self {
        let stats = SearchStats {
            audit: config.audit.as_ref().map(|_| MeasureAudit::default()),
            ..SearchStats::default()
        };
        Self { config, stats }
    }

    fn run(&mut self, inst: Instance, depth: usize) -> Option<BTreeSet<Vertex>> {
        self.stats.nodes_expanded += 1;
        self.stats.depth_max = self.stats.depth_max.max(depth);

        let outcome = match (&self.config.audit, &mut self.stats.audit) {
            (Some(params), Some(audit)) => {
                let mut observer = MeasureObserver::new(params, audit);
                reduction::reduce_with(inst, &mut observer)
            }
            _ => reduction::reduce(inst),
        };
        for entry in &outcome.trace {
            self.stats.reductions[entry.rule.id() as usize - 1] += 1;
        }
        let inst = outcome.instance;
        match outcome.status {
            ReduceStatus::Infeasible => {
                self.stats.infeasible += 1;
                return None;
            }
            ReduceStatus::Reduced if inst.graph.is_empty() => {
                return Some(inst.partial_solution);
            }
            _ => {}
        }

        let max_degree = inst.max_deletable_degree();
        if self.pruned(&inst, max_degree) {
            return None;
        }
        if let (Some(params), Some(audit)) = (&self.config.audit, &mut self.stats.audit) {
            // Nonnegativity is a consequence of the weak pruning condition, so
            // nodes that only survive because pruning is off are counted apart.
            if pruning::weak_prune(&inst, max_degree) {
                audit.mu_unpruned += 1;
            } else {
                audit.check_mu(measure::mu(&inst, max_degree, params));
            }
        }

        if outcome.status == ReduceStatus::SubcubicBase
            && self.config.subcubic == SubcubicMode::Brute
            && inst.deletable().count() <= BRUTE_SUBCUBIC_LIMIT
        {
            return brute_force_deletion(&inst);
        }

        let u = self.pick_branch_vertex(&inst, max_degree);
        let sig = branch_signature_of(&inst, u).expect("reduced instance");
        let mut neighborhood: BTreeSet<Vertex> = inst
            .graph
            .neighbors(u)
            .map(|(w, _)| w)
            .filter(|w| inst.is_undeletable(*w))
            .collect();
        neighborhood.insert(u);

        let mut deleted = inst.clone();
        deleted
            .take_into_solution(u)
            .expect("branch vertex is deletable");
        let parent = inst.clone();
        let mut contracted = inst;
        contracted
            .contract_into_undeletable(&neighborhood)
            .expect("neighborhood lies in the graph");

        if let (Some(params), Some(audit)) = (&self.config.audit, &mut self.stats.audit) {
            audit_branch(audit, params, &sig, &parent, &deleted, &contracted);
        }
        drop(parent);
        self.stats.branch_nodes += 1;

        let children = match self.config.child_order {
            ChildOrder::DeleteFirst => [deleted, contracted],
            ChildOrder::ContractFirst => [contracted, deleted],
        };
        for child in children {
            if let Some(found) = self.run(child, depth + 1) {
                return Some(found);
            }
        }
        None
    }

    fn pruned(&mut self, inst: &Instance, max_degree: usize) -> bool {
        let prunes = &mut self.stats.prunes;
        if inst.k < 0 {
            prunes.budget += 1;
            return true;
        }
        if self.config.prune == PruneMode::Off {
            return false;
        }
        if pruning::weak_prune(inst, max_degree) {
            prunes.weak += 1;
            return true;
        }
        if self.config.prune == PruneMode::Strong && pruning::strong_prune(inst) {
            prunes.strong += 1;
            return true;
        }
        false
    }

    fn pick_branch_vertex(&self, inst: &Instance, max_degree: usize) -> Vertex {
        let candidates = inst
            .deletable()
            .filter(|&v| inst.graph.degree(v).unwrap() == max_degree);
        match self.config.tie_break {
            TieBreak::LowestId => candidates.min(),
            TieBreak::MostUndeletableNeighbors => candidates
                .map(|v| {
                    let f = inst
                        .graph
                        .neighbors(v)
                        .filter(|(w, _)| inst.is_undeletable(*w))
                        .count();
                    (std::cmp::Reverse(f), v)
                })
                .min()
                .map(|(_, v)| v),
        }
        .expect("a reduced nonempty instance has a deletable vertex")
    }
}

fn audit_branch(
    audit: &mut MeasureAudit,
    params: &MeasureParams,
    sig: &BranchSignature,
    parent: &Instance,
    deleted: &Instance,
    contracted: &Instance,
) {
    let big_d = sig.max_degree();
    let parent_mu = measure::mu(parent, big_d, params);
    let expectations = [
        (deleted, measure::delta1(sig, params)),
        (contracted, measure::delta2(sig, params)),
    ];
    for (child, drop) in expectations {
        let mismatch = (parent_mu - drop - measure::mu(child, big_d, params)).abs();
        audit.child_checks += 1;
        audit.max_child_mismatch = audit.max_child_mismatch.max(mismatch);
        if mismatch > MEASURE_EPS {
            audit.child_violations += 1;
        }
    }
    if big_d >= 4 {
        let value = measure::branch_value(sig, params);
        audit.branch_checks += 1;
        audit.max_branch_value = audit.max_branch_value.max(value);
        if value > 1.0 + MEASURE_EPS {
            audit.branch_violations += 1;
        }
    } else {
        audit.subcubic_branches += 1;
    }
}

/// Smallest deletion set of the deletable vertices within budget.
fn brute_force_deletion(inst: &Instance) -> Option<BTreeSet<Vertex>> {
    let deletable: Vec<Vertex> = inst.deletable().collect();
    let budget = (inst.k.max(0) as usize).min(deletable.len());
    for size in 0..=budget {
        for chosen in itertools::Itertools::combinations(deletable.iter().copied(), size) {
            let mut rest = inst.graph.clone();
            for &v in &chosen {
                rest.delete_vertex(v).unwrap();
            }
            if rest.is_forest() {
                let mut solution = inst.partial_solution.clone();
                solution.extend(chosen);
                return Some(solution);
            }
        }
    }
    None
}

/// Checks measure behaviour across reduction rules.
///
/// A burst starts when rule 2 or 5 fires and extends over the following
/// rule 1 and rule 3 steps; over a burst the measure, evaluated with the `D`
/// in force when the burst started, must not grow. Rules 3 and 4 must leave
/// the measure unchanged.
struct MeasureObserver<'a> {
    params: &'a MeasureParams,
    audit: &'a mut MeasureAudit,
    burst: Option<(usize, f64)>,
    neutral: Option<(usize, f64)>,
}

impl<'a> MeasureObserver<'a> {
    fn new(params: &'a MeasureParams, audit: &'a mut MeasureAudit) -> Self {
        Self {
            params,
            audit,
            burst: None,
            neutral: None,
        }
    }

    fn close_burst(&mut self, inst: &Instance) {
        if let Some((big_d, before)) = self.burst.take() {
            let increase = measure::mu(inst, big_d, self.params) - before;
            self.audit.burst_checks += 1;
            self.audit.max_burst_increase = self.audit.max_burst_increase.max(increase);
            if increase > MEASURE_EPS {
                self.audit.burst_violations += 1;
            }
        }
    }
}

impl ReduceObserver for MeasureObserver<'_> {
    fn before_rule(&mut self, rule: Rule, inst: &Instance) {
        let big_d = inst.max_deletable_degree();
        match rule {
            Rule::UndeletableCycle | Rule::DoubleEdge => {
                self.close_burst(inst);
                self.burst = Some((big_d, measure::mu(inst, big_d, self.params)));
            }
            Rule::ClampMultiplicity => self.close_burst(inst),
            Rule::LowDegree => {}
            Rule::Smooth => {}
        }
        if matches!(rule, Rule::Smooth | Rule::ClampMultiplicity) && big_d > 0 {
            self.neutral = Some((big_d, measure::mu(inst, big_d, self.params)));
        }
    }

    fn after_rule(&mut self, _rule: Rule, inst: &Instance) {
        if let Some((big_d, before)) = self.neutral.take() {
            let drift = (measure::mu(inst, big_d, self.params) - before).abs();
            self.audit.neutral_checks += 1;
            self.audit.max_neutral_drift = self.audit.max_neutral_drift.max(drift);
            if drift > MEASURE_EPS {
                self.audit.neutral_violations += 1;
            }
        }
    }

    fn finished(&mut self, inst: &Instance) {
        self.close_burst(inst);
    }
}
