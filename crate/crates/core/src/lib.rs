//! Exact Feedback Vertex Set on multigraphs.
//!
//! The solver branches on a highest-degree deletable vertex, either deleting
//! it or contracting it into the undeletable set, after exhaustive reduction
//! and optional degree-based pruning. The [`verifier`] module checks the
//! finite inequalities behind the `O*(c^k)` running-time certificate for a
//! given set of measure parameters, and the solver can audit the same
//! measure at run time.

pub mod instances;
pub mod measure;
pub mod multigraph;
pub mod oracle;
pub mod pruning;
pub mod reduction;
pub mod solver;
pub mod verifier;

pub use measure::{BranchSignature, MeasureParams};
pub use multigraph::{GraphError, MultiGraph, Vertex};
pub use oracle::brute_force_min_fvs;
pub use reduction::{reduce, Instance, ReduceOutcome, ReduceStatus, Rule};
pub use solver::{solve_decision, solve_minimum, SearchStats, Solution, SolverConfig};
pub use verifier::{verify_all, VerifyReport};
