//! Exact per-vertex reachability counts for directed graphs, and the
//! reduction from k-CNF satisfiability to reachability counting.
//!
//! The counting problem: for every vertex `v`, report how many other
//! vertices `v` can reach. [`reach`] provides a per-source BFS counter, a
//! bit-parallel transitive-closure counter and a plain reference oracle.
//! [`reduction`] turns a CNF formula into a layered DAG whose reach counts
//! alone decide satisfiability, with [`cnf::brute_force_sat`] as the oracle.

pub mod bench;
pub mod cnf;
pub mod gen;
pub mod graph;
pub mod io;
pub mod reach;
pub mod reduction;

pub use cnf::{brute_force_sat, pad_to_even, CnfFormula, Literal, SatVerdict, Witness};
pub use graph::{condense, is_acyclic, Condensation, Digraph, GraphError, VertexId};
pub use reach::{
    count_bfs_all, count_bitset_closure, count_oracle, reach_targets, Algorithm,
    MemoryBudgetExceeded, ReachCounts, DEFAULT_MEM_BUDGET,
};
pub use reduction::{
    build_reduction, decide_sat, evaluate_clause_side, extract_witness, ReductionError,
    ReductionGraph, Side, VariableSplit, VertexLabel, DEFAULT_SIDE_CAP,
};
