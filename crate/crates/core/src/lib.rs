//! Exact maximum-weight cluster subgraphs (equivalently, minimum-weight
//! cluster vertex deletion) on chordal graphs.
//!
//! The solver works over a clique tree: [`chordal`] recognizes chordal
//! graphs and builds the tree, [`dp`] runs the bottom-up dynamic program,
//! and [`supermodular`] maximizes the supermodular inner objective. Interval
//! graphs have a faster path in [`interval`]. [`oracle`] holds brute-force
//! ground truth.

pub mod chordal;
pub mod dp;
pub mod fixtures;
pub mod format;
pub mod gen;
pub mod graph;
pub mod interval;
pub mod oracle;
pub mod report;
pub mod selftest;
pub mod solution;
pub mod solver;
pub mod supermodular;

pub use chordal::{
    build_clique_tree, clique_tree_of, maximal_cliques, recognize_chordal, try_clique_path,
    validate_clique_tree, CliquePath, CliquePathOutcome, CliqueTree, EliminationOrdering,
    NotChordal,
};
pub use dp::{solve_chordal, ChordalOutcome, DpError, SolveOptions};
pub use graph::{GraphError, VertexId, VertexSet, Weight, WeightedGraph};
pub use interval::{solve_interval, IntervalDpTable};
pub use solution::{validate_solution, ClusterSolution, SolutionViolation};
pub use solver::{solve, Algorithm, AlgorithmChoice, SolveError, Solved};
