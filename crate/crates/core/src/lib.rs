//! Exact solver for Short Path Packing: are there `k` internally
//! vertex-disjoint `s`-`t` paths of length at most `ell`?
//!
//! The solver is a search tree driven by a greedy path builder. When the
//! greedy run breaks, one of three branching rules inserts a previously used
//! vertex as a checkpoint that some path must visit.

pub mod flows;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod search;

pub use graph::{Graph, ParseError, Path, Vertex};
pub use model::{validate_solution, Solution, SppInstance, SppcInstance};
pub use search::{solve, Decision, SolveResult, SolveStats, SolverConfig};
