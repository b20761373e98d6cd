//! Exact and heuristic solvers for graph-connected clique partitioning.
//!
//! Given an attributed graph (vertices carrying binary feature vectors plus an
//! unweighted relation graph), the problem is to split the vertices into
//! clusters that each induce a connected subgraph while minimizing the total
//! intra-cluster pairwise cost.
//!
//! The crate provides:
//!
//! * [`graph`]: attributed graphs, vertex sets, partitions and the cost rule.
//! * [`generator`]: the two-group synthetic instance generator.
//! * [`lp`]: a small dense simplex / branch-and-bound kernel with lazy cut
//!   callbacks, used for master LPs and pricing MILPs.
//! * [`pricing`]: the connected single-clique pricing problem, with flow,
//!   arborescence, auxiliary-node and relaxation MILP models plus an exact
//!   combinatorial search.
//! * [`heuristics`]: the shrink contraction and the multi-start random shrink.
//! * [`bnp`]: the branch-and-price driver and its truncated matheuristic mode.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to get a
//! wall-clock [`clock::StdClock`].

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bnp;
pub mod clock;
pub mod generator;
pub mod graph;
pub mod heuristics;
pub mod lp;
mod math;
pub mod pricing;
#[cfg(test)]
mod testutil;

pub use graph::{AttributedGraph, Cost, GraphError, Partition, VertexSet};

/// Primal/dual feasibility tolerance shared by the LP kernel and the callers
/// that interpret its output.
pub const EPS_FEAS: f64 = 1e-6;

/// Integrality tolerance for branch-and-bound and master LP solutions.
pub const EPS_INT: f64 = 1e-6;
