//! Approximation algorithms for the two-dimensional geometric knapsack problem
//! with `d` additional vector (weight) constraints.
//!
//! The crate is layered bottom-up:
//!
//! * [`model`]: items, instances, placements, containers and the feasibility
//!   validators every other module leans on.
//! * [`vmg`]: Vector-Max-GAP (generalized assignment with global weight
//!   constraints): an exact DP for integral data and a PTAS built on top of it.
//! * [`nfdh`]: Next-Fit-Decreasing-Height shelf packing and the profit-density
//!   greedy for area containers.
//! * [`container`]: the container packing problem and its reduction to
//!   Vector-Max-GAP.
//! * [`solver`]: candidate container sizes, container configuration search and
//!   the end-to-end knapsack solver.
//! * [`oracle`]: exponential exact solvers used as ground truth at small scale.
//! * [`io`], [`generate`], [`svg`], [`report`]: file formats and tooling used by
//!   the `gvks` binary.

pub mod container;
pub mod error;
pub mod generate;
pub mod io;
pub mod model;
pub mod nfdh;
pub mod oracle;
pub mod report;
pub mod solver;
pub mod svg;
pub mod vmg;

pub use error::{Error, Result};
pub use model::{
    Container, ContainerKind, Item, KnapsackInstance, Packing, Placement, SolverParams, TOL,
};
