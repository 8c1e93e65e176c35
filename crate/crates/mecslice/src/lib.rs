//! Resilient, latency-aware placement of primary/backup network slices onto
//! multi-access edge computing (MEC) servers in a multi-connectivity 5G network.
//!
//! A slice request arrives through two base stations (master and secondary).
//! Its primary slice is served from an MEC facility reachable from the master
//! within the service latency budget; a dedicated backup slice is served from
//! a *different* facility reachable from the secondary, so that the request
//! survives server failures and even the loss of an entire facility. Placement
//! minimizes a weighted sum of facility activation, server activation and
//! traffic forwarding costs.
//!
//! The crate provides:
//!
//! - [`topology`]: SNDlib topology ingestion, shortest-path delay matrices,
//!   and k-means / closeness-centrality MEC site selection.
//! - [`model`]: problem instances (sites, requests, cost weights), placements
//!   with their binary indicator views, the cost function and the constraint
//!   checker.
//! - [`solver`]: a branch-and-bound exact solver (multi- and
//!   single-connectivity), a genetic-algorithm metaheuristic, and greedy /
//!   NSP-proxy / baseline comparators.
//! - [`eval`]: resource usage, service availability under server and facility
//!   failures, and multi-connectivity throughput.
//! - [`experiment`]: reproducible method sweeps that emit CSV result tables.
//!
//! Start with the runnable programs under `examples/`; each one demonstrates
//! a major capability end to end. The `mecslice` binary wraps the same
//! library surface behind `topo`, `solve`, `validate` and `sweep` subcommands.

pub mod eval;
pub mod experiment;
pub mod model;
pub mod solver;
pub mod topology;

pub use model::{
    CostBreakdown, CostWeights, Instance, MecSite, Placement, ServiceType, SliceRequest, Vnf,
};
pub use solver::Method;
pub use topology::{DelayMatrix, Network, NodeId};
