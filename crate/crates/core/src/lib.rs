//! Ad-hoc limited scale-free overlay topologies.
//!
//! This crate builds and analyzes unstructured peer-to-peer overlay graphs
//! in which peers join with only local knowledge of the network. A joining
//! peer sees the topology up to `tau_j` hops around a random contact point
//! and attaches to nodes there with probability proportional to their
//! degree, refusing nodes that already sit at a hard degree cutoff `k_c`.
//! Peers leave uniformly at random with probability `mu` per growth step,
//! and the orphaned neighbors rewire inside a `tau_l`-hop horizon around
//! the departed peer.
//!
//! On top of the generator the crate provides:
//!
//! * [`search`] — flooding, normalized flooding, and non-backtracking
//!   random-walk query propagation with TTL/budget accounting,
//! * [`metrics`] — degree distributions, discrete power-law fits,
//!   connected components, and mean shortest-path estimates,
//! * [`analytic`] — the stationary degree distribution of preferential
//!   attachment with a hard cutoff, solved from its master equation.
//!
//! The crate is `no_std` (with `alloc`); file formats and the CLI live in
//! the companion `alsf-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod graph;
pub mod growth;
pub mod metrics;
pub mod search;

pub use analytic::{asymptotic_nu, natural_cutoff, solve_master_equation, AnalyticSolution};
pub use graph::{Graph, GraphError, NodeId};
pub use growth::{grow, join, leave, seed_clique, Cutoff, GrowthParams, GrowthTrace};
pub use metrics::{
    components, degree_distribution, fit_power_law, mean_shortest_path, Binning, ComponentReport,
    DegreeDistribution, PowerLawFit,
};
pub use search::{
    flood_search, nf_search, rw_budget_from_nf, rw_search, Algorithm, SearchOutcome, SearchParams,
};

/// The generator used for every random draw in a simulation run.
///
/// One independently seeded stream per realization; growth, query
/// sampling, and searches all consume from streams derived from the run
/// seed, so any logged run replays bit-identically.
pub type SimRng = rand_chacha::ChaCha8Rng;
