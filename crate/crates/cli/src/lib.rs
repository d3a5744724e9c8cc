//! Batteries around `alsf-core`: the edge-list file format, CSV
//! emitters, seeded query running, and the parameter-sweep harness.
//! The `alsf` binary is a thin clap layer over these modules.

pub mod edgelist;
pub mod experiment;
pub mod queries;
pub mod report;
pub mod seed;

/// Version string stamped into CSV provenance comments.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
