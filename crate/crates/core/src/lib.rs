//! Topological interference management for partially connected K-user
//! interference networks with reconfigurable receive antennas.
//!
//! The crate models a network by the interferer set of each receiver (direct
//! links are always present and implicit), derives the alignment and conflict
//! graphs plus the quantities that control the linear symmetric DoF, computes
//! the exact-rational upper bound, synthesizes beamforming plus preset-mode
//! schemes for the classes where an achievability construction is known, and
//! verifies any scheme by exact rank computations over random integer channel
//! draws. Everything is exact: no floating point anywhere.

pub mod bounds;
pub mod graphs;
pub mod linalg;
pub mod oracle;
pub mod ratio;
pub mod scheme;
pub mod topology;
pub mod verify;

mod seeds;

#[cfg(test)]
pub(crate) mod fixtures;

pub use bounds::{classify, is_best_topology, upper_bound, DofBound, TopologyClass};
pub use graphs::{analyze, build_graphs, TopologyAnalysis};
pub use linalg::Matrix;
pub use ratio::Rat;
pub use scheme::{parse_scheme, synthesize_half, synthesize_two_coint, LinearScheme};
pub use topology::{parse_topology, NetworkTopology};
pub use verify::{verify_scheme, VerificationReport};
