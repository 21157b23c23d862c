//! Shared inputs for the benchmark targets: small reference networks with
//! known classes so each benchmark exercises one pipeline stage in isolation.

use tim_core::NetworkTopology;

/// Five-user chain whose class admits the two-co-interferer synthesizer.
pub fn chain_network() -> NetworkTopology {
    NetworkTopology::new(5, vec![(1, vec![2, 3]), (2, vec![1]), (3, vec![4, 5]), (4, vec![1, 2])])
        .expect("valid network")
}

/// Four-user fork: one alignment set, three branches, class General.
pub fn fork_network() -> NetworkTopology {
    NetworkTopology::new(4, vec![(2, vec![1, 3]), (3, vec![1, 4]), (4, vec![1, 2])])
        .expect("valid network")
}
