//! Shared test topologies. Compiled only for tests.

use crate::topology::NetworkTopology;

/// Two alignment components, each a conflicted pair; every receiver hears at
/// most one internal conflict, so half DoF is achievable.
pub(crate) fn fixture_a() -> NetworkTopology {
    NetworkTopology::new(4, vec![(1, vec![3, 4]), (2, vec![1]), (3, vec![1, 2]), (4, vec![3])])
        .unwrap()
}

/// A path component 1-2-3 with a doubly conflicted vertex plus a pair 4-5;
/// every transmitter has at most two co-interferers.
pub(crate) fn fixture_b() -> NetworkTopology {
    NetworkTopology::new(5, vec![(1, vec![2, 3]), (2, vec![1]), (3, vec![4, 5]), (4, vec![1, 2])])
        .unwrap()
}

/// A star: transmitter 1 interferes everywhere and receivers 2, 3, 4 conflict
/// in an odd cycle, so only the general bound applies.
pub(crate) fn fixture_c() -> NetworkTopology {
    NetworkTopology::new(4, vec![(2, vec![1, 3]), (3, vec![1, 4]), (4, vec![1, 2])]).unwrap()
}

/// A three-cycle alignment component whose windows share labels pairwise,
/// plus an outside receiver hearing all three transmitters.
pub(crate) fn fixture_triangle() -> NetworkTopology {
    NetworkTopology::new(4, vec![(2, vec![1, 3]), (4, vec![1, 2, 3])]).unwrap()
}
