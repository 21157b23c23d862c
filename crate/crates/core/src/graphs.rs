//! Alignment and conflict graphs of a topology, and every derived quantity
//! the bounds and synthesizers consume.
//!
//! Two transmitters are joined by an undirected alignment edge when they
//! interfere together at some third receiver; a directed conflict edge `i -> j`
//! records that transmitter `i` interferes at receiver `j`. Connected
//! components of the alignment graph are the alignment sets. A conflict edge
//! inside one alignment set is an internal conflict; its distance is the
//! alignment-path length between its endpoints.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use crate::topology::NetworkTopology;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentConflictGraphs {
    k: usize,
    align_adj: Vec<BTreeSet<usize>>,    // index 0 unused
    conflict_out: Vec<BTreeSet<usize>>, // conflict_out[i] = {j : i interferes at R_j}
}

pub fn build_graphs(t: &NetworkTopology) -> AlignmentConflictGraphs {
    let k = t.k();
    let mut align_adj = vec![BTreeSet::new(); k + 1];
    let mut conflict_out = vec![BTreeSet::new(); k + 1];
    for j in 1..=k {
        for &i in t.interferers(j) {
            conflict_out[i].insert(j);
        }
        for [&a, &b] in t.interferers(j).iter().array_combinations() {
            align_adj[a].insert(b);
            align_adj[b].insert(a);
        }
    }
    AlignmentConflictGraphs { k, align_adj, conflict_out }
}

impl AlignmentConflictGraphs {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alignment_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        assert!(v >= 1 && v <= self.k, "vertex {v} out of range");
        &self.align_adj[v]
    }

    pub fn conflict_targets(&self, i: usize) -> &BTreeSet<usize> {
        assert!(i >= 1 && i <= self.k, "vertex {i} out of range");
        &self.conflict_out[i]
    }

    /// Unordered alignment edges as `(a, b)` with `a < b`, lexicographic.
    pub fn alignment_edges(&self) -> Vec<(usize, usize)> {
        (1..=self.k)
            .flat_map(|a| self.align_adj[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    /// Directed conflict edges as `(i, j)`, lexicographic.
    pub fn conflict_edges(&self) -> Vec<(usize, usize)> {
        (1..=self.k).flat_map(|i| self.conflict_out[i].iter().map(move |&j| (i, j))).collect()
    }
}

/// The partition of `[1..K]` into alignment components, ordered by smallest
/// member; singletons included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentSets {
    sets: Vec<BTreeSet<usize>>,
    set_of: Vec<usize>, // index 0 unused
}

pub fn alignment_sets(g: &AlignmentConflictGraphs) -> AlignmentSets {
    let k = g.k();
    let mut set_of = vec![usize::MAX; k + 1];
    let mut sets = Vec::new();
    for start in 1..=k {
        if set_of[start] != usize::MAX {
            continue;
        }
        let idx = sets.len();
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        set_of[start] = idx;
        while let Some(v) = queue.pop_front() {
            component.insert(v);
            for &w in g.alignment_neighbors(v) {
                if set_of[w] == usize::MAX {
                    set_of[w] = idx;
                    queue.push_back(w);
                }
            }
        }
        sets.push(component);
    }
    AlignmentSets { sets, set_of }
}

impl AlignmentSets {
    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn set_index_of(&self, v: usize) -> usize {
        assert!(v >= 1 && v < self.set_of.len(), "vertex {v} out of range");
        self.set_of[v]
    }

    pub fn same_set(&self, a: usize, b: usize) -> bool {
        self.set_index_of(a) == self.set_index_of(b)
    }
}

/// Shortest alignment-path length between two vertices; `None` when they lie
/// in different components. Breadth-first, so exact.
pub fn alignment_distance(g: &AlignmentConflictGraphs, a: usize, b: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.k() + 1];
    let mut queue = VecDeque::from([a]);
    dist[a] = 0;
    while let Some(v) = queue.pop_front() {
        if v == b {
            return Some(dist[v]);
        }
        for &w in g.alignment_neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// A conflict edge whose endpoints share an alignment set, annotated with the
/// alignment distance between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InternalConflict {
    pub from: usize,
    pub to: usize,
    pub distance: usize,
}

/// All internal conflicts, sorted by `(from, to)`.
pub fn internal_conflicts(
    g: &AlignmentConflictGraphs,
    sets: &AlignmentSets,
) -> Vec<InternalConflict> {
    g.conflict_edges()
        .into_iter()
        .filter(|&(i, j)| sets.same_set(i, j))
        .map(|(i, j)| {
            let distance = alignment_distance(g, i, j)
                .expect("endpoints share an alignment component, so a path exists");
            InternalConflict { from: i, to: j, distance }
        })
        .collect()
}

/// Co-interferer sets: `T̂_i` is every transmitter that interferes somewhere
/// together with `i`. Index 0 unused.
pub fn co_interferers(t: &NetworkTopology) -> Vec<BTreeSet<usize>> {
    let k = t.k();
    let mut out = vec![BTreeSet::new(); k + 1];
    for j in 1..=k {
        for &i in t.interferers(j) {
            for &other in t.interferers(j) {
                if other != i {
                    out[i].insert(other);
                }
            }
        }
    }
    out
}

/// Length of the shortest odd directed conflict cycle lying inside some
/// `S_u = {j : u ∈ I_j}`, or `None` when no such cycle exists.
///
/// Per induced subgraph, a parity-layered breadth-first search from each node
/// finds the shortest odd closed walk through it; any odd closed walk contains
/// an odd directed cycle on the same vertex set, so the minimum over all
/// start nodes is exactly the shortest odd cycle length.
pub fn shortest_odd_internal_conflict_cycle(
    t: &NetworkTopology,
    g: &AlignmentConflictGraphs,
) -> Option<usize> {
    let k = t.k();
    let mut best: Option<usize> = None;
    for u in 1..=k {
        let su = g.conflict_targets(u);
        if su.len() < 3 {
            continue;
        }
        for &start in su {
            if let Some(len) = shortest_odd_closed_walk(t, su, start) {
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

fn shortest_odd_closed_walk(
    t: &NetworkTopology,
    vertices: &BTreeSet<usize>,
    start: usize,
) -> Option<usize> {
    let k = t.k();
    // dist[v][parity]: shortest walk from `start` to `v` of that length parity.
    let mut dist = vec![[usize::MAX; 2]; k + 1];
    let mut queue = VecDeque::from([(start, 0usize)]);
    dist[start][0] = 0;
    while let Some((v, parity)) = queue.pop_front() {
        let d = dist[v][parity];
        for &w in vertices {
            if !t.is_interferer(v, w) {
                continue;
            }
            let p = 1 - parity;
            if dist[w][p] == usize::MAX {
                dist[w][p] = d + 1;
                queue.push_back((w, p));
            }
        }
    }
    (dist[start][1] != usize::MAX).then(|| dist[start][1])
}

/// Everything the bounds and synthesizers need, computed once.
#[derive(Debug, Clone)]
pub struct TopologyAnalysis {
    pub k: usize,
    pub graphs: AlignmentConflictGraphs,
    pub sets: AlignmentSets,
    pub internal_conflicts: Vec<InternalConflict>,
    /// `co_interferers[i]` = T̂_i; index 0 unused.
    pub co_interferers: Vec<BTreeSet<usize>>,
    /// `incoming_internal[j]` = number of internal conflicts into `j`; index 0 unused.
    pub incoming_internal: Vec<usize>,
    /// Vertices with two or more incoming internal conflicts.
    pub b_vertices: BTreeSet<usize>,
    /// Minimum conflict distance among internal conflicts into `b_vertices`;
    /// `None` means infinite (B empty).
    pub delta_min: Option<usize>,
    /// Shortest odd internal conflict cycle length; `None` means none exists.
    pub l_min_odd: Option<usize>,
    pub max_co_interferers: usize,
    pub has_interference: bool,
}

pub fn analyze(t: &NetworkTopology) -> TopologyAnalysis {
    let k = t.k();
    let graphs = build_graphs(t);
    let sets = alignment_sets(&graphs);
    let internal = internal_conflicts(&graphs, &sets);
    let co = co_interferers(t);
    let mut incoming = vec![0usize; k + 1];
    for c in &internal {
        incoming[c.to] += 1;
    }
    let b_vertices: BTreeSet<usize> = (1..=k).filter(|&j| incoming[j] >= 2).collect();
    let delta_min =
        internal.iter().filter(|c| b_vertices.contains(&c.to)).map(|c| c.distance).min();
    let l_min_odd = shortest_odd_internal_conflict_cycle(t, &graphs);
    let max_co = (1..=k).map(|i| co[i].len()).max().unwrap_or(0);
    TopologyAnalysis {
        k,
        graphs,
        sets,
        internal_conflicts: internal,
        co_interferers: co,
        incoming_internal: incoming,
        b_vertices,
        delta_min,
        l_min_odd,
        max_co_interferers: max_co,
        has_interference: t.has_interference(),
    }
}

impl TopologyAnalysis {
    /// Canonical single-line JSON form: fixed key order, `"inf"` for the
    /// infinite cases of `delta_min` and `L_min_odd`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            #[serde(rename = "K")]
            k: usize,
            alignment_edges: Vec<[usize; 2]>,
            conflict_edges: Vec<[usize; 2]>,
            alignment_sets: Vec<Vec<usize>>,
            internal_conflicts: Vec<InternalConflict>,
            co_interferers: BTreeMap<usize, Vec<usize>>,
            incoming_internal: BTreeMap<usize, usize>,
            #[serde(rename = "B")]
            b: Vec<usize>,
            delta_min: serde_json::Value,
            #[serde(rename = "L_min_odd")]
            l_min_odd: serde_json::Value,
            max_co_interferers: usize,
            has_interference: bool,
        }
        let count_json = |v: Option<usize>| match v {
            Some(n) => serde_json::Value::from(n),
            None => serde_json::Value::from("inf"),
        };
        let doc = Doc {
            k: self.k,
            alignment_edges: self.graphs.alignment_edges().iter().map(|&(a, b)| [a, b]).collect(),
            conflict_edges: self.graphs.conflict_edges().iter().map(|&(i, j)| [i, j]).collect(),
            alignment_sets: self.sets.sets().iter().map(|s| s.iter().copied().collect()).collect(),
            internal_conflicts: self.internal_conflicts.clone(),
            co_interferers: (1..=self.k)
                .map(|i| (i, self.co_interferers[i].iter().copied().collect()))
                .collect(),
            incoming_internal: (1..=self.k).map(|j| (j, self.incoming_internal[j])).collect(),
            b: self.b_vertices.iter().copied().collect(),
            delta_min: count_json(self.delta_min),
            l_min_odd: count_json(self.l_min_odd),
            max_co_interferers: self.max_co_interferers,
            has_interference: self.has_interference,
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b, fixture_c, fixture_triangle};
    use crate::topology::enumerate_topologies;

    fn conflicts(list: &[(usize, usize, usize)]) -> Vec<InternalConflict> {
        list.iter().map(|&(from, to, distance)| InternalConflict { from, to, distance }).collect()
    }

    #[test]
    fn fixture_a_graphs_and_analysis() {
        let a = analyze(&fixture_a());
        assert_eq!(a.graphs.alignment_edges(), vec![(1, 2), (3, 4)]);
        assert_eq!(a.graphs.conflict_edges(), vec![(1, 2), (1, 3), (2, 3), (3, 1), (3, 4), (4, 1)]);
        assert_eq!(a.sets.sets().len(), 2);
        assert!(a.sets.same_set(1, 2) && a.sets.same_set(3, 4) && !a.sets.same_set(1, 3));
        assert_eq!(a.internal_conflicts, conflicts(&[(1, 2, 1), (3, 4, 1)]));
        assert!(a.b_vertices.is_empty());
        assert_eq!(a.delta_min, None);
        assert_eq!(a.l_min_odd, None);
        assert_eq!(a.max_co_interferers, 1);
        assert!(a.has_interference);
    }

    #[test]
    fn fixture_b_graphs_and_analysis() {
        let a = analyze(&fixture_b());
        assert_eq!(a.graphs.alignment_edges(), vec![(1, 2), (2, 3), (4, 5)]);
        assert_eq!(a.sets.sets(), &[[1, 2, 3].into_iter().collect(), [4, 5].into_iter().collect()]);
        assert_eq!(a.internal_conflicts, conflicts(&[(1, 2, 1), (2, 1, 1), (3, 1, 2)]));
        assert_eq!(a.co_interferers[2], [1, 3].into_iter().collect());
        assert_eq!(a.b_vertices, [1].into_iter().collect());
        assert_eq!(a.delta_min, Some(1));
        assert_eq!(a.l_min_odd, None);
        assert_eq!(a.max_co_interferers, 2);
    }

    #[test]
    fn fixture_c_graphs_and_analysis() {
        let a = analyze(&fixture_c());
        assert_eq!(a.graphs.alignment_edges(), vec![(1, 2), (1, 3), (1, 4)]);
        assert_eq!(a.graphs.conflict_edges(), vec![(1, 2), (1, 3), (1, 4), (2, 4), (3, 2), (4, 3)]);
        assert_eq!(
            a.internal_conflicts,
            conflicts(&[(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 4, 2), (3, 2, 2), (4, 3, 2)])
        );
        assert_eq!(a.co_interferers[1], [2, 3, 4].into_iter().collect());
        assert_eq!(a.b_vertices, [2, 3, 4].into_iter().collect());
        assert_eq!(a.delta_min, Some(1));
        assert_eq!(a.l_min_odd, Some(3));
        assert_eq!(a.max_co_interferers, 3);
    }

    #[test]
    fn fixture_triangle_analysis() {
        let a = analyze(&fixture_triangle());
        assert_eq!(a.graphs.alignment_edges(), vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(a.sets.sets().len(), 2);
        assert_eq!(a.internal_conflicts, conflicts(&[(1, 2, 1), (3, 2, 1)]));
        assert_eq!(a.b_vertices, [2].into_iter().collect());
        assert_eq!(a.delta_min, Some(1));
        assert_eq!(a.l_min_odd, None);
        assert_eq!(a.max_co_interferers, 2);
    }

    #[test]
    fn interference_free_analysis_is_empty() {
        let a = analyze(&crate::topology::NetworkTopology::interference_free(3));
        assert!(a.graphs.alignment_edges().is_empty());
        assert!(a.graphs.conflict_edges().is_empty());
        assert_eq!(a.sets.sets().len(), 3);
        assert_eq!(a.max_co_interferers, 0);
        assert!(!a.has_interference);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn co_interferers_equal_alignment_neighborhoods_exhaustively() {
        for t in enumerate_topologies(3).unwrap() {
            let g = build_graphs(&t);
            let co = co_interferers(&t);
            for i in 1..=3 {
                assert_eq!(&co[i], g.alignment_neighbors(i), "vertex {i} in {}", t.to_json());
            }
        }
    }

    #[test]
    fn alignment_distance_is_symmetric_with_triangle_inequality() {
        for t in enumerate_topologies(4).unwrap().step_by(7) {
            let g = build_graphs(&t);
            let sets = alignment_sets(&g);
            for a in 1..=4 {
                assert_eq!(alignment_distance(&g, a, a), Some(0));
                for b in 1..=4 {
                    let d_ab = alignment_distance(&g, a, b);
                    assert_eq!(d_ab, alignment_distance(&g, b, a));
                    assert_eq!(d_ab.is_some(), sets.same_set(a, b));
                    for c in 1..=4 {
                        if let (Some(x), Some(y), Some(z)) =
                            (d_ab, alignment_distance(&g, b, c), alignment_distance(&g, a, c))
                        {
                            assert!(z <= x + y);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_co_interferers_imply_no_odd_cycle_and_degree_cap() {
        let mut saw_two_co = 0;
        for t in enumerate_topologies(4).unwrap() {
            let a = analyze(&t);
            if a.max_co_interferers <= 2 {
                saw_two_co += 1;
                assert_eq!(a.l_min_odd, None, "topology {}", t.to_json());
                for v in 1..=4 {
                    assert!(a.graphs.alignment_neighbors(v).len() <= 2);
                }
            }
            if let Some(l) = a.l_min_odd {
                assert!(l >= 3 && l % 2 == 1);
                assert_eq!(a.delta_min, Some(1), "topology {}", t.to_json());
            }
        }
        assert!(saw_two_co > 0);
    }

    #[test]
    fn analysis_json_is_canonical_for_fixture_b() {
        let expected = concat!(
            r#"{"K":5,"alignment_edges":[[1,2],[2,3],[4,5]],"#,
            r#""conflict_edges":[[1,2],[1,4],[2,1],[2,4],[3,1],[4,3],[5,3]],"#,
            r#""alignment_sets":[[1,2,3],[4,5]],"#,
            r#""internal_conflicts":[{"from":1,"to":2,"distance":1},{"from":2,"to":1,"distance":1},{"from":3,"to":1,"distance":2}],"#,
            r#""co_interferers":{"1":[2],"2":[1,3],"3":[2],"4":[5],"5":[4]},"#,
            r#""incoming_internal":{"1":2,"2":1,"3":0,"4":0,"5":0},"#,
            r#""B":[1],"delta_min":1,"L_min_odd":"inf","max_co_interferers":2,"#,
            r#""has_interference":true}"#
        );
        assert_eq!(analyze(&fixture_b()).to_json(), expected);
    }
}
