//! Sliding-window label assignment over alignment components.
//!
//! Each alignment component must be a simple path or a simple cycle. Labels
//! are abstract beamforming vectors; every vertex receives a window of
//! `delta+1` consecutive labels so that vertices at alignment distance
//! `d ≤ delta` share exactly `delta+1-d` labels and farther vertices share
//! none. The planner later maps labels to supports and values.

use std::collections::BTreeSet;

use super::SchemeError;
use crate::graphs::{AlignmentConflictGraphs, TopologyAnalysis};

pub type LabelId = usize;

/// A traversal order for one alignment component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentShape {
    Path(Vec<usize>),
    Cycle(Vec<usize>),
}

impl ComponentShape {
    pub fn vertices(&self) -> &[usize] {
        match self {
            ComponentShape::Path(vs) | ComponentShape::Cycle(vs) => vs,
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, ComponentShape::Cycle(_))
    }
}

/// Orders one alignment component as a path or cycle.
///
/// Paths start at their smaller-id endpoint. Cycles start at their smallest
/// vertex and proceed toward its smaller-id neighbor. Any vertex of alignment
/// degree three or more makes the component neither shape.
pub fn component_shape(
    g: &AlignmentConflictGraphs,
    set: &BTreeSet<usize>,
) -> Result<ComponentShape, SchemeError> {
    let vs: Vec<usize> = set.iter().copied().collect();
    if vs.len() == 1 {
        return Ok(ComponentShape::Path(vs));
    }
    if vs.iter().any(|&v| g.alignment_neighbors(v).len() > 2) {
        return Err(SchemeError::NotPathOrCycle);
    }
    let endpoints: Vec<usize> =
        vs.iter().copied().filter(|&v| g.alignment_neighbors(v).len() == 1).collect();
    let walk = |start: usize, mut cur: usize, len: usize| -> Vec<usize> {
        let mut order = vec![start];
        let mut prev = start;
        while order.len() < len {
            order.push(cur);
            if let Some(&next) =
                g.alignment_neighbors(cur).iter().find(|&&w| w != prev && w != start)
            {
                prev = cur;
                cur = next;
            } else {
                break;
            }
        }
        order
    };
    match endpoints.len() {
        2 => {
            let start = endpoints[0];
            let first =
                *g.alignment_neighbors(start).iter().next().expect("endpoint has a neighbor");
            let order = walk(start, first, vs.len());
            debug_assert_eq!(order.len(), vs.len());
            Ok(ComponentShape::Path(order))
        }
        0 => {
            let start = vs[0];
            let first =
                *g.alignment_neighbors(start).iter().next().expect("cycle vertex has neighbors");
            let order = walk(start, first, vs.len());
            debug_assert_eq!(order.len(), vs.len());
            Ok(ComponentShape::Cycle(order))
        }
        _ => Err(SchemeError::NotPathOrCycle),
    }
}

/// The complete label layout for a topology at window width `delta+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowAssignment {
    pub delta: usize,
    pub num_labels: usize,
    /// Vertex-indexed (entry 0 unused): the `delta+1` labels of each vertex.
    pub windows: Vec<Vec<LabelId>>,
    pub shapes: Vec<ComponentShape>,
}

/// Assigns sliding windows of `delta+1` fresh labels per component.
///
/// A path on `p` vertices consumes `p+delta` labels; windows slide by one per
/// step. A cycle on `p` vertices consumes `p` labels and windows wrap around,
/// which requires `p > delta`, otherwise a window cannot hold `delta+1`
/// distinct labels and the component is reported infeasible. Label ranges of
/// distinct components never overlap.
pub fn assign_windows(a: &TopologyAnalysis, delta: usize) -> Result<WindowAssignment, SchemeError> {
    let mut windows = vec![Vec::new(); a.k + 1];
    let mut shapes = Vec::new();
    let mut next_label: LabelId = 0;
    for set in a.sets.sets() {
        let shape = component_shape(&a.graphs, set)?;
        let p = shape.vertices().len();
        match &shape {
            ComponentShape::Path(order) => {
                for (idx, &v) in order.iter().enumerate() {
                    windows[v] = (next_label + idx..=next_label + idx + delta).collect();
                }
                next_label += p + delta;
            }
            ComponentShape::Cycle(order) => {
                if p <= delta {
                    return Err(SchemeError::PlanInfeasible {
                        reason: format!(
                            "cycle component of length {p} cannot hold windows of {} distinct labels",
                            delta + 1
                        ),
                    });
                }
                for (idx, &v) in order.iter().enumerate() {
                    windows[v] = (0..=delta).map(|s| next_label + (idx + s) % p).collect();
                }
                next_label += p;
            }
        }
        shapes.push(shape);
    }
    Ok(WindowAssignment { delta, num_labels: next_label, windows, shapes })
}
