//! Linear schemes: beamforming matrices plus receiver preset-mode patterns,
//! and synthesizers for the topology classes with a known construction.
//!
//! A scheme spans `m` channel uses. Transmitter `i` sends `n_i` symbols
//! through an `m×n_i` rational beamforming matrix `V_i`; receiver `j` fixes a
//! preset mode pattern `L_j` choosing one antenna mode per slot. The
//! synthesizers here cover interference-free topologies, topologies where
//! every vertex has at most one incoming internal conflict (half DoF), and
//! topologies whose co-interferer counts never exceed two (rate
//! `(Δ_min+1)/(2Δ_min+3)`).

mod planner;
mod windows;

pub use planner::{
    build_scheme, plan_supports_and_modes, synthesize_two_coint, LabelKind, LabelPlan,
};
pub use windows::{assign_windows, component_shape, ComponentShape, LabelId, WindowAssignment};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{classify, TopologyClass};
use crate::graphs::TopologyAnalysis;
use crate::linalg::{rank_exact, Matrix};
use crate::ratio::{format_rat, parse_rat, rat_int};
use crate::seeds;
use crate::topology::NetworkTopology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(
        "half-DoF synthesis requires every vertex to have at most one incoming internal conflict"
    )]
    NotBestTopology,
    #[error("alignment component is neither a simple path nor a simple cycle")]
    NotPathOrCycle,
    #[error("no feasible scheme plan: {reason}")]
    PlanInfeasible { reason: String },
    #[error("no synthesizer for topology class {}", .0.as_str())]
    WrongClass(TopologyClass),
    #[error("malformed scheme: {0}")]
    Malformed(String),
}

/// A complete linear scheme. Immutable and validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    m: usize,
    num_modes: usize,
    beamforming: BTreeMap<usize, Matrix>,
    mode_patterns: BTreeMap<usize, Vec<usize>>,
}

impl LinearScheme {
    /// Validates shape and rank: contiguous users `1..=K` in both maps, every
    /// `V_i` an `m×n_i` matrix of full column rank, every pattern of length
    /// `m` with modes in `1..=num_modes`.
    pub fn new(
        m: usize,
        num_modes: usize,
        beamforming: BTreeMap<usize, Matrix>,
        mode_patterns: BTreeMap<usize, Vec<usize>>,
    ) -> Result<Self, SchemeError> {
        let malformed = |msg: String| SchemeError::Malformed(msg);
        if m == 0 || num_modes == 0 {
            return Err(malformed("m and num_modes must be positive".into()));
        }
        let k = beamforming.len();
        if k == 0 {
            return Err(malformed("scheme must cover at least one user".into()));
        }
        let expected: Vec<usize> = (1..=k).collect();
        for (keys, name) in [
            (beamforming.keys().copied().collect::<Vec<_>>(), "beamforming"),
            (mode_patterns.keys().copied().collect::<Vec<_>>(), "mode_patterns"),
        ] {
            if keys != expected {
                return Err(malformed(format!("{name} must cover users 1..={k} exactly")));
            }
        }
        for (&i, v) in &beamforming {
            if v.rows() != m {
                return Err(malformed(format!("V_{i} has {} rows, expected {m}", v.rows())));
            }
            if v.cols() == 0 || v.cols() > m {
                return Err(malformed(format!("V_{i} must have between 1 and {m} columns")));
            }
            if rank_exact(v) != v.cols() {
                return Err(malformed(format!("V_{i} does not have full column rank")));
            }
        }
        for (&j, pattern) in &mode_patterns {
            if pattern.len() != m {
                return Err(malformed(format!(
                    "mode pattern of receiver {j} must have length {m}"
                )));
            }
            if pattern.iter().any(|&l| l == 0 || l > num_modes) {
                return Err(malformed(format!(
                    "mode pattern of receiver {j} uses a mode outside 1..={num_modes}"
                )));
            }
        }
        Ok(LinearScheme { m, num_modes, beamforming, mode_patterns })
    }

    pub fn k(&self) -> usize {
        self.beamforming.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn beamforming(&self, i: usize) -> &Matrix {
        self.beamforming.get(&i).expect("user index out of range")
    }

    pub fn n_streams(&self, i: usize) -> usize {
        self.beamforming(i).cols()
    }

    pub fn mode_pattern(&self, j: usize) -> &[usize] {
        self.mode_patterns.get(&j).expect("receiver index out of range")
    }

    /// Canonical single-line JSON form: numeric key order, columns listed in
    /// transmitter symbol order, entries as `"p/q"` in lowest terms.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            m: usize,
            num_modes: usize,
            beamforming: BTreeMap<usize, Vec<Vec<String>>>,
            mode_patterns: BTreeMap<usize, Vec<usize>>,
        }
        let beamforming = self
            .beamforming
            .iter()
            .map(|(&i, v)| {
                let cols =
                    (0..v.cols()).map(|c| v.column(c).iter().map(format_rat).collect()).collect();
                (i, cols)
            })
            .collect();
        let doc = Doc {
            m: self.m,
            num_modes: self.num_modes,
            beamforming,
            mode_patterns: self.mode_patterns.clone(),
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }
}

/// Parses a scheme from its JSON form, validating through [`LinearScheme::new`].
pub fn parse_scheme(text: &str) -> Result<LinearScheme, SchemeError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        m: usize,
        num_modes: usize,
        beamforming: BTreeMap<String, Vec<Vec<String>>>,
        mode_patterns: BTreeMap<String, Vec<usize>>,
    }
    let malformed = |msg: String| SchemeError::Malformed(msg);
    let doc: Doc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let parse_key = |key: &str| {
        key.parse::<usize>().map_err(|_| malformed(format!("user key `{key}` is not an index")))
    };
    let mut beamforming = BTreeMap::new();
    for (key, cols) in &doc.beamforming {
        let i = parse_key(key)?;
        if cols.is_empty() {
            return Err(malformed(format!("V_{i} has no columns")));
        }
        let parsed: Vec<Vec<crate::ratio::Rat>> = cols
            .iter()
            .map(|col| {
                if col.len() != doc.m {
                    return Err(malformed(format!(
                        "a column of V_{i} does not have {} entries",
                        doc.m
                    )));
                }
                col.iter().map(|s| parse_rat(s).map_err(|e| malformed(e.to_string()))).collect()
            })
            .collect::<Result<_, _>>()?;
        beamforming.insert(i, Matrix::from_cols(&parsed));
    }
    let mut mode_patterns = BTreeMap::new();
    for (key, pattern) in doc.mode_patterns {
        mode_patterns.insert(parse_key(&key)?, pattern);
    }
    LinearScheme::new(doc.m, doc.num_modes, beamforming, mode_patterns)
}

/// Half-DoF synthesis: two channel uses, one symbol per transmitter.
///
/// Every alignment set shares a single `2×1` vector `[1, c]` with distinct
/// nonzero `c` per set, so vectors of distinct sets are pairwise independent.
/// A receiver whose interferer lies in its own alignment set switches modes
/// across the two slots; every other receiver keeps mode 1.
pub fn synthesize_half(
    t: &NetworkTopology,
    a: &TopologyAnalysis,
    seed: u64,
) -> Result<LinearScheme, SchemeError> {
    match classify(a) {
        TopologyClass::Best | TopologyClass::InterferenceFree => {}
        _ => return Err(SchemeError::NotBestTopology),
    }
    let mut rng = seeds::rng_from(seeds::substream(seed, 0));
    let mut used = std::collections::BTreeSet::new();
    let set_values: Vec<i64> = a
        .sets
        .sets()
        .iter()
        .map(|_| loop {
            let c = rand::Rng::gen_range(&mut rng, 1..=1i64 << 20);
            if used.insert(c) {
                return c;
            }
        })
        .collect();
    let mut beamforming = BTreeMap::new();
    let mut mode_patterns = BTreeMap::new();
    for v in 1..=t.k() {
        let c = set_values[a.sets.set_index_of(v)];
        beamforming.insert(v, Matrix::from_cols(&[vec![rat_int(1), rat_int(c)]]));
        let internal_interferer = t.interferers(v).iter().any(|&i| a.sets.same_set(i, v));
        mode_patterns.insert(v, if internal_interferer { vec![1, 2] } else { vec![1, 1] });
    }
    Ok(LinearScheme::new(2, 2, beamforming, mode_patterns)
        .expect("the half-DoF construction is shape-valid by design"))
}
