//! DoF upper bound and topology classification.
//!
//! Every topology gets an exact rational upper bound on its linear symmetric
//! DoF: 1 without interference; 1/2 when no vertex has two or more incoming
//! internal conflicts; otherwise the minimum of a conflict-distance term
//! `(Δ_min+1)/(2Δ_min+3)` and an odd-cycle term `2L/(5L+1)` at the shortest
//! odd internal conflict cycle length `L`. Classification picks the strongest
//! achievability construction that applies.

use num_traits::One;
use serde::Serialize;

use crate::graphs::TopologyAnalysis;
use crate::ratio::{rat, Rat};

/// Which achievability construction applies to a topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TopologyClass {
    InterferenceFree,
    Best,
    TwoCoInterferer,
    General,
}

impl TopologyClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyClass::InterferenceFree => "InterferenceFree",
            TopologyClass::Best => "Best",
            TopologyClass::TwoCoInterferer => "TwoCoInterferer",
            TopologyClass::General => "General",
        }
    }
}

/// Which regime produced the bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    InterferenceFree,
    Half,
    Bounded,
}

/// Exact upper bound on the linear symmetric DoF, with its two components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofBound {
    pub value: Rat,
    /// `(Δ_min+1)/(2Δ_min+3)`; `None` when `Δ_min` is infinite.
    pub delta_term: Option<Rat>,
    /// `2L/(5L+1)` at `L = L_min_odd`; `None` when no odd cycle exists.
    pub cycle_term: Option<Rat>,
    pub case: BoundCase,
}

pub fn delta_term_value(delta_min: usize) -> Rat {
    rat((delta_min + 1) as i64, (2 * delta_min + 3) as i64)
}

pub fn cycle_term_value(l_min_odd: usize) -> Rat {
    rat(2 * l_min_odd as i64, (5 * l_min_odd + 1) as i64)
}

/// True iff every vertex has fewer than two incoming internal conflicts
/// (vacuously true without interference).
pub fn is_best_topology(a: &TopologyAnalysis) -> bool {
    a.b_vertices.is_empty()
}

pub fn upper_bound(a: &TopologyAnalysis) -> DofBound {
    if !a.has_interference {
        return DofBound {
            value: Rat::one(),
            delta_term: None,
            cycle_term: None,
            case: BoundCase::InterferenceFree,
        };
    }
    let delta_term = a.delta_min.map(delta_term_value);
    let cycle_term = a.l_min_odd.map(cycle_term_value);
    let (value, case) = match (&delta_term, &cycle_term) {
        (None, None) => (rat(1, 2), BoundCase::Half),
        (Some(d), None) => (d.clone(), BoundCase::Bounded),
        (None, Some(c)) => (c.clone(), BoundCase::Bounded),
        (Some(d), Some(c)) => (d.min(c).clone(), BoundCase::Bounded),
    };
    DofBound { value, delta_term, cycle_term, case }
}

pub fn classify(a: &TopologyAnalysis) -> TopologyClass {
    if !a.has_interference {
        TopologyClass::InterferenceFree
    } else if is_best_topology(a) {
        TopologyClass::Best
    } else if a.max_co_interferers <= 2 {
        TopologyClass::TwoCoInterferer
    } else {
        TopologyClass::General
    }
}

impl DofBound {
    /// Canonical single-line JSON form. Rationals are `"p/q"` in lowest terms
    /// with an explicit denominator; infinite terms are `"inf"`.
    pub fn to_json(&self, class: TopologyClass) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            value: String,
            delta_term: String,
            cycle_term: String,
            class: &'a str,
        }
        serde_json::to_string(&Doc {
            value: crate::ratio::format_rat(&self.value),
            delta_term: crate::ratio::format_rat_or_inf(&self.delta_term),
            cycle_term: crate::ratio::format_rat_or_inf(&self.cycle_term),
            class: class.as_str(),
        })
        .expect("serialization cannot fail")
    }
}

/// Convenience: bound value alone, for callers that need just the rational.
pub fn bound_value(a: &TopologyAnalysis) -> Rat {
    upper_bound(a).value
}
