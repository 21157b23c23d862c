//! Support and mode planning for the `(Δ_min+1)/(2Δ_min+3)` synthesizer.
//!
//! Each label from the window assignment becomes one beamforming vector over
//! `m = 2Δ_min+3` slots. Receiver constraints fall into two families:
//!
//! * separation: receiver `j` holds label `ℓ` and also hears it from an
//!   interferer, so `j`'s mode pattern must switch inside `supp(ℓ)` to break
//!   the shared direction apart;
//! * alignment: receiver `j` hears label `ℓ` from two interferers, so `j`'s
//!   pattern must stay constant on `supp(ℓ)` to keep both images collinear.
//!
//! A label needing separation anywhere gets a two- or three-slot support, a
//! shared label without separation needs one slot, and a private label spans
//! all slots. Three-slot supports matter: a cycle of three vertices that all
//! hear both neighbours forces every receiver to separate both of its own
//! labels, and two-slot supports provably cannot give all three receivers
//! enough room inside five slots.
//!
//! Candidate supports are proposed in a deterministic order (disjoint,
//! staircase stride 2, staircase stride 1, wide staircase) followed by random
//! draws. For each proposal, per-receiver mode patterns are chosen from a
//! short candidate list (switch the top slot of each separated support;
//! switch everything the separated supports cover outside aligned supports),
//! keeping the first candidate that attains the full desired dimension in an
//! exact rank probe. Every accepted plan must additionally pass an exact
//! subset-independence check of its drawn values and full exact verification
//! of the resulting scheme.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::windows::{assign_windows, LabelId, WindowAssignment};
use super::{synthesize_half, LinearScheme, SchemeError};
use crate::bounds::{classify, delta_term_value, TopologyClass};
use crate::graphs::{alignment_distance, TopologyAnalysis};
use crate::linalg::{rank_exact, Matrix};
use crate::ratio::{rat_int, Rat};
use crate::seeds;
use crate::topology::NetworkTopology;
use crate::verify::verify_scheme;

const VALUE_MAX: i64 = 1 << 20;
const DEFAULT_MAX_RETRIES: usize = 32;
const VALUE_REDRAWS: usize = 4;
const INTERNAL_TRIALS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// Single holder: generic support over all slots.
    Private,
    /// Shared, no separation required: one slot.
    AlignOnly,
    /// Separation required at some receiver: two or three slots.
    SeparateRequired,
}

/// A fully resolved plan: supports, values, and mode patterns for one
/// verified scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPlan {
    pub m: usize,
    pub delta: usize,
    pub windows: WindowAssignment,
    /// Per label, ascending holder vertices.
    pub holders: Vec<Vec<usize>>,
    pub kinds: Vec<LabelKind>,
    /// Per label, ascending slots in `1..=m`.
    pub supports: Vec<Vec<usize>>,
    /// Per label, the full `m`-entry value vector (zero off the support).
    pub values: Vec<Vec<Rat>>,
    /// Vertex-indexed mode patterns (entry 0 unused).
    pub mode_patterns: Vec<Vec<usize>>,
}

struct ConstraintSet {
    holders: Vec<Vec<usize>>,
    kinds: Vec<LabelKind>,
    /// Receiver-indexed: labels receiver `j` must separate.
    sep_at: Vec<Vec<LabelId>>,
    /// Receiver-indexed: labels receiver `j` must keep aligned.
    align_at: Vec<Vec<LabelId>>,
}

fn max_retries() -> usize {
    std::env::var("TIM_MAX_RETRIES")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(DEFAULT_MAX_RETRIES)
}

/// Windows on short cycle components stop obeying the distance/sharing law;
/// such layouts admit no consistent plan under this construction.
fn check_window_sharing(a: &TopologyAnalysis, w: &WindowAssignment) -> Result<(), SchemeError> {
    for x in 1..=a.k {
        for y in x + 1..=a.k {
            let shared = w.windows[x].iter().filter(|l| w.windows[y].contains(l)).count();
            let expected = match alignment_distance(&a.graphs, x, y) {
                Some(d) if d <= w.delta => w.delta + 1 - d,
                _ => 0,
            };
            if shared != expected {
                return Err(SchemeError::PlanInfeasible {
                    reason: format!(
                        "windows of vertices {x} and {y} share {shared} labels where {expected} \
                         are required; a cycle component is too short for this window width"
                    ),
                });
            }
        }
    }
    Ok(())
}

fn collect_constraints(
    t: &NetworkTopology,
    w: &WindowAssignment,
) -> Result<ConstraintSet, SchemeError> {
    let k = t.k();
    let mut holders = vec![Vec::new(); w.num_labels];
    for v in 1..=k {
        for &l in &w.windows[v] {
            holders[l].push(v);
        }
    }
    let mut needs_sep = vec![false; w.num_labels];
    let mut sep_at = vec![Vec::new(); k + 1];
    let mut align_at = vec![Vec::new(); k + 1];
    for j in 1..=k {
        let mut relevant: BTreeSet<LabelId> = w.windows[j].iter().copied().collect();
        for &i in t.interferers(j) {
            relevant.extend(w.windows[i].iter().copied());
        }
        for &l in &relevant {
            let heard = holders[l].iter().filter(|&&v| t.is_interferer(v, j)).count();
            let sep = holders[l].contains(&j) && heard >= 1;
            let align = heard >= 2;
            if sep && align {
                return Err(SchemeError::PlanInfeasible {
                    reason: format!(
                        "receiver {j} would need to both separate and align one shared label"
                    ),
                });
            }
            if sep {
                sep_at[j].push(l);
                needs_sep[l] = true;
            }
            if align {
                align_at[j].push(l);
            }
        }
    }
    let kinds = holders
        .iter()
        .zip(&needs_sep)
        .map(|(h, &sep)| {
            if h.len() == 1 {
                LabelKind::Private
            } else if sep {
                LabelKind::SeparateRequired
            } else {
                LabelKind::AlignOnly
            }
        })
        .collect();
    Ok(ConstraintSet { holders, kinds, sep_at, align_at })
}

/// Proposal 0 packs disjoint slots when they fit; proposals 1 and 2 lay
/// two-slot staircases; proposal 3 lays a three-slot staircase; later
/// proposals draw slots at random.
fn propose_supports(
    index: usize,
    m: usize,
    cs: &ConstraintSet,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    let sep: Vec<LabelId> =
        (0..cs.kinds.len()).filter(|&l| cs.kinds[l] == LabelKind::SeparateRequired).collect();
    let align: Vec<LabelId> =
        (0..cs.kinds.len()).filter(|&l| cs.kinds[l] == LabelKind::AlignOnly).collect();
    let mut supports: Vec<Vec<usize>> = cs
        .kinds
        .iter()
        .map(|kind| match kind {
            LabelKind::Private => (1..=m).collect(),
            _ => Vec::new(),
        })
        .collect();
    match index {
        0 => {
            if 2 * sep.len() + align.len() > m {
                return None;
            }
            for (i, &l) in sep.iter().enumerate() {
                supports[l] = vec![2 * i + 1, 2 * i + 2];
            }
            for (i, &l) in align.iter().enumerate() {
                supports[l] = vec![2 * sep.len() + i + 1];
            }
        }
        1 | 2 => {
            let stride = if index == 1 { 2 } else { 1 };
            for (i, &l) in sep.iter().enumerate() {
                let mut pair = vec![(stride * i) % m + 1, (stride * i + 1) % m + 1];
                pair.sort_unstable();
                supports[l] = pair;
            }
            for (i, &l) in align.iter().enumerate() {
                supports[l] = vec![(stride * sep.len() + i) % m + 1];
            }
        }
        3 => {
            for (i, &l) in sep.iter().enumerate() {
                let mut triple = vec![i % m + 1, (i + 1) % m + 1, (i + 2) % m + 1];
                triple.sort_unstable();
                triple.dedup();
                supports[l] = triple;
            }
            for (i, &l) in align.iter().enumerate() {
                supports[l] = vec![(sep.len() + 2 + i) % m + 1];
            }
        }
        _ => {
            for &l in &sep {
                let width = if rng.gen_range(0..2) == 0 { 2 } else { 3 };
                let mut slots = BTreeSet::new();
                while slots.len() < width.min(m) {
                    slots.insert(rng.gen_range(1..=m));
                }
                supports[l] = slots.into_iter().collect();
            }
            for &l in &align {
                supports[l] = vec![rng.gen_range(1..=m)];
            }
        }
    }
    Some(supports)
}

/// A switch set is usable at receiver `j` when it splits every separated
/// support into a switched and an unswitched part and leaves every multi-slot
/// aligned support untouched. One-slot aligned supports hold under any
/// pattern.
fn valid_switch(
    j: usize,
    switch: &BTreeSet<usize>,
    supports: &[Vec<usize>],
    cs: &ConstraintSet,
) -> bool {
    for &l in &cs.sep_at[j] {
        let hit = supports[l].iter().filter(|s| switch.contains(s)).count();
        if hit == 0 || hit == supports[l].len() {
            return false;
        }
    }
    for &l in &cs.align_at[j] {
        if supports[l].len() >= 2 && supports[l].iter().any(|s| switch.contains(s)) {
            return false;
        }
    }
    true
}

/// Candidate switch sets for receiver `j`, most specific first: the top slot
/// of each separated support, everything the separated supports cover minus
/// aligned cover, and the bottom slots. Only set-wise valid candidates are
/// returned; the caller picks the first that attains full rank.
fn switch_candidates(
    j: usize,
    supports: &[Vec<usize>],
    cs: &ConstraintSet,
) -> Vec<BTreeSet<usize>> {
    let top: BTreeSet<usize> =
        cs.sep_at[j].iter().map(|&l| *supports[l].last().expect("separated support")).collect();
    let bottom: BTreeSet<usize> = cs.sep_at[j].iter().map(|&l| supports[l][0]).collect();
    let mut cover: BTreeSet<usize> =
        cs.sep_at[j].iter().flat_map(|&l| supports[l].iter().copied()).collect();
    for &l in &cs.align_at[j] {
        if supports[l].len() >= 2 {
            for s in &supports[l] {
                cover.remove(s);
            }
        }
    }
    let mut out = Vec::new();
    for cand in [top, cover, bottom] {
        if valid_switch(j, &cand, supports, cs) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Exact probe of the interference-free desired dimension at receiver `j`
/// under one candidate switch set, with freshly drawn integer gains.
fn probe_dim(
    t: &NetworkTopology,
    windows: &WindowAssignment,
    values: &[Vec<Rat>],
    j: usize,
    switch: &BTreeSet<usize>,
    gains: &BTreeMap<usize, [Rat; 2]>,
) -> usize {
    let image = |v: usize, l: LabelId| -> Vec<Rat> {
        values[l]
            .iter()
            .enumerate()
            .map(|(idx, x)| {
                let mode = usize::from(switch.contains(&(idx + 1)));
                gains[&v][mode].clone() * x.clone()
            })
            .collect()
    };
    let mut int_cols: Vec<Vec<Rat>> = Vec::new();
    for &i in t.interferers(j) {
        for &l in &windows.windows[i] {
            int_cols.push(image(i, l));
        }
    }
    let mut all_cols = int_cols.clone();
    for &l in &windows.windows[j] {
        all_cols.push(image(j, l));
    }
    let rank_int = if int_cols.is_empty() { 0 } else { rank_exact(&Matrix::from_cols(&int_cols)) };
    rank_exact(&Matrix::from_cols(&all_cols)) - rank_int
}

/// Per receiver, picks the first candidate switch set whose exact rank probe
/// attains the full desired dimension `delta + 1`; fails if any receiver has
/// no working candidate.
#[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
fn pick_patterns(
    t: &NetworkTopology,
    m: usize,
    delta: usize,
    supports: &[Vec<usize>],
    values: &[Vec<Rat>],
    windows: &WindowAssignment,
    cs: &ConstraintSet,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    let k = t.k();
    let mut patterns = vec![Vec::new(); k + 1];
    for j in 1..=k {
        let mut links: Vec<usize> = t.interferers(j).iter().copied().collect();
        links.push(j);
        links.sort_unstable();
        let mut gains = BTreeMap::new();
        for i in links {
            gains.insert(
                i,
                [rat_int(rng.gen_range(1..=VALUE_MAX)), rat_int(rng.gen_range(1..=VALUE_MAX))],
            );
        }
        let switch = switch_candidates(j, supports, cs)
            .into_iter()
            .find(|cand| probe_dim(t, windows, values, j, cand, &gains) > delta)?;
        patterns[j] = (1..=m).map(|s| if switch.contains(&s) { 2 } else { 1 }).collect();
    }
    Some(patterns)
}

fn draw_values(supports: &[Vec<usize>], m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    supports
        .iter()
        .map(|supp| {
            let mut v = vec![rat_int(0); m];
            for &s in supp {
                v[s - 1] = rat_int(rng.gen_range(1..=VALUE_MAX));
            }
            v
        })
        .collect()
}

/// Exact genericity gate: every subset of `min(q, m)` label vectors must be
/// linearly independent.
fn all_small_subsets_independent(values: &[Vec<Rat>], m: usize) -> bool {
    let q = values.len();
    let r = q.min(m);
    (0..q).combinations(r).all(|subset| {
        let cols: Vec<Vec<Rat>> = subset.into_iter().map(|i| values[i].clone()).collect();
        rank_exact(&Matrix::from_cols(&cols)) == r
    })
}

/// Assembles the scheme a plan describes: each vertex transmits the value
/// vectors of its window labels, in window order.
pub fn build_scheme(plan: &LabelPlan) -> LinearScheme {
    let k = plan.mode_patterns.len() - 1;
    let mut beamforming = BTreeMap::new();
    let mut mode_patterns = BTreeMap::new();
    for v in 1..=k {
        let cols: Vec<Vec<Rat>> =
            plan.windows.windows[v].iter().map(|&l| plan.values[l].clone()).collect();
        beamforming.insert(v, Matrix::from_cols(&cols));
        mode_patterns.insert(v, plan.mode_patterns[v].clone());
    }
    LinearScheme::new(plan.m, 2, beamforming, mode_patterns)
        .expect("a planned scheme is shape-valid by construction")
}

/// Searches for supports, values, and mode patterns that satisfy every
/// constraint and pass exact verification at rate `(delta+1)/(2delta+3)`.
///
/// Structurally impossible layouts (degenerate windows, contradictory
/// constraints) fail immediately; otherwise up to `TIM_MAX_RETRIES`
/// (default 32) support proposals are tried, each with a few value redraws.
pub fn plan_supports_and_modes(
    t: &NetworkTopology,
    a: &TopologyAnalysis,
    windows: &WindowAssignment,
    seed: u64,
) -> Result<LabelPlan, SchemeError> {
    let delta = windows.delta;
    let m = 2 * delta + 3;
    check_window_sharing(a, windows)?;
    let cs = collect_constraints(t, windows)?;
    let target = delta_term_value(delta);
    let budget = max_retries();
    for attempt in 0..budget {
        let mut rng = seeds::rng_from(seeds::substream(seed, 1000 + attempt as u64));
        let Some(supports) = propose_supports(attempt, m, &cs, &mut rng) else {
            continue;
        };
        for _ in 0..VALUE_REDRAWS {
            let values = draw_values(&supports, m, &mut rng);
            if !all_small_subsets_independent(&values, m) {
                continue;
            }
            let Some(patterns) =
                pick_patterns(t, m, delta, &supports, &values, windows, &cs, &mut rng)
            else {
                continue;
            };
            let plan = LabelPlan {
                m,
                delta,
                windows: windows.clone(),
                holders: cs.holders.clone(),
                kinds: cs.kinds.clone(),
                supports: supports.clone(),
                values,
                mode_patterns: patterns.clone(),
            };
            let scheme = build_scheme(&plan);
            let report = verify_scheme(
                t,
                &scheme,
                &target,
                INTERNAL_TRIALS,
                seeds::substream(seed, 2000 + attempt as u64),
            )
            .expect("internal verification of a planned scheme is well-formed");
            if report.pass {
                return Ok(plan);
            }
            break;
        }
    }
    Err(SchemeError::PlanInfeasible {
        reason: format!("no support proposal yielded a verified scheme within {budget} attempts"),
    })
}

/// Synthesizes a verified scheme for a topology whose co-interferer counts
/// never exceed two, at rate `(Δ_min+1)/(2Δ_min+3)`. Topologies that admit
/// the half-DoF construction are delegated to it.
pub fn synthesize_two_coint(
    t: &NetworkTopology,
    a: &TopologyAnalysis,
    seed: u64,
) -> Result<LinearScheme, SchemeError> {
    match classify(a) {
        TopologyClass::InterferenceFree | TopologyClass::Best => {
            return synthesize_half(t, a, seed);
        }
        TopologyClass::TwoCoInterferer => {}
        TopologyClass::General => {
            return Err(SchemeError::WrongClass(TopologyClass::General));
        }
    }
    let delta = a.delta_min.expect("internal conflicts exist in this class");
    let windows = assign_windows(a, delta)?;
    let plan = plan_supports_and_modes(t, a, &windows, seed)?;
    Ok(build_scheme(&plan))
}
