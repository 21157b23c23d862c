//! Exact verification of linear schemes against random rational channels.
//!
//! A channel realization drawn per trial assigns each present link and each
//! receiver mode an integer gain. Receiver `j` observes each transmitted
//! column through the diagonal channel its mode pattern selects; its decoded
//! dimension is `rank([A_j B_j]) - rank(A_j)` where `A_j` stacks the
//! interference images and `B_j` the desired ones. All ranks are exact.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

pub use crate::linalg::rank_exact;

use crate::linalg::Matrix;
use crate::ratio::{format_rat, rat, rat_int, Rat};
use crate::scheme::LinearScheme;
use crate::seeds;
use crate::topology::NetworkTopology;

const GAIN_MAX: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("no channel gain for the link from transmitter {i} to receiver {j}")]
    LinkAbsent { j: usize, i: usize },
    #[error("scheme and topology disagree: {0}")]
    DimensionMismatch(String),
}

/// One draw of channel gains: `(j, i, mode) -> gain` for every present link
/// `i ∈ I_j ∪ {j}` and every mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelRealization {
    pub num_modes: usize,
    pub gains: BTreeMap<(usize, usize, usize), Rat>,
}

/// Draws independent uniform integer gains in `[1, 2^20]`, iterating
/// receivers in ascending order, then links in ascending transmitter order,
/// then modes.
pub fn draw_channels(t: &NetworkTopology, num_modes: usize, seed: u64) -> ChannelRealization {
    let mut rng = seeds::rng_from(seed);
    let mut gains = BTreeMap::new();
    for j in 1..=t.k() {
        let mut links: Vec<usize> = t.interferers(j).iter().copied().collect();
        links.push(j);
        links.sort_unstable();
        for i in links {
            for mode in 1..=num_modes {
                gains.insert((j, i, mode), rat_int(rng.gen_range(1..=GAIN_MAX)));
            }
        }
    }
    ChannelRealization { num_modes, gains }
}

fn gain_vector(
    j: usize,
    i: usize,
    scheme: &LinearScheme,
    ch: &ChannelRealization,
) -> Result<Vec<Rat>, VerifyError> {
    scheme
        .mode_pattern(j)
        .iter()
        .map(|&mode| ch.gains.get(&(j, i, mode)).cloned().ok_or(VerifyError::LinkAbsent { j, i }))
        .collect()
}

/// The effective diagonal channel from transmitter `i` to receiver `j`:
/// slot `t` carries the gain of the mode `L_j(t)` selects.
pub fn channel_matrix(
    j: usize,
    i: usize,
    scheme: &LinearScheme,
    ch: &ChannelRealization,
) -> Result<Matrix, VerifyError> {
    let diag = gain_vector(j, i, scheme, ch)?;
    let mut h = Matrix::zero(scheme.m(), scheme.m());
    for (t, g) in diag.into_iter().enumerate() {
        h.set(t, t, g);
    }
    Ok(h)
}

fn receiver_ranks(
    j: usize,
    t: &NetworkTopology,
    scheme: &LinearScheme,
    ch: &ChannelRealization,
) -> Result<(usize, usize), VerifyError> {
    let mut images: Vec<Matrix> = Vec::new();
    for &i in t.interferers(j) {
        images.push(scheme.beamforming(i).scale_rows(&gain_vector(j, i, scheme, ch)?));
    }
    let rank_interference = if images.is_empty() {
        0
    } else {
        rank_exact(&Matrix::hstack(&images.iter().collect::<Vec<_>>()))
    };
    images.push(scheme.beamforming(j).scale_rows(&gain_vector(j, j, scheme, ch)?));
    let rank_joint = rank_exact(&Matrix::hstack(&images.iter().collect::<Vec<_>>()));
    Ok((rank_interference, rank_joint))
}

/// The number of desired dimensions receiver `j` can decode free of
/// interference under one channel realization.
pub fn projected_desired_dim(
    j: usize,
    t: &NetworkTopology,
    scheme: &LinearScheme,
    ch: &ChannelRealization,
) -> Result<usize, VerifyError> {
    check_compatible(t, scheme)?;
    let (rank_interference, rank_joint) = receiver_ranks(j, t, scheme, ch)?;
    Ok(rank_joint - rank_interference)
}

fn check_compatible(t: &NetworkTopology, scheme: &LinearScheme) -> Result<(), VerifyError> {
    if scheme.k() != t.k() {
        return Err(VerifyError::DimensionMismatch(format!(
            "scheme covers {} users but the topology has {}",
            scheme.k(),
            t.k()
        )));
    }
    Ok(())
}

/// Exact ranks behind one receiver's decoded dimension, kept from the trial
/// that attained its minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverDiagnostics {
    pub rank_interference: usize,
    pub rank_joint: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub pass: bool,
    /// Worst per-receiver normalized rate `min_j d_j / m` across all trials.
    pub achieved: Rat,
    /// Per receiver, the minimum decoded dimension over all trials.
    pub per_receiver: BTreeMap<usize, usize>,
    pub trials: usize,
    pub seed: u64,
    pub diagnostics: BTreeMap<usize, ReceiverDiagnostics>,
}

impl VerificationReport {
    /// Canonical single-line JSON form with exactly the keys `pass`,
    /// `achieved`, `per_receiver`, `trials`, and `seed`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            pass: bool,
            achieved: String,
            per_receiver: &'a BTreeMap<usize, usize>,
            trials: usize,
            seed: u64,
        }
        serde_json::to_string(&Doc {
            pass: self.pass,
            achieved: format_rat(&self.achieved),
            per_receiver: &self.per_receiver,
            trials: self.trials,
            seed: self.seed,
        })
        .expect("serialization cannot fail")
    }
}

/// Runs `trials` independent channel draws (substreams of `seed`) and checks
/// that every receiver decodes at least `target·m` dimensions in every trial.
pub fn verify_scheme(
    t: &NetworkTopology,
    scheme: &LinearScheme,
    target: &Rat,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    assert!(trials >= 1, "verification needs at least one trial");
    check_compatible(t, scheme)?;
    let m = scheme.m();
    let needed = target * rat_int(m as i64);
    let mut pass = true;
    let mut per_receiver: BTreeMap<usize, usize> = BTreeMap::new();
    let mut diagnostics: BTreeMap<usize, ReceiverDiagnostics> = BTreeMap::new();
    for trial in 0..trials {
        let ch = draw_channels(t, scheme.num_modes(), seeds::substream(seed, trial as u64));
        for j in 1..=t.k() {
            let (rank_interference, rank_joint) = receiver_ranks(j, t, scheme, &ch)?;
            let d = rank_joint - rank_interference;
            if rat_int(d as i64) < needed {
                pass = false;
            }
            let best = per_receiver.entry(j).or_insert(usize::MAX);
            if d < *best {
                *best = d;
                diagnostics.insert(j, ReceiverDiagnostics { rank_interference, rank_joint });
            }
        }
    }
    let min_d = *per_receiver.values().min().expect("at least one receiver");
    Ok(VerificationReport {
        pass,
        achieved: rat(min_d as i64, m as i64),
        per_receiver,
        trials,
        seed,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b};
    use crate::graphs::analyze;
    use crate::scheme::{synthesize_half, synthesize_two_coint};

    fn half_scheme_a() -> (NetworkTopology, LinearScheme) {
        let t = fixture_a();
        let a = analyze(&t);
        let s = synthesize_half(&t, &a, 1).unwrap();
        (t, s)
    }

    #[test]
    fn channel_draw_is_deterministic_and_covers_present_links() {
        let t = fixture_a();
        let ch = draw_channels(&t, 2, 42);
        assert_eq!(ch, draw_channels(&t, 2, 42));
        assert_ne!(ch, draw_channels(&t, 2, 43));
        assert_eq!(ch.gains.len(), 20);
        assert!(ch.gains.contains_key(&(1, 3, 2)));
        assert!(!ch.gains.contains_key(&(1, 2, 1)));
        assert!(ch.gains.values().all(|g| *g >= rat_int(1) && *g <= rat_int(GAIN_MAX)));
    }

    #[test]
    fn channel_matrix_selects_gains_by_mode_pattern() {
        let (t, s) = half_scheme_a();
        let ch = draw_channels(&t, 2, 1);
        let h = channel_matrix(1, 3, &s, &ch).unwrap();
        assert_eq!(h.get(0, 0), &ch.gains[&(1, 3, 1)]);
        assert_eq!(h.get(1, 1), &ch.gains[&(1, 3, 1)]);
        let h = channel_matrix(2, 1, &s, &ch).unwrap();
        assert_eq!(h.get(0, 0), &ch.gains[&(2, 1, 1)]);
        assert_eq!(h.get(1, 1), &ch.gains[&(2, 1, 2)]);
        assert_eq!(h.get(0, 1), &rat_int(0));
        assert_eq!(
            channel_matrix(1, 2, &s, &ch).unwrap_err(),
            VerifyError::LinkAbsent { j: 1, i: 2 }
        );
    }

    #[test]
    fn aligned_interferers_collapse_to_one_dimension() {
        let (t, s) = half_scheme_a();
        let ch = draw_channels(&t, 2, 3);
        let a = Matrix::hstack(&[
            &channel_matrix(1, 3, &s, &ch).unwrap().mul(s.beamforming(3)),
            &channel_matrix(1, 4, &s, &ch).unwrap().mul(s.beamforming(4)),
        ]);
        assert_eq!(rank_exact(&a), 1);
    }

    #[test]
    fn mode_switching_separates_a_same_set_interferer() {
        let (t, s) = half_scheme_a();
        for seed in [1, 2, 3] {
            let ch = draw_channels(&t, 2, seed);
            assert_eq!(projected_desired_dim(2, &t, &s, &ch).unwrap(), 1);
            assert_eq!(projected_desired_dim(4, &t, &s, &ch).unwrap(), 1);
        }
    }

    #[test]
    fn report_on_fixture_a_has_the_canonical_form() {
        let (t, s) = half_scheme_a();
        let report = verify_scheme(&t, &s, &rat(1, 2), 3, 1).unwrap();
        assert!(report.pass);
        assert_eq!(report.achieved, rat(1, 2));
        assert_eq!(
            report.to_json(),
            r#"{"pass":true,"achieved":"1/2","per_receiver":{"1":1,"2":1,"3":1,"4":1},"trials":3,"seed":1}"#
        );
        for j in 1..=4 {
            let d = report.diagnostics[&j];
            assert_eq!(d.rank_joint - d.rank_interference, report.per_receiver[&j]);
        }
    }

    #[test]
    fn verification_fails_against_an_unreachable_target() {
        let t = fixture_b();
        let a = analyze(&t);
        let s = synthesize_two_coint(&t, &a, 1).unwrap();
        let report = verify_scheme(&t, &s, &rat(1, 2), 3, 1).unwrap();
        assert!(!report.pass);
        assert_eq!(report.achieved, rat(2, 5));
    }

    #[test]
    fn verification_is_deterministic_per_seed() {
        let t = fixture_b();
        let a = analyze(&t);
        let s = synthesize_two_coint(&t, &a, 2).unwrap();
        let r1 = verify_scheme(&t, &s, &rat(2, 5), 3, 9).unwrap();
        let r2 = verify_scheme(&t, &s, &rat(2, 5), 3, 9).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn gains_of_unused_modes_do_not_affect_decoding() {
        let (t, s) = half_scheme_a();
        let mut ch = draw_channels(&t, 2, 5);
        let before = projected_desired_dim(1, &t, &s, &ch).unwrap();
        ch.gains.insert((1, 3, 2), rat_int(777));
        ch.gains.insert((1, 4, 2), rat_int(778));
        assert_eq!(projected_desired_dim(1, &t, &s, &ch).unwrap(), before);
    }

    #[test]
    fn removing_an_interferer_never_shrinks_the_decoded_dimension() {
        let t = fixture_b();
        let a = analyze(&t);
        let s = synthesize_two_coint(&t, &a, 3).unwrap();
        let fewer = NetworkTopology::new(
            5,
            vec![(1, vec![2]), (2, vec![1]), (3, vec![4, 5]), (4, vec![1, 2])],
        )
        .unwrap();
        for seed in [1, 2, 3, 4] {
            let ch = draw_channels(&t, 2, seed);
            let full = projected_desired_dim(1, &t, &s, &ch).unwrap();
            let reduced = projected_desired_dim(1, &fewer, &s, &ch).unwrap();
            assert!(reduced >= full);
        }
    }

    #[test]
    fn interference_free_receivers_decode_all_streams() {
        let t = NetworkTopology::interference_free(3);
        let a = analyze(&t);
        let s = synthesize_half(&t, &a, 1).unwrap();
        let ch = draw_channels(&t, 2, 1);
        for j in 1..=3 {
            assert_eq!(projected_desired_dim(j, &t, &s, &ch).unwrap(), 1);
        }
    }

    #[test]
    fn mismatched_scheme_and_topology_are_rejected() {
        let (_, s) = half_scheme_a();
        let t5 = fixture_b();
        assert!(matches!(
            verify_scheme(&t5, &s, &rat(1, 2), 1, 1),
            Err(VerifyError::DimensionMismatch(_))
        ));
    }
}
