//! Naive baseline: players are expected to finish where they finished last.

use crate::num::Scalar;
use crate::store::RatingStore;
use crate::types::{MatchRecord, RatingSystemKind};

/// Team score: the sum of the members' previous ranks, with `N / 2` for
/// players without history (N = number of teams in this match). Lower is
/// better.
pub fn previousrank_scores<T: Scalar>(m: &MatchRecord, store: &RatingStore<T>) -> Vec<T> {
    let unseen = T::from_count(m.team_count()) / T::lit(2.0);
    m.teams
        .iter()
        .map(|team| {
            team.members
                .iter()
                .map(|p| {
                    store
                        .get_or_default(p, RatingSystemKind::PreviousRank)
                        .last_rank
                        .map_or(unseen, |r| T::from_count(r as usize))
                })
                .sum()
        })
        .collect()
}
