//! Elo generalised to a field of N teams.
//!
//! The win probability of team `i` averages its logistic (base e) pairwise
//! win chances over the `C(N, 2)` pairs of the field, so the probabilities of
//! all teams sum to one. Observed ranks are mapped onto the same simplex.

use crate::error::{Error, Result};
use crate::num::{pair_count, Scalar};
use crate::rating::SystemParams;
use crate::types::Field;

/// Pairwise chance that a team rated `mu_i` beats one rated `mu_j`.
pub fn elo_pair_probability<T: Scalar>(mu_i: T, mu_j: T, d: T) -> T {
    T::one() / (T::one() + ((mu_j - mu_i) / d).exp())
}

pub fn elo_win_probability<T: Scalar>(field: &Field<T>, i: usize, params: &SystemParams<T>) -> Result<T> {
    field.check_index(i)?;
    let mu_i = field.entries[i].mu;
    let total: T = field
        .entries
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, e)| elo_pair_probability(mu_i, e.mu, params.d))
        .sum();
    Ok(total / pair_count::<T>(field.len()))
}

/// Maps rank `rank` among `n` teams to `(n - rank) / C(n, 2)`.
pub fn normalize_observed_rank<T: Scalar>(n: usize, rank: u32) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidField(format!("{n} team(s), need at least 2")));
    }
    if rank == 0 || rank as usize > n {
        return Err(Error::InvalidRank { rank, teams: n });
    }
    Ok(T::from_count(n - rank as usize) / pair_count::<T>(n))
}

/// `mu + K * (observed - expected)`.
pub fn elo_update_team<T: Scalar>(team_mu: T, r_prime: T, win_prob: T, params: &SystemParams<T>) -> T {
    team_mu + params.k * (r_prime - win_prob)
}
