//! Two-team TrueSkill updates without draws, and their decomposition into
//! adjacent-rank pairs for fields of more than two teams.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rating::{SystemParams, TrueSkillMode};

/// Deviation floor applied when the unscaled deviation update goes
/// non-positive.
pub const SIGMA_FLOOR: f64 = 0.001;

/// Below this argument `v` is evaluated by continued fraction.
const TAIL_START: f64 = -5.0;
const TAIL_TERMS: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkillEstimate<T = f64> {
    pub mu: T,
    pub sigma: T,
}

impl<T> SkillEstimate<T> {
    pub fn new(mu: T, sigma: T) -> Self {
        SkillEstimate { mu, sigma }
    }
}

fn v_f64(x: f64) -> f64 {
    if x < TAIL_START {
        // cdf(x) / pdf(x) is the Mills ratio of -x, expanded as
        // 1 / (z + 1 / (z + 2 / (z + 3 / ...))).
        let z = -x;
        let mut tail = z;
        for k in (1..=TAIL_TERMS).rev() {
            tail = z + f64::from(k) / tail;
        }
        return tail;
    }
    let ln_pdf = -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln();
    let ln_cdf = (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln();
    (ln_pdf - ln_cdf).exp()
}

/// `pdf(x) / cdf(x)` of the standard normal.
pub fn trueskill_v<T: Scalar>(x: T) -> T {
    T::lit(v_f64(x.as_f64()))
}

/// `v(x) * (v(x) + x)`, in `(0, 1)`.
pub fn trueskill_w<T: Scalar>(x: T) -> T {
    let v = trueskill_v(x);
    v * (v + x)
}

/// Adds the dynamics noise `tau` to a deviation: `sqrt(sigma² + tau²)`.
pub fn inflate_sigma<T: Scalar>(sigma: T, tau: T) -> T {
    (sigma * sigma + tau * tau).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairUpdate<T = f64> {
    pub winner: SkillEstimate<T>,
    pub loser: SkillEstimate<T>,
    /// Deviations floored at [`SIGMA_FLOOR`] (unscaled mode only).
    pub sigma_floors: u32,
}

/// Posterior of a decided game between two teams, `winner` having won.
pub fn trueskill_update_pair<T: Scalar>(
    winner: SkillEstimate<T>,
    loser: SkillEstimate<T>,
    params: &SystemParams<T>,
) -> Result<PairUpdate<T>> {
    for s in [winner.sigma, loser.sigma] {
        if s.is_nan() || s <= T::zero() {
            return Err(Error::InvalidTeam(format!("non-positive deviation {s}")));
        }
    }
    let two = T::lit(2.0);
    let t = winner.mu - loser.mu;
    let c_sq = two * params.beta * params.beta + winner.sigma * winner.sigma + loser.sigma * loser.sigma;
    let c = c_sq.sqrt();
    let v = trueskill_v(t / c);
    let mut sigma_floors = 0;

    let mut posterior = |est: SkillEstimate<T>, sign: T| {
        let var = est.sigma * est.sigma;
        let mu = est.mu + sign * var / c * v;
        let sigma = match params.trueskill_mode {
            TrueSkillMode::Standard => (var * (T::one() - var / c_sq * v * (v + t / c))).sqrt(),
            TrueSkillMode::Unscaled => {
                let s = est.sigma - est.sigma * (var / c_sq * v * (v + t));
                if s > T::zero() {
                    s
                } else {
                    sigma_floors += 1;
                    T::lit(SIGMA_FLOOR)
                }
            }
        };
        SkillEstimate { mu, sigma }
    };
    let winner = posterior(winner, T::one());
    let loser = posterior(loser, -T::one());
    Ok(PairUpdate {
        winner,
        loser,
        sigma_floors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchPosterior<T = f64> {
    /// Updated team estimates, aligned with the input teams.
    pub teams: Vec<SkillEstimate<T>>,
    pub sigma_floors: u32,
}

/// Updates every team of a strictly ranked field.
///
/// Teams are sorted by observed rank and each adjacent pair (rank k beats
/// rank k + 1) is updated against the pre-match estimates; the resulting
/// deltas are summed and applied at once, so the outcome does not depend on
/// pair order.
pub fn trueskill_update_match<T: Scalar>(
    observed_ranks: &[u32],
    teams: &[SkillEstimate<T>],
    params: &SystemParams<T>,
) -> Result<MatchPosterior<T>> {
    if teams.len() < 2 || observed_ranks.len() != teams.len() {
        return Err(Error::InvalidField(format!(
            "{} teams with {} ranks",
            teams.len(),
            observed_ranks.len()
        )));
    }
    crate::types::validate_ranks(observed_ranks)?;
    let mut by_rank: Vec<usize> = (0..teams.len()).collect();
    by_rank.sort_by_key(|&i| observed_ranks[i]);

    let mut mu_delta = vec![T::zero(); teams.len()];
    let mut sigma_delta = vec![T::zero(); teams.len()];
    let mut sigma_floors = 0;
    for pair in by_rank.windows(2) {
        let (w, l) = (pair[0], pair[1]);
        let up = trueskill_update_pair(teams[w], teams[l], params)?;
        sigma_floors += up.sigma_floors;
        mu_delta[w] = mu_delta[w] + up.winner.mu - teams[w].mu;
        sigma_delta[w] = sigma_delta[w] + up.winner.sigma - teams[w].sigma;
        mu_delta[l] = mu_delta[l] + up.loser.mu - teams[l].mu;
        sigma_delta[l] = sigma_delta[l] + up.loser.sigma - teams[l].sigma;
    }
    let floor = T::lit(SIGMA_FLOOR);
    let updated = teams
        .iter()
        .enumerate()
        .map(|(i, est)| {
            let mut sigma = est.sigma + sigma_delta[i];
            if sigma.is_nan() || sigma <= T::zero() {
                sigma_floors += 1;
                sigma = floor;
            }
            SkillEstimate {
                mu: est.mu + mu_delta[i],
                sigma,
            }
        })
        .collect();
    Ok(MatchPosterior {
        teams: updated,
        sigma_floors,
    })
}
