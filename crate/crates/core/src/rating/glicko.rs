//! Glicko generalised to a field of N teams.

use crate::aggregation::contribution_weights;
use crate::error::Result;
use crate::num::{pair_count, Scalar};
use crate::rating::SystemParams;
use crate::types::Field;

/// Lower/upper bound applied to the win probability inside `d²`.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

/// Attenuation of a rating difference by the deviation `sigma`, in `(0, 1]`.
pub fn glicko_g<T: Scalar>(sigma: T, params: &SystemParams<T>) -> T {
    let three = T::lit(3.0);
    let pi_sq = T::PI() * T::PI();
    T::one() / (T::one() + three * params.q * params.q * sigma * sigma / pi_sq).sqrt()
}

pub fn glicko_pair_probability<T: Scalar>(
    (mu_i, sigma_i): (T, T),
    (mu_j, sigma_j): (T, T),
    params: &SystemParams<T>,
) -> T {
    let g = glicko_g((sigma_i * sigma_i + sigma_j * sigma_j).sqrt(), params);
    let exponent = -g * (mu_i - mu_j) / params.d;
    T::one() / (T::one() + T::lit(10.0).powf(exponent))
}

pub fn glicko_win_probability<T: Scalar>(field: &Field<T>, i: usize, params: &SystemParams<T>) -> Result<T> {
    field.check_index(i)?;
    let me = (field.entries[i].mu, field.sigma_at(i)?);
    let mut total = T::zero();
    for j in (0..field.len()).filter(|&j| j != i) {
        let other = (field.entries[j].mu, field.sigma_at(j)?);
        total = total + glicko_pair_probability(me, other, params);
    }
    Ok(total / pair_count::<T>(field.len()))
}

/// `[q² Σ_{j≠i} g(σ_j)² Pr (1 - Pr)]⁻¹` with the aggregate `Pr` held fixed.
pub fn glicko_d_squared<T: Scalar>(field: &Field<T>, i: usize, win_prob: T, params: &SystemParams<T>) -> Result<T> {
    field.check_index(i)?;
    let eps = T::lit(PROBABILITY_CLAMP);
    let pr = win_prob.max(eps).min(T::one() - eps);
    let mut total = T::zero();
    for j in (0..field.len()).filter(|&j| j != i) {
        let g = glicko_g(field.sigma_at(j)?, params);
        total = total + g * g * pr * (T::one() - pr);
    }
    Ok(T::one() / (params.q * params.q * total))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlickoTeamUpdate<T = f64> {
    pub mu: T,
    pub sigma: T,
    pub win_prob: T,
}

/// Posterior team mean and deviation for team `i` given its normalised
/// observed rank `r_prime`.
pub fn glicko_update_team<T: Scalar>(
    field: &Field<T>,
    i: usize,
    r_prime: T,
    params: &SystemParams<T>,
) -> Result<GlickoTeamUpdate<T>> {
    let pr = glicko_win_probability(field, i, params)?;
    let d_sq = glicko_d_squared(field, i, pr, params)?;
    let sigma = field.sigma_at(i)?;
    let precision = T::one() / (sigma * sigma) + T::one() / d_sq;
    let mut g_total = T::zero();
    for j in (0..field.len()).filter(|&j| j != i) {
        g_total = g_total + glicko_g(field.sigma_at(j)?, params);
    }
    Ok(GlickoTeamUpdate {
        mu: field.entries[i].mu + params.q / precision * g_total * (r_prime - pr),
        sigma: (T::one() / precision).sqrt(),
        win_prob: pr,
    })
}

/// Per-member `(mu, sigma)` deltas of a team-level change.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberShares<T = f64> {
    pub deltas: Vec<(T, T)>,
    /// Number of weight vectors (mean, deviation) that fell back to uniform.
    pub weight_fallbacks: u32,
}

/// Splits the team mean change by mean shares and the deviation change by
/// deviation shares.
pub fn glicko_distribute<T: Scalar>(
    members: &[(T, T)],
    team_mu_delta: T,
    team_sigma_delta: T,
) -> Result<MemberShares<T>> {
    if members.is_empty() {
        return Err(crate::Error::InvalidTeam("team has no members".into()));
    }
    let mus: Vec<T> = members.iter().map(|m| m.0).collect();
    let sigmas: Vec<T> = members.iter().map(|m| m.1).collect();
    let wm = contribution_weights(&mus);
    let ws = contribution_weights(&sigmas);
    Ok(MemberShares {
        deltas: wm
            .values
            .iter()
            .zip(&ws.values)
            .map(|(&a, &b)| (a * team_mu_delta, b * team_sigma_delta))
            .collect(),
        weight_fallbacks: u32::from(wm.uniform_fallback) + u32::from(ws.uniform_fallback),
    })
}
