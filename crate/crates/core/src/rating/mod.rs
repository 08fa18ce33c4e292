//! The four predictors behind one interface: predict a team ordering for a
//! match, then update member ratings from the observed ranks.

mod elo;
mod engine;
mod glicko;
mod previous_rank;
mod trueskill;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aggregation::contribution_weights;
use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::types::TeamKey;

pub use elo::{elo_pair_probability, elo_update_team, elo_win_probability, normalize_observed_rank};
pub use engine::{predict_ranks, process_match, MatchUpdate, RatingEngine, UpdateDiagnostics};
pub use glicko::{
    glicko_d_squared, glicko_distribute, glicko_g, glicko_pair_probability, glicko_update_team, glicko_win_probability,
    GlickoTeamUpdate, MemberShares, PROBABILITY_CLAMP,
};
pub use previous_rank::previousrank_scores;
pub use trueskill::{
    inflate_sigma, trueskill_update_match, trueskill_update_pair, trueskill_v, trueskill_w, MatchPosterior, PairUpdate,
    SkillEstimate, SIGMA_FLOOR,
};

/// Which deviation update TrueSkill uses.
///
/// `Standard` is the variance-form posterior with argument `t / c`.
/// `Unscaled` subtracts `sigma * (sigma²/c²) v (v + t)` with the
/// unscaled `t`; it can go negative for lopsided games, so it is floored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrueSkillMode {
    #[default]
    Standard,
    Unscaled,
}

impl fmt::Display for TrueSkillMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrueSkillMode::Standard => "standard",
            TrueSkillMode::Unscaled => "unscaled",
        })
    }
}

impl FromStr for TrueSkillMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "standard" => Ok(TrueSkillMode::Standard),
            "unscaled" => Ok(TrueSkillMode::Unscaled),
            other => Err(Error::Config(format!("unknown trueskill mode `{other}`"))),
        }
    }
}

/// Tunable constants of the rating systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T = f64> {
    /// Elo magnitude factor.
    pub k: T,
    /// Elo and Glicko rating scale.
    pub d: T,
    /// TrueSkill performance noise.
    pub beta: T,
    /// TrueSkill dynamics noise added before each match.
    pub tau: T,
    /// Glicko constant, ln(10) / 400 rounded to five significant digits.
    pub q: T,
    pub trueskill_mode: TrueSkillMode,
}

pub const DEFAULT_K: f64 = 10.0;
pub const DEFAULT_D: f64 = 400.0;
pub const DEFAULT_BETA: f64 = 4.16;
pub const DEFAULT_TAU: f64 = 25.0 / 300.0;
pub const GLICKO_Q: f64 = 0.0057565;

impl<T: Scalar> Default for SystemParams<T> {
    fn default() -> Self {
        SystemParams {
            k: T::lit(DEFAULT_K),
            d: T::lit(DEFAULT_D),
            beta: T::lit(DEFAULT_BETA),
            tau: T::lit(DEFAULT_TAU),
            q: T::lit(GLICKO_Q),
            trueskill_mode: TrueSkillMode::Standard,
        }
    }
}

impl<T: Scalar> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("k", self.k)?;
        positive("d", self.d)?;
        positive("beta", self.beta)?;
        positive("q", self.q)?;
        if !(self.tau >= T::zero() && self.tau.is_finite()) {
            return Err(Error::Config(format!("tau must be non-negative, got {}", self.tau)));
        }
        Ok(())
    }
}

/// Member-level split of a team rating change.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T = f64> {
    pub deltas: Vec<T>,
    pub uniform_fallback: bool,
}

/// Splits `team_delta` among members in proportion to `member_values`.
pub fn distribute_team_delta<T: Scalar>(member_values: &[T], team_delta: T) -> Result<Distribution<T>> {
    if member_values.is_empty() {
        return Err(Error::InvalidTeam("team has no members".into()));
    }
    let w = contribution_weights(member_values);
    Ok(Distribution {
        deltas: w.values.iter().map(|&wi| wi * team_delta).collect(),
        uniform_fallback: w.uniform_fallback,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedTeam<T = f64> {
    pub key: TeamKey,
    /// Aggregated team mean at prediction time; for PreviousRank the summed
    /// previous ranks (lower is better).
    pub rating: T,
    pub observed_rank: u32,
}

/// Predicted ordering of one match, best team first, with the observed rank
/// of every team.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord<T = f64> {
    pub match_id: String,
    pub teams: Vec<PredictedTeam<T>>,
}

impl<T: Scalar> PredictionRecord<T> {
    pub fn predicted_order(&self) -> Vec<TeamKey> {
        self.teams.iter().map(|t| t.key.clone()).collect()
    }

    /// Observed ranks listed in predicted order.
    pub fn observed_ranks(&self) -> Vec<u32> {
        self.teams.iter().map(|t| t.observed_rank).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribute_examples() {
        assert_eq!(
            distribute_team_delta(&[1500.0, 1500.0], 5.0).unwrap().deltas,
            vec![2.5, 2.5]
        );
        assert_eq!(
            distribute_team_delta(&[1500.0, 2500.0], 8.0).unwrap().deltas,
            vec![3.0, 5.0]
        );
        assert_eq!(
            distribute_team_delta(&[1200.0, 1800.0], 0.0).unwrap().deltas,
            vec![0.0, 0.0]
        );
        let d = distribute_team_delta(&[-3.0, 1800.0], 4.0).unwrap();
        assert!(d.uniform_fallback);
        assert_eq!(d.deltas, vec![2.0, 2.0]);
        assert!(distribute_team_delta::<f64>(&[], 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::<f64>::default().validate().is_ok());
        let bad = SystemParams {
            k: 0.0,
            ..SystemParams::default()
        };
        assert!(bad.validate().unwrap_err().is_config());
        let bad = SystemParams {
            tau: -0.1,
            ..SystemParams::default()
        };
        assert!(bad.validate().is_err());
        let zero_tau = SystemParams {
            tau: 0.0,
            ..SystemParams::default()
        };
        assert!(zero_tau.validate().is_ok());
    }

    #[test]
    fn mode_parses() {
        assert_eq!(
            "unscaled".parse::<TrueSkillMode>(),
            Ok(TrueSkillMode::Unscaled)
        );
        assert!("exact".parse::<TrueSkillMode>().is_err());
    }
}
