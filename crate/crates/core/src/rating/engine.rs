use std::ops::AddAssign;

use crate::aggregation::{aggregate_mu, aggregate_sigma, AggregationMethod};
use crate::error::{Error, Result};
use crate::num::{cmp_scalar, Scalar};
use crate::rating::{
    distribute_team_delta, elo_update_team, elo_win_probability, glicko_distribute, glicko_update_team, inflate_sigma,
    normalize_observed_rank, previousrank_scores, trueskill_update_match, PredictedTeam, PredictionRecord,
    SkillEstimate, SystemParams, SIGMA_FLOOR,
};
use crate::store::RatingStore;
use crate::types::{Field, FieldEntry, MatchRecord, Rating, RatingSystemKind};

/// Counters of numerical safeguards that fired while updating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateDiagnostics {
    /// Contribution weight vectors that fell back to uniform.
    pub weight_fallbacks: u64,
    /// Deviations floored to stay positive.
    pub sigma_floors: u64,
}

impl AddAssign for UpdateDiagnostics {
    fn add_assign(&mut self, rhs: Self) {
        self.weight_fallbacks += rhs.weight_fallbacks;
        self.sigma_floors += rhs.sigma_floors;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchUpdate<T = f64> {
    /// Prediction made before the match's own update.
    pub prediction: PredictionRecord<T>,
    pub diagnostics: UpdateDiagnostics,
}

/// One (system, aggregation, parameters) configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingEngine<T = f64> {
    pub system: RatingSystemKind,
    pub aggregation: AggregationMethod,
    pub params: SystemParams<T>,
}

impl<T: Scalar> RatingEngine<T> {
    pub fn new(system: RatingSystemKind, aggregation: AggregationMethod, params: SystemParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(RatingEngine {
            system,
            aggregation,
            params,
        })
    }

    fn member_ratings(&self, m: &MatchRecord, store: &RatingStore<T>) -> Vec<Vec<Rating<T>>> {
        m.teams
            .iter()
            .map(|team| {
                team.members
                    .iter()
                    .map(|p| store.get_or_default(p, self.system))
                    .collect()
            })
            .collect()
    }

    fn team_mus(&self, members: &[Vec<Rating<T>>]) -> Result<Vec<T>> {
        members
            .iter()
            .map(|ratings| {
                let mus: Vec<T> = ratings.iter().map(|r| r.mu).collect();
                aggregate_mu(self.aggregation, &mus)
            })
            .collect()
    }

    fn prediction(
        &self,
        m: &MatchRecord,
        store: &RatingStore<T>,
        members: &[Vec<Rating<T>>],
    ) -> Result<PredictionRecord<T>> {
        let (values, higher_is_better) = match self.system {
            RatingSystemKind::PreviousRank => (previousrank_scores(m, store), false),
            _ => (self.team_mus(members)?, true),
        };
        let mut order: Vec<usize> = (0..m.team_count()).collect();
        order.sort_by(|&a, &b| {
            let by_value = if higher_is_better {
                cmp_scalar(&values[b], &values[a])
            } else {
                cmp_scalar(&values[a], &values[b])
            };
            by_value.then_with(|| m.teams[a].key.cmp(&m.teams[b].key))
        });
        Ok(PredictionRecord {
            match_id: m.match_id.clone(),
            teams: order
                .into_iter()
                .map(|i| PredictedTeam {
                    key: m.teams[i].key.clone(),
                    rating: values[i],
                    observed_rank: m.observed_ranks[i],
                })
                .collect(),
        })
    }

    /// Orders the teams of `m` best first from the current ratings in
    /// `store`; ties go to the lexicographically smaller team key.
    pub fn predict_ranks(&self, m: &MatchRecord, store: &RatingStore<T>) -> Result<PredictionRecord<T>> {
        m.validate()?;
        let members = self.member_ratings(m, store);
        self.prediction(m, store, &members)
    }

    /// Predicts `m`, then updates every participant. On error the store is
    /// left untouched.
    pub fn process_match(&self, m: &MatchRecord, store: &mut RatingStore<T>) -> Result<MatchUpdate<T>> {
        m.validate()?;
        let members = self.member_ratings(m, store);
        let prediction = self.prediction(m, store, &members)?;
        let mut updated = members;
        let mut diagnostics = UpdateDiagnostics::default();
        match self.system {
            RatingSystemKind::Elo => self.update_elo(m, &mut updated, &mut diagnostics)?,
            RatingSystemKind::Glicko => self.update_glicko(m, &mut updated, &mut diagnostics)?,
            RatingSystemKind::TrueSkill => self.update_trueskill(m, &mut updated, &mut diagnostics)?,
            RatingSystemKind::PreviousRank => {
                for (ratings, &rank) in updated.iter_mut().zip(&m.observed_ranks) {
                    for r in ratings.iter_mut() {
                        r.last_rank = Some(rank);
                    }
                }
            }
        }
        for (team, ratings) in m.teams.iter().zip(updated) {
            for (player, mut rating) in team.members.iter().zip(ratings) {
                rating.games_played += 1;
                match store.get_mut(player) {
                    Some(slot) => *slot = rating,
                    None => {
                        store.insert(player.clone(), rating);
                    }
                }
            }
        }
        Ok(MatchUpdate {
            prediction,
            diagnostics,
        })
    }

    fn update_elo(&self, m: &MatchRecord, members: &mut [Vec<Rating<T>>], diag: &mut UpdateDiagnostics) -> Result<()> {
        let mus = self.team_mus(members)?;
        let field = Field {
            entries: m
                .teams
                .iter()
                .zip(&mus)
                .map(|(t, &mu)| FieldEntry {
                    team_key: t.key.clone(),
                    mu,
                    sigma: None,
                })
                .collect(),
        };
        let mut team_deltas = Vec::with_capacity(mus.len());
        for (i, &mu) in mus.iter().enumerate() {
            let pr = elo_win_probability(&field, i, &self.params)?;
            let r_prime = normalize_observed_rank(m.team_count(), m.observed_ranks[i])?;
            team_deltas.push(elo_update_team(mu, r_prime, pr, &self.params) - mu);
        }
        for (ratings, delta) in members.iter_mut().zip(team_deltas) {
            let member_mus: Vec<T> = ratings.iter().map(|r| r.mu).collect();
            let split = distribute_team_delta(&member_mus, delta)?;
            diag.weight_fallbacks += u64::from(split.uniform_fallback);
            for (r, d) in ratings.iter_mut().zip(split.deltas) {
                r.mu = r.mu + d;
            }
        }
        Ok(())
    }

    fn team_estimates(&self, members: &[Vec<Rating<T>>]) -> Result<Vec<SkillEstimate<T>>> {
        members
            .iter()
            .map(|ratings| {
                let pairs = member_pairs(ratings)?;
                let mus: Vec<T> = pairs.iter().map(|p| p.0).collect();
                Ok(SkillEstimate {
                    mu: aggregate_mu(self.aggregation, &mus)?,
                    sigma: aggregate_sigma(self.aggregation, &pairs)?,
                })
            })
            .collect()
    }

    fn update_glicko(
        &self,
        m: &MatchRecord,
        members: &mut [Vec<Rating<T>>],
        diag: &mut UpdateDiagnostics,
    ) -> Result<()> {
        let teams = self.team_estimates(members)?;
        let field = Field {
            entries: m
                .teams
                .iter()
                .zip(&teams)
                .map(|(t, est)| FieldEntry {
                    team_key: t.key.clone(),
                    mu: est.mu,
                    sigma: Some(est.sigma),
                })
                .collect(),
        };
        let mut posteriors = Vec::with_capacity(teams.len());
        for i in 0..teams.len() {
            let r_prime = normalize_observed_rank(m.team_count(), m.observed_ranks[i])?;
            let up = glicko_update_team(&field, i, r_prime, &self.params)?;
            posteriors.push(SkillEstimate::new(up.mu, up.sigma));
        }
        self.apply_team_posteriors(members, &teams, &posteriors, diag)
    }

    fn update_trueskill(
        &self,
        m: &MatchRecord,
        members: &mut [Vec<Rating<T>>],
        diag: &mut UpdateDiagnostics,
    ) -> Result<()> {
        for r in members.iter_mut().flatten() {
            let sigma = r
                .sigma
                .ok_or_else(|| Error::InvalidInput("trueskill rating without deviation".into()))?;
            r.sigma = Some(inflate_sigma(sigma, self.params.tau));
        }
        let teams = self.team_estimates(members)?;
        let posterior = trueskill_update_match(&m.observed_ranks, &teams, &self.params)?;
        diag.sigma_floors += u64::from(posterior.sigma_floors);
        self.apply_team_posteriors(members, &teams, &posterior.teams, diag)
    }

    fn apply_team_posteriors(
        &self,
        members: &mut [Vec<Rating<T>>],
        prior: &[SkillEstimate<T>],
        posterior: &[SkillEstimate<T>],
        diag: &mut UpdateDiagnostics,
    ) -> Result<()> {
        let floor = T::lit(SIGMA_FLOOR);
        for ((ratings, before), after) in members.iter_mut().zip(prior).zip(posterior) {
            let pairs = member_pairs(ratings)?;
            let shares = glicko_distribute(&pairs, after.mu - before.mu, after.sigma - before.sigma)?;
            diag.weight_fallbacks += u64::from(shares.weight_fallbacks);
            for ((r, (mu, sigma)), (dmu, dsigma)) in ratings.iter_mut().zip(pairs).zip(shares.deltas) {
                r.mu = mu + dmu;
                let mut s = sigma + dsigma;
                if s.is_nan() || s <= T::zero() {
                    diag.sigma_floors += 1;
                    s = floor;
                }
                r.sigma = Some(s);
            }
        }
        Ok(())
    }
}

fn member_pairs<T: Scalar>(ratings: &[Rating<T>]) -> Result<Vec<(T, T)>> {
    ratings
        .iter()
        .map(|r| {
            r.sigma
                .map(|s| (r.mu, s))
                .ok_or_else(|| Error::InvalidInput("rating without deviation".into()))
        })
        .collect()
}

/// Free-function form of [`RatingEngine::predict_ranks`].
pub fn predict_ranks<T: Scalar>(
    system: RatingSystemKind,
    aggregation: AggregationMethod,
    m: &MatchRecord,
    store: &RatingStore<T>,
    params: &SystemParams<T>,
) -> Result<PredictionRecord<T>> {
    RatingEngine::new(system, aggregation, *params)?.predict_ranks(m, store)
}

/// Free-function form of [`RatingEngine::process_match`].
pub fn process_match<T: Scalar>(
    system: RatingSystemKind,
    aggregation: AggregationMethod,
    m: &MatchRecord,
    store: &mut RatingStore<T>,
    params: &SystemParams<T>,
) -> Result<MatchUpdate<T>> {
    RatingEngine::new(system, aggregation, *params)?.process_match(m, store)
}
