//! Domain types: player and team identities, per-player ratings, match
//! records and the field of aggregated team ratings.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;

/// Dataset-native player identifier, compared verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(String);

impl PlayerId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidInput("empty player id".into()));
        }
        Ok(PlayerId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PlayerId {
    fn from(id: &str) -> Self {
        PlayerId(id.to_owned())
    }
}

impl From<String> for PlayerId {
    fn from(id: String) -> Self {
        PlayerId(id)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a team within one match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TeamKey(String);

impl TeamKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for TeamKey {
    fn from(key: &str) -> Self {
        TeamKey(key.to_owned())
    }
}

impl From<String> for TeamKey {
    fn from(key: String) -> Self {
        TeamKey(key)
    }
}

impl fmt::Display for TeamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The four supported predictors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatingSystemKind {
    Elo,
    Glicko,
    TrueSkill,
    PreviousRank,
}

impl RatingSystemKind {
    pub const ALL: [RatingSystemKind; 4] = [
        RatingSystemKind::Elo,
        RatingSystemKind::Glicko,
        RatingSystemKind::TrueSkill,
        RatingSystemKind::PreviousRank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RatingSystemKind::Elo => "elo",
            RatingSystemKind::Glicko => "glicko",
            RatingSystemKind::TrueSkill => "trueskill",
            RatingSystemKind::PreviousRank => "previousrank",
        }
    }

    /// Whether ratings of this system carry a deviation.
    pub fn has_sigma(self) -> bool {
        matches!(self, RatingSystemKind::Glicko | RatingSystemKind::TrueSkill)
    }
}

impl fmt::Display for RatingSystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RatingSystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "elo" => Ok(RatingSystemKind::Elo),
            "glicko" => Ok(RatingSystemKind::Glicko),
            "trueskill" | "true_skill" => Ok(RatingSystemKind::TrueSkill),
            "previousrank" | "previous_rank" => Ok(RatingSystemKind::PreviousRank),
            _ => Err(Error::UnknownSystem(s.to_owned())),
        }
    }
}

/// Skill state of one player under one rating system.
///
/// `mu` is unused (and zero) for PreviousRank, which only tracks
/// `last_rank`. `sigma` is present exactly for Glicko and TrueSkill.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rating<T = f64> {
    pub mu: T,
    pub sigma: Option<T>,
    pub games_played: u32,
    pub last_rank: Option<u32>,
}

pub const ELO_INITIAL_MU: f64 = 1500.0;
pub const GLICKO_INITIAL_MU: f64 = 1500.0;
pub const GLICKO_INITIAL_SIGMA: f64 = 350.0;
pub const TRUESKILL_INITIAL_MU: f64 = 25.0;
pub const TRUESKILL_INITIAL_SIGMA: f64 = 25.0 / 3.0;

/// Rating assigned to a player the first time they appear.
pub fn default_rating<T: Scalar>(system: RatingSystemKind) -> Rating<T> {
    let (mu, sigma) = match system {
        RatingSystemKind::Elo => (T::lit(ELO_INITIAL_MU), None),
        RatingSystemKind::Glicko => (T::lit(GLICKO_INITIAL_MU), Some(T::lit(GLICKO_INITIAL_SIGMA))),
        RatingSystemKind::TrueSkill => (T::lit(TRUESKILL_INITIAL_MU), Some(T::lit(TRUESKILL_INITIAL_SIGMA))),
        RatingSystemKind::PreviousRank => (T::zero(), None),
    };
    Rating {
        mu,
        sigma,
        games_played: 0,
        last_rank: None,
    }
}

/// Chronological ordering key of a match.
///
/// Integers in canonical decimal form order numerically and sort before any
/// textual timestamp; text (e.g. ISO-8601) orders lexicographically. The
/// original spelling is preserved so serialization round-trips exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Timestamp {
    Epoch(i64),
    Text(String),
}

impl Timestamp {
    pub fn parse(raw: &str) -> Self {
        match raw.parse::<i64>() {
            Ok(v) if v.to_string() == raw => Timestamp::Epoch(v),
            _ => Timestamp::Text(raw.to_owned()),
        }
    }
}

impl From<i64> for Timestamp {
    fn from(v: i64) -> Self {
        Timestamp::Epoch(v)
    }
}

impl Ord for Timestamp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Timestamp::Epoch(a), Timestamp::Epoch(b)) => a.cmp(b),
            (Timestamp::Epoch(_), Timestamp::Text(_)) => Ordering::Less,
            (Timestamp::Text(_), Timestamp::Epoch(_)) => Ordering::Greater,
            (Timestamp::Text(a), Timestamp::Text(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Timestamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timestamp::Epoch(v) => write!(f, "{v}"),
            Timestamp::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Team {
    pub key: TeamKey,
    pub members: Vec<PlayerId>,
}

impl Team {
    pub fn new(key: impl Into<TeamKey>, members: impl IntoIterator<Item = impl Into<PlayerId>>) -> Self {
        Team {
            key: key.into(),
            members: members.into_iter().map(Into::into).collect(),
        }
    }
}

/// One match: its teams and the observed rank of each team (1 = winner).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub match_id: String,
    pub timestamp: Timestamp,
    pub teams: Vec<Team>,
    pub observed_ranks: Vec<u32>,
}

impl MatchRecord {
    pub fn new(
        match_id: impl Into<String>,
        timestamp: impl Into<Timestamp>,
        teams: Vec<Team>,
        observed_ranks: Vec<u32>,
    ) -> Result<Self> {
        let record = MatchRecord {
            match_id: match_id.into(),
            timestamp: timestamp.into(),
            teams,
            observed_ranks,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn team_count(&self) -> usize {
        self.teams.len()
    }

    pub fn has_equal_team_sizes(&self) -> bool {
        self.teams.windows(2).all(|w| w[0].members.len() == w[1].members.len())
    }

    pub fn players(&self) -> impl Iterator<Item = &PlayerId> {
        self.teams.iter().flat_map(|t| t.members.iter())
    }

    /// Replay order: timestamp, then match id.
    pub fn chronological_cmp(&self, other: &Self) -> Ordering {
        self.timestamp
            .cmp(&other.timestamp)
            .then_with(|| self.match_id.cmp(&other.match_id))
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidMatch {
            match_id: self.match_id.clone(),
            reason,
        };
        if self.teams.len() < 2 {
            return Err(invalid(format!("{} team(s), need at least 2", self.teams.len())));
        }
        if self.observed_ranks.len() != self.teams.len() {
            return Err(invalid(format!(
                "{} ranks for {} teams",
                self.observed_ranks.len(),
                self.teams.len()
            )));
        }
        validate_ranks(&self.observed_ranks).map_err(|e| invalid(e.to_string()))?;
        let mut keys = HashSet::with_capacity(self.teams.len());
        let mut players = HashSet::new();
        for team in &self.teams {
            if team.key.as_str().is_empty() {
                return Err(invalid("empty team key".into()));
            }
            if !keys.insert(&team.key) {
                return Err(invalid(format!("duplicate team key `{}`", team.key)));
            }
            if team.members.is_empty() {
                return Err(invalid(format!("team `{}` has no members", team.key)));
            }
            for player in &team.members {
                if player.as_str().is_empty() {
                    return Err(invalid("empty player id".into()));
                }
                if !players.insert(player) {
                    return Err(invalid(format!("player `{player}` appears twice")));
                }
            }
        }
        Ok(())
    }
}

/// Checks that `ranks` is a permutation of `1..=ranks.len()`.
pub fn validate_ranks(ranks: &[u32]) -> Result<()> {
    let n = ranks.len();
    let mut seen = vec![false; n];
    for &rank in ranks {
        let idx = rank as usize;
        if idx == 0 || idx > n {
            return Err(Error::InvalidRank { rank, teams: n });
        }
        if std::mem::replace(&mut seen[idx - 1], true) {
            return Err(Error::InvalidInput(format!(
                "observed ranks are not a permutation: rank {rank} repeated"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldEntry<T = f64> {
    pub team_key: TeamKey,
    pub mu: T,
    pub sigma: Option<T>,
}

/// The competing teams of one match with their aggregated ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T = f64> {
    pub entries: Vec<FieldEntry<T>>,
}

impl<T: Scalar> Field<T> {
    /// Field from bare team means; team keys are the positions.
    pub fn from_mus(mus: &[T]) -> Self {
        Field {
            entries: mus
                .iter()
                .enumerate()
                .map(|(i, &mu)| FieldEntry {
                    team_key: TeamKey(i.to_string()),
                    mu,
                    sigma: None,
                })
                .collect(),
        }
    }

    pub fn from_mus_sigmas(mus: &[T], sigmas: &[T]) -> Self {
        Field {
            entries: mus
                .iter()
                .zip(sigmas)
                .enumerate()
                .map(|(i, (&mu, &sigma))| FieldEntry {
                    team_key: TeamKey(i.to_string()),
                    mu,
                    sigma: Some(sigma),
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if self.entries.len() < 2 {
            return Err(Error::InvalidField(format!(
                "{} team(s), need at least 2",
                self.entries.len()
            )));
        }
        if i >= self.entries.len() {
            return Err(Error::InvalidField(format!(
                "team index {i} out of range for {} teams",
                self.entries.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn sigma_at(&self, i: usize) -> Result<T> {
        match self.entries[i].sigma {
            Some(s) if s > T::zero() => Ok(s),
            Some(_) => Err(Error::InvalidField(format!("team {i} has a non-positive deviation"))),
            None => Err(Error::InvalidField(format!("team {i} has no deviation"))),
        }
    }
}
