//! Team rating aggregation (SUM, MAX, MIN) and the contribution weights used
//! to split a team-level rating change among its members.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationMethod {
    Sum,
    Max,
    Min,
}

impl AggregationMethod {
    pub const ALL: [AggregationMethod; 3] = [AggregationMethod::Sum, AggregationMethod::Max, AggregationMethod::Min];

    pub fn as_str(self) -> &'static str {
        match self {
            AggregationMethod::Sum => "sum",
            AggregationMethod::Max => "max",
            AggregationMethod::Min => "min",
        }
    }
}

impl fmt::Display for AggregationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AggregationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sum" => Ok(AggregationMethod::Sum),
            "max" => Ok(AggregationMethod::Max),
            "min" => Ok(AggregationMethod::Min),
            _ => Err(Error::UnknownAggregation(s.to_owned())),
        }
    }
}

/// Index of the member that represents the team under MAX or MIN; the first
/// one wins ties. `None` for SUM or an empty team.
pub fn selected_member<T: Scalar>(method: AggregationMethod, member_mus: &[T]) -> Option<usize> {
    let better = |candidate: T, best: T| match method {
        AggregationMethod::Max => candidate > best,
        AggregationMethod::Min => candidate < best,
        AggregationMethod::Sum => false,
    };
    if method == AggregationMethod::Sum || member_mus.is_empty() {
        return None;
    }
    let mut best = 0;
    for (i, &mu) in member_mus.iter().enumerate().skip(1) {
        if better(mu, member_mus[best]) {
            best = i;
        }
    }
    Some(best)
}

pub fn aggregate_mu<T: Scalar>(method: AggregationMethod, member_mus: &[T]) -> Result<T> {
    if member_mus.is_empty() {
        return Err(Error::InvalidTeam("team has no members".into()));
    }
    Ok(match selected_member(method, member_mus) {
        Some(i) => member_mus[i],
        None => member_mus.iter().copied().sum(),
    })
}

/// Team deviation: the sum under SUM, otherwise the deviation of the member
/// selected by the mean aggregation.
pub fn aggregate_sigma<T: Scalar>(method: AggregationMethod, members: &[(T, T)]) -> Result<T> {
    if members.is_empty() {
        return Err(Error::InvalidTeam("team has no members".into()));
    }
    if let Some(&(_, s)) = members.iter().find(|(_, s)| s.is_nan() || *s <= T::zero()) {
        return Err(Error::InvalidTeam(format!("non-positive deviation {s}")));
    }
    let mus: Vec<T> = members.iter().map(|&(mu, _)| mu).collect();
    Ok(match selected_member(method, &mus) {
        Some(i) => members[i].1,
        None => members.iter().map(|&(_, s)| s).sum(),
    })
}

/// Contribution weights of a team's members.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights<T = f64> {
    pub values: Vec<T>,
    /// True when some input was non-positive and uniform weights were used.
    pub uniform_fallback: bool,
}

/// Each member's share of the team total: `w_i = v_i / sum(v)`.
///
/// Shares are meaningless once a value is non-positive (Elo ratings can go
/// negative after long losing streaks); uniform weights are returned then.
pub fn contribution_weights<T: Scalar>(values: &[T]) -> Weights<T> {
    let n = values.len();
    if n == 0 {
        return Weights {
            values: Vec::new(),
            uniform_fallback: false,
        };
    }
    if values.iter().all(|&v| v > T::zero() && v.is_finite()) {
        let total: T = values.iter().copied().sum();
        if total.is_finite() {
            return Weights {
                values: values.iter().map(|&v| v / total).collect(),
                uniform_fallback: false,
            };
        }
    }
    let uniform = T::one() / T::from_count(n);
    Weights {
        values: vec![uniform; n],
        uniform_fallback: true,
    }
}
