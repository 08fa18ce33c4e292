//! Rank-prediction metrics, population setups and time-series reporting.

mod metrics;
mod series;
mod setup;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rating::{PredictionRecord, RatingEngine, UpdateDiagnostics};
use crate::store::RatingStore;
use crate::types::{MatchRecord, RatingSystemKind};

pub use metrics::{accuracy_outcome, ndcg, ndcg_from_ranks};
pub use series::{bin_series, MetricSeries};
pub use setup::{
    select_best_players, select_frequent_players, windowed_series, PlayerHistories, Selection, SetupKind, SetupSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Ndcg,
    Accuracy,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Ndcg => "ndcg",
            MetricKind::Accuracy => "accuracy",
        }
    }

    /// Accuracy when every match is head-to-head, NDCG otherwise.
    pub fn auto(matches: &[MatchRecord]) -> Self {
        if matches.iter().all(|m| m.team_count() == 2) {
            MetricKind::Accuracy
        } else {
            MetricKind::Ndcg
        }
    }

    pub fn evaluate<T: Scalar>(self, prediction: &PredictionRecord<T>) -> Result<T> {
        match self {
            MetricKind::Ndcg => ndcg_from_ranks(&prediction.observed_ranks()),
            MetricKind::Accuracy => accuracy_outcome(prediction).map(|hit| T::from_count(usize::from(hit))),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ndcg" => Ok(MetricKind::Ndcg),
            "accuracy" => Ok(MetricKind::Accuracy),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

/// Everything recorded while streaming a match list through one engine.
#[derive(Debug, Clone)]
pub struct ReplayLog<T = f64> {
    /// Metric of each match in stream order; `None` for matches whose teams
    /// differ in size, which are rated but not evaluated.
    pub metrics: Vec<Option<T>>,
    pub histories: PlayerHistories,
    pub store: RatingStore<T>,
    pub diagnostics: UpdateDiagnostics,
    pub skipped_unequal_teams: usize,
}

/// Streams `matches` (already in chronological order) through `engine`,
/// scoring each prediction before the match updates the ratings.
pub fn replay<T: Scalar>(
    engine: &RatingEngine<T>,
    matches: &[MatchRecord],
    metric: MetricKind,
) -> Result<ReplayLog<T>> {
    if let Some(w) = matches.windows(2).find(|w| w[0].chronological_cmp(&w[1]).is_gt()) {
        return Err(Error::InvalidInput(format!(
            "matches out of chronological order at `{}`",
            w[1].match_id
        )));
    }
    let mut store = RatingStore::new();
    let mut histories = PlayerHistories::new();
    let mut metrics = Vec::with_capacity(matches.len());
    let mut diagnostics = UpdateDiagnostics::default();
    let mut skipped = 0;
    for (index, m) in matches.iter().enumerate() {
        let update = engine.process_match(m, &mut store)?;
        diagnostics += update.diagnostics;
        histories.record(index, m);
        if m.has_equal_team_sizes() {
            metrics.push(Some(metric.evaluate(&update.prediction)?));
        } else {
            skipped += 1;
            metrics.push(None);
        }
    }
    Ok(ReplayLog {
        metrics,
        histories,
        store,
        diagnostics,
        skipped_unequal_teams: skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetupResult<T = f64> {
    /// Mean metric over the evaluated matches; `None` if there were none.
    pub value: Option<T>,
    pub n_matches: usize,
    pub series: MetricSeries<T>,
    pub shortfall: bool,
}

/// Summarises a replay for one population setup.
///
/// All players: mean over every evaluated match, reported as `spec.bins`
/// bins for head-to-head data or per match otherwise. Best and frequent
/// players: mean over the matches in their evaluation windows, reported per
/// game index.
pub fn evaluate_setup<T: Scalar>(
    log: &ReplayLog<T>,
    system: RatingSystemKind,
    spec: &SetupSpec,
    head_to_head: bool,
) -> Result<SetupResult<T>> {
    spec.validate()?;
    let (series, shortfall) = match spec.kind {
        SetupKind::All => {
            let evaluated: Vec<(usize, T)> = log
                .metrics
                .iter()
                .enumerate()
                .filter_map(|(i, m)| m.map(|v| (i, v)))
                .collect();
            let series = if head_to_head {
                let values: Vec<T> = evaluated.iter().map(|&(_, v)| v).collect();
                bin_series(&values, spec.bins)?
            } else {
                MetricSeries {
                    label: String::new(),
                    x: evaluated.iter().map(|&(i, _)| i + 1).collect(),
                    y: evaluated.iter().map(|&(_, v)| v).collect(),
                    populations: vec![1; evaluated.len()],
                }
            };
            (series, false)
        }
        SetupKind::Best => {
            let selection = select_best_players(&log.store, system, spec);
            let series = windowed_series(&log.metrics, &log.histories, &selection.players, spec.eval_window);
            (series, selection.shortfall)
        }
        SetupKind::Frequent => {
            let selected = select_frequent_players(&log.histories, spec);
            let series = windowed_series(&log.metrics, &log.histories, &selected, spec.eval_window);
            (series, false)
        }
    };
    Ok(SetupResult {
        value: series.weighted_mean(),
        n_matches: series.total_population(),
        series,
        shortfall,
    })
}
