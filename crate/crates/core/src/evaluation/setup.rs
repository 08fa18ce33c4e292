//! Player-population setups: everyone, the best-rated regulars, and the most
//! frequent players, each evaluated on a window of their earliest games.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::MetricSeries;
use crate::num::{cmp_scalar, Scalar};
use crate::store::RatingStore;
use crate::types::{MatchRecord, PlayerId, RatingSystemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetupKind {
    All,
    Best,
    Frequent,
}

impl SetupKind {
    pub const ALL: [SetupKind; 3] = [SetupKind::All, SetupKind::Best, SetupKind::Frequent];

    pub fn as_str(self) -> &'static str {
        match self {
            SetupKind::All => "all",
            SetupKind::Best => "best",
            SetupKind::Frequent => "frequent",
        }
    }
}

impl fmt::Display for SetupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" | "all_players" => Ok(SetupKind::All),
            "best" | "best_players" => Ok(SetupKind::Best),
            "frequent" | "frequent_players" => Ok(SetupKind::Frequent),
            other => Err(Error::Config(format!("unknown setup `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetupSpec {
    pub kind: SetupKind,
    pub best_top_k: usize,
    /// Best players must have played strictly more games than this.
    pub best_min_games: u32,
    /// Frequent players must have played strictly more games than this.
    pub frequent_min_games: u32,
    /// Number of earliest games evaluated per selected player.
    pub eval_window: usize,
    /// Bin count of the all-players series on head-to-head data.
    pub bins: usize,
}

impl SetupSpec {
    pub fn new(kind: SetupKind) -> Self {
        let eval_window = match kind {
            SetupKind::All => 0,
            SetupKind::Best => 10,
            SetupKind::Frequent => 100,
        };
        SetupSpec {
            kind,
            best_top_k: 1000,
            best_min_games: 10,
            frequent_min_games: 100,
            eval_window,
            bins: 500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |window: usize, threshold: u32| {
            if window == 0 || window > threshold as usize {
                Err(Error::Config(format!(
                    "{} setup: window {window} must be in 1..={threshold}",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        match self.kind {
            SetupKind::All => {
                if self.bins == 0 {
                    return Err(Error::Config("bins must be at least 1".into()));
                }
                Ok(())
            }
            SetupKind::Best => {
                if self.best_top_k == 0 {
                    return Err(Error::Config("best_top_k must be at least 1".into()));
                }
                check(self.eval_window, self.best_min_games)
            }
            SetupKind::Frequent => check(self.eval_window, self.frequent_min_games),
        }
    }
}

/// Chronological match indices of every player.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlayerHistories {
    matches: HashMap<PlayerId, Vec<usize>>,
}

impl PlayerHistories {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends match `index` to the history of each of its players. Calls
    /// must come in increasing `index` order.
    pub fn record(&mut self, index: usize, m: &MatchRecord) {
        for player in m.players() {
            match self.matches.get_mut(player) {
                Some(list) => list.push(index),
                None => {
                    self.matches.insert(player.clone(), vec![index]);
                }
            }
        }
    }

    pub fn get(&self, player: &PlayerId) -> &[usize] {
        self.matches.get(player).map_or(&[], Vec::as_slice)
    }

    pub fn games_played(&self, player: &PlayerId) -> usize {
        self.get(player).len()
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PlayerId, &[usize])> {
        self.matches.iter().map(|(p, v)| (p, v.as_slice()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub players: BTreeSet<PlayerId>,
    /// Fewer players qualified than requested.
    pub shortfall: bool,
}

/// Top `best_top_k` players by final rating among those with more than
/// `best_min_games` games. PreviousRank players are ranked by their last
/// rank instead (lower first, players without one last).
pub fn select_best_players<T: Scalar>(store: &RatingStore<T>, system: RatingSystemKind, spec: &SetupSpec) -> Selection {
    let mut candidates: Vec<_> = store
        .iter()
        .filter(|(_, r)| r.games_played > spec.best_min_games)
        .collect();
    candidates.sort_by(|(pa, a), (pb, b)| {
        let by_skill = if system == RatingSystemKind::PreviousRank {
            match (a.last_rank, b.last_rank) {
                (Some(x), Some(y)) => x.cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            }
        } else {
            cmp_scalar(&b.mu, &a.mu)
        };
        by_skill.then_with(|| pa.cmp(pb))
    });
    let shortfall = candidates.len() < spec.best_top_k;
    if shortfall {
        warn!(
            "only {} players qualify as best players (requested {})",
            candidates.len(),
            spec.best_top_k
        );
    }
    Selection {
        players: candidates
            .into_iter()
            .take(spec.best_top_k)
            .map(|(p, _)| p.clone())
            .collect(),
        shortfall,
    }
}

/// Every player with more than `frequent_min_games` games.
pub fn select_frequent_players(histories: &PlayerHistories, spec: &SetupSpec) -> BTreeSet<PlayerId> {
    histories
        .iter()
        .filter(|(_, games)| games.len() > spec.frequent_min_games as usize)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Mean metric per game index `g` in `1..=window` over the matches that are
/// the g-th game of some selected player.
///
/// A match shared by several selected players is counted once, at the
/// smallest index it qualifies for. Matches without a metric (`None`) are
/// left out; game indices with no matches are absent from the series.
pub fn windowed_series<T: Scalar>(
    metrics: &[Option<T>],
    histories: &PlayerHistories,
    selected: &BTreeSet<PlayerId>,
    window: usize,
) -> MetricSeries<T> {
    let mut first_index: BTreeMap<usize, usize> = BTreeMap::new();
    for player in selected {
        for (g, &match_index) in histories.get(player).iter().take(window).enumerate() {
            let slot = first_index.entry(match_index).or_insert(g + 1);
            *slot = (*slot).min(g + 1);
        }
    }
    let mut buckets: Vec<(T, usize)> = vec![(T::zero(), 0); window];
    for (&match_index, &g) in &first_index {
        if let Some(Some(value)) = metrics.get(match_index) {
            let bucket = &mut buckets[g - 1];
            bucket.0 = bucket.0 + *value;
            bucket.1 += 1;
        }
    }
    let mut series = MetricSeries::empty("");
    for (g, &(sum, count)) in buckets.iter().enumerate() {
        if count > 0 {
            series.x.push(g + 1);
            series.y.push(sum / T::from_count(count));
            series.populations.push(count);
        }
    }
    if series.x.last().copied().unwrap_or(0) < window {
        warn!("windowed series truncated: no selected player reaches game {window}");
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{default_rating, Team, Timestamp};

    fn store_with(entries: &[(&str, f64, u32)]) -> RatingStore<f64> {
        let mut store = RatingStore::new();
        for &(p, mu, games) in entries {
            let mut r = default_rating(RatingSystemKind::Elo);
            r.mu = mu;
            r.games_played = games;
            store.insert(p.into(), r);
        }
        store
    }

    fn spec(kind: SetupKind) -> SetupSpec {
        SetupSpec::new(kind)
    }

    #[test]
    fn best_players_by_rating() {
        let store = store_with(&[("a", 1600.0, 20), ("b", 1550.0, 11), ("c", 1500.0, 30)]);
        let sel = select_best_players(
            &store,
            RatingSystemKind::Elo,
            &SetupSpec {
                best_top_k: 2,
                ..spec(SetupKind::Best)
            },
        );
        assert_eq!(sel.players, ["a", "b"].iter().map(|&p| PlayerId::from(p)).collect());
        assert!(!sel.shortfall);
    }

    #[test]
    fn best_players_need_more_than_ten_games() {
        let store = store_with(&[("a", 1900.0, 10), ("b", 1500.0, 11)]);
        let sel = select_best_players(&store, RatingSystemKind::Elo, &spec(SetupKind::Best));
        assert_eq!(sel.players.len(), 1);
        assert!(sel.players.contains(&PlayerId::from("b")));
        assert!(sel.shortfall);
    }

    #[test]
    fn best_players_empty_store() {
        let sel = select_best_players(
            &RatingStore::<f64>::new(),
            RatingSystemKind::Glicko,
            &spec(SetupKind::Best),
        );
        assert!(sel.players.is_empty());
        assert!(sel.shortfall);
    }

    #[test]
    fn best_previousrank_players_by_last_rank() {
        let mut store = RatingStore::<f64>::new();
        for (p, rank) in [("a", Some(3)), ("b", Some(1)), ("c", None)] {
            let mut r = default_rating(RatingSystemKind::PreviousRank);
            r.last_rank = rank;
            r.games_played = 50;
            store.insert(p.into(), r);
        }
        let sel = select_best_players(
            &store,
            RatingSystemKind::PreviousRank,
            &SetupSpec {
                best_top_k: 2,
                ..spec(SetupKind::Best)
            },
        );
        assert_eq!(sel.players, ["a", "b"].iter().map(|&p| PlayerId::from(p)).collect());
    }

    fn duo(i: usize, a: [&str; 2], b: [&str; 2]) -> MatchRecord {
        MatchRecord {
            match_id: format!("m{i}"),
            timestamp: Timestamp::Epoch(i as i64),
            teams: vec![Team::new("a", a), Team::new("b", b)],
            observed_ranks: vec![1, 2],
        }
    }

    fn histories_with_games(counts: &[(&str, usize)]) -> PlayerHistories {
        let mut h = PlayerHistories::new();
        let mut idx = 0;
        for &(p, n) in counts {
            for _ in 0..n {
                h.record(idx, &duo(idx, [p, "x1"], ["x2", "x3"]));
                idx += 1;
            }
        }
        h
    }

    #[test]
    fn frequent_players_threshold() {
        let h = histories_with_games(&[("a", 101), ("b", 100)]);
        let sel = select_frequent_players(&h, &spec(SetupKind::Frequent));
        assert!(sel.contains(&PlayerId::from("a")));
        assert!(!sel.contains(&PlayerId::from("b")));
        assert!(select_frequent_players(&PlayerHistories::new(), &spec(SetupKind::Frequent)).is_empty());
        let everyone = select_frequent_players(
            &h,
            &SetupSpec {
                frequent_min_games: 0,
                ..spec(SetupKind::Frequent)
            },
        );
        assert_eq!(everyone.len(), h.len());
    }

    #[test]
    fn windowed_single_player_verbatim() {
        let mut h = PlayerHistories::new();
        let metrics: Vec<Option<f64>> = (0..15).map(|i| Some(if i % 3 == 0 { 1.0 } else { 0.0 })).collect();
        for i in 0..15 {
            h.record(
                i,
                &duo(i, ["p", &format!("q{i}")], [&format!("r{i}"), &format!("s{i}")]),
            );
        }
        let selected = BTreeSet::from([PlayerId::from("p")]);
        let s = windowed_series(&metrics, &h, &selected, 10);
        assert_eq!(s.x, (1..=10).collect::<Vec<_>>());
        assert_eq!(s.y, metrics[..10].iter().map(|m| m.unwrap()).collect::<Vec<_>>());
        assert!(s.populations.iter().all(|&n| n == 1));
    }

    #[test]
    fn shared_match_counted_once_at_smallest_index() {
        let mut h = PlayerHistories::new();
        // m0: only p1; m1: p1's 2nd and p2's 1st game
        h.record(0, &duo(0, ["p1", "x"], ["y", "z"]));
        h.record(1, &duo(1, ["p1", "p2"], ["y", "z"]));
        let metrics = vec![Some(1.0), Some(0.0)];
        let selected = BTreeSet::from([PlayerId::from("p1"), PlayerId::from("p2")]);
        let s = windowed_series(&metrics, &h, &selected, 10);
        assert_eq!(s.x, vec![1]);
        assert_eq!(s.populations, vec![2]);
        assert_eq!(s.y, vec![0.5]);
    }

    #[test]
    fn window_longer_than_history_truncates() {
        let h = histories_with_games(&[("a", 3)]);
        let metrics = vec![Some(1.0); 3];
        let s = windowed_series(&metrics, &h, &BTreeSet::from([PlayerId::from("a")]), 10);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn matches_without_metric_are_skipped() {
        let h = histories_with_games(&[("a", 3)]);
        let metrics = vec![Some(1.0), None, Some(0.0)];
        let s = windowed_series(&metrics, &h, &BTreeSet::from([PlayerId::from("a")]), 3);
        assert_eq!(s.x, vec![1, 3]);
    }

    #[test]
    fn spec_validation() {
        assert!(spec(SetupKind::Best).validate().is_ok());
        assert!(spec(SetupKind::Frequent).validate().is_ok());
        assert!(SetupSpec {
            eval_window: 11,
            ..spec(SetupKind::Best)
        }
        .validate()
        .is_err());
        assert!(SetupSpec {
            bins: 0,
            ..spec(SetupKind::All)
        }
        .validate()
        .is_err());
        assert_eq!("frequent_players".parse::<SetupKind>(), Ok(SetupKind::Frequent));
    }
}
