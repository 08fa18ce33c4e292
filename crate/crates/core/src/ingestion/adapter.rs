use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::str::FromStr;

use crate::flat_config::FlatConfig;
use crate::ingestion::canonical::{CanonicalRow, CANONICAL_HEADER};
use crate::ingestion::{Diagnostics, IngestError};

/// How the raw rank column is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankSemantics {
    /// Integer placement, 1 = best.
    #[default]
    TeamPlacement,
    /// Boolean win flag: winners get rank 1, losers rank 2.
    WinnerFlag,
}

impl FromStr for RankSemantics {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "team_placement" => Ok(RankSemantics::TeamPlacement),
            "winner_flag" => Ok(RankSemantics::WinnerFlag),
            other => Err(IngestError::Config(format!("unknown rank_semantics `{other}`"))),
        }
    }
}

/// Maps a raw dataset export onto the canonical columns.
///
/// Configuration keys:
///
/// ```text
/// column.match_id = <raw column>     (one line per canonical field)
/// rank_semantics = team_placement | winner_flag
/// team_size_filter = 2               (optional)
/// delimiter = ,                      (optional, one byte; `tab` for \t)
/// filter.<raw column> = <value>      (optional, rows must match exactly)
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdapterSpec {
    /// Raw column for each canonical field, in canonical header order.
    pub columns: [String; 5],
    pub rank_semantics: RankSemantics,
    pub team_size_filter: Option<usize>,
    pub filters: Vec<(String, String)>,
    pub delimiter: u8,
}

impl AdapterSpec {
    pub fn from_config(config: &FlatConfig) -> Result<Self, IngestError> {
        let mut columns: [String; 5] = Default::default();
        for (slot, field) in columns.iter_mut().zip(CANONICAL_HEADER) {
            let key = format!("column.{field}");
            *slot = config.require(&key)?.to_owned();
            if slot.is_empty() {
                return Err(IngestError::Config(format!("`{key}` is empty")));
            }
        }
        let rank_semantics = config
            .get("rank_semantics")
            .map(str::parse)
            .transpose()?
            .unwrap_or_default();
        let team_size_filter = config.parsed::<usize>("team_size_filter")?;
        if team_size_filter == Some(0) {
            return Err(IngestError::Config("team_size_filter must be positive".into()));
        }
        let delimiter = match config.get("delimiter") {
            None | Some("") => b',',
            Some("tab") | Some("\\t") => b'\t',
            Some(d) if d.len() == 1 => d.as_bytes()[0],
            Some(d) => return Err(IngestError::Config(format!("delimiter `{d}` is not a single byte"))),
        };
        let filters = config
            .with_prefix("filter.")
            .map(|(col, value)| (col.to_owned(), value.to_owned()))
            .collect();
        Ok(AdapterSpec {
            columns,
            rank_semantics,
            team_size_filter,
            filters,
            delimiter,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdaptOutput {
    /// Canonical rows in input order.
    pub rows: Vec<(u64, CanonicalRow)>,
    pub rows_read: usize,
    /// Rows removed by `filter.*` or the team size filter.
    pub rows_filtered: usize,
    pub diagnostics: Diagnostics,
}

impl AdaptOutput {
    /// Rows that passed the filters, malformed or not.
    pub fn rows_considered(&self) -> usize {
        self.rows_read - self.rows_filtered
    }
}

fn parse_flag(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "t" | "yes" | "y" | "win" | "won" => Some(true),
        "0" | "false" | "f" | "no" | "n" | "loss" | "lost" | "lose" => Some(false),
        _ => None,
    }
}

fn parse_placement(raw: &str) -> Option<u32> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<u32>() {
        return (v > 0).then_some(v);
    }
    let v = raw.parse::<f64>().ok()?;
    (v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64).then_some(v as u32)
}

/// Converts a raw export into canonical rows.
///
/// Fails before reading any row if a mapped or filtered column is missing.
/// Rows with unparseable values are skipped with a line-numbered diagnostic.
pub fn adapt_dataset<R: Read>(raw: R, spec: &AdapterSpec) -> Result<AdaptOutput, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .flexible(true)
        .from_reader(raw);
    let header = reader.headers()?.clone();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::Config(format!("raw data has no column `{name}`")))
    };
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(&spec.columns) {
        *slot = find(name)?;
    }
    let filters = spec
        .filters
        .iter()
        .map(|(col, value)| Ok((find(col)?, value.as_str())))
        .collect::<Result<Vec<_>, IngestError>>()?;

    let mut out = AdaptOutput::default();
    for record in reader.records() {
        out.rows_read += 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.diagnostics.push(format!("line {line}: unreadable row: {e}"));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).map(str::trim).unwrap_or("");
        if filters.iter().any(|&(i, value)| field(i) != value) {
            out.rows_filtered += 1;
            continue;
        }
        let parsed = (|| {
            for (i, name) in CANONICAL_HEADER.iter().enumerate().take(4) {
                if field(index[i]).is_empty() {
                    return Err(format!("empty {name} (column `{}`)", spec.columns[i]));
                }
            }
            let raw_rank = field(index[4]);
            let rank = match spec.rank_semantics {
                RankSemantics::TeamPlacement => parse_placement(raw_rank),
                RankSemantics::WinnerFlag => parse_flag(raw_rank).map(|won| if won { 1 } else { 2 }),
            }
            .ok_or_else(|| format!("cannot read rank `{raw_rank}`"))?;
            Ok(CanonicalRow {
                match_id: field(index[0]).to_owned(),
                timestamp: field(index[1]).to_owned(),
                team_key: field(index[2]).to_owned(),
                player_id: field(index[3]).to_owned(),
                team_rank: rank,
            })
        })();
        match parsed {
            Ok(row) => out.rows.push((line, row)),
            Err(reason) => out.diagnostics.push(format!("line {line}: {reason}")),
        }
    }

    if let Some(size) = spec.team_size_filter {
        let mut sizes: HashMap<(&str, &str), HashSet<&str>> = HashMap::new();
        for (_, row) in &out.rows {
            sizes
                .entry((&row.match_id, &row.team_key))
                .or_default()
                .insert(&row.player_id);
        }
        let keep: HashSet<(String, String)> = sizes
            .into_iter()
            .filter(|(_, members)| members.len() == size)
            .map(|((m, t), _)| (m.to_owned(), t.to_owned()))
            .collect();
        let before = out.rows.len();
        out.rows
            .retain(|(_, row)| keep.contains(&(row.match_id.clone(), row.team_key.clone())));
        out.rows_filtered += before - out.rows.len();
    }
    Ok(out)
}
