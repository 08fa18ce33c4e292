use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::ingestion::{Diagnostics, IngestError};
use crate::types::{MatchRecord, PlayerId, Team, TeamKey, Timestamp};

pub const CANONICAL_HEADER: [&str; 5] = ["match_id", "timestamp", "team_key", "player_id", "team_rank"];

/// One (match, player) row of the canonical format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalRow {
    pub match_id: String,
    pub timestamp: String,
    pub team_key: String,
    pub player_id: String,
    pub team_rank: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseOptions {
    /// Reject matches whose teams differ in size.
    pub require_equal_team_sizes: bool,
    /// Skipping more than this fraction of rows or matches is fatal.
    pub max_skip_fraction: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            require_equal_team_sizes: false,
            max_skip_fraction: 0.10,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParseReport {
    /// Valid matches sorted by (timestamp, match id).
    pub matches: Vec<MatchRecord>,
    pub rows_read: usize,
    pub rows_skipped: usize,
    pub matches_skipped: usize,
    pub diagnostics: Diagnostics,
}

/// Reads canonical rows, skipping malformed ones with a diagnostic. Row
/// numbers in diagnostics are 1-based file lines (the header is line 1).
pub fn read_canonical_rows<R: Read>(
    reader: R,
    diagnostics: &mut Diagnostics,
) -> Result<(Vec<(u64, CanonicalRow)>, usize), IngestError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = csv.headers()?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(CANONICAL_HEADER) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::Data(format!("canonical header lacks column `{name}`")))?;
    }
    let mut rows = Vec::new();
    let mut read = 0;
    for record in csv.records() {
        read += 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                diagnostics.push(format!("line {line}: unreadable row: {e}"));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(index[i]).map(str::trim).unwrap_or("");
        let parsed = (|| {
            for (i, name) in CANONICAL_HEADER.iter().enumerate().take(4) {
                if field(i).is_empty() {
                    return Err(format!("empty {name}"));
                }
            }
            let rank = field(4)
                .parse::<u32>()
                .ok()
                .filter(|&r| r > 0)
                .ok_or_else(|| format!("team_rank `{}` is not a positive integer", field(4)))?;
            Ok(CanonicalRow {
                match_id: field(0).to_owned(),
                timestamp: field(1).to_owned(),
                team_key: field(2).to_owned(),
                player_id: field(3).to_owned(),
                team_rank: rank,
            })
        })();
        match parsed {
            Ok(row) => rows.push((line, row)),
            Err(reason) => diagnostics.push(format!("line {line}: {reason}")),
        }
    }
    Ok((rows, read))
}

struct PendingTeam {
    key: String,
    rank: u32,
    members: Vec<PlayerId>,
}

struct PendingMatch {
    match_id: String,
    timestamp: String,
    teams: Vec<PendingTeam>,
    team_index: HashMap<String, usize>,
    problem: Option<String>,
}

impl PendingMatch {
    fn build(self, options: &ParseOptions) -> Result<MatchRecord, String> {
        if let Some(problem) = self.problem {
            return Err(problem);
        }
        if self.teams.len() < 2 {
            return Err(format!("{} team(s), need at least 2", self.teams.len()));
        }
        // dense re-ranking of the distinct team ranks onto 1..=N
        let mut distinct: Vec<u32> = self.teams.iter().map(|t| t.rank).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.teams.len() {
            return Err("tied team ranks".into());
        }
        let dense = |rank: u32| distinct.binary_search(&rank).map(|i| i as u32 + 1).unwrap_or(0);
        let observed_ranks = self.teams.iter().map(|t| dense(t.rank)).collect();
        if options.require_equal_team_sizes && self.teams.windows(2).any(|w| w[0].members.len() != w[1].members.len()) {
            return Err("teams differ in size".into());
        }
        let record = MatchRecord {
            match_id: self.match_id,
            timestamp: Timestamp::parse(&self.timestamp),
            teams: self
                .teams
                .into_iter()
                .map(|t| Team {
                    key: TeamKey::from(t.key),
                    members: t.members,
                })
                .collect(),
            observed_ranks,
        };
        record.validate().map_err(|e| e.to_string())?;
        Ok(record)
    }
}

fn too_many(skipped: usize, total: usize, limit: f64) -> bool {
    total > 0 && skipped as f64 > limit * total as f64
}

/// Groups rows into validated matches sorted by (timestamp, match id).
///
/// Teams and members keep the order of their first row. A match whose rows
/// disagree on timestamp or team rank, has tied ranks, repeats a player or
/// has fewer than two teams is skipped with a diagnostic.
pub fn assemble_matches(
    rows: Vec<(u64, CanonicalRow)>,
    rows_read: usize,
    mut diagnostics: Diagnostics,
    options: &ParseOptions,
) -> Result<ParseReport, IngestError> {
    let rows_skipped = rows_read - rows.len();
    let mut pending: Vec<PendingMatch> = Vec::new();
    let mut by_id: HashMap<String, usize> = HashMap::new();
    for (line, row) in rows {
        let idx = *by_id.entry(row.match_id.clone()).or_insert_with(|| {
            pending.push(PendingMatch {
                match_id: row.match_id.clone(),
                timestamp: row.timestamp.clone(),
                teams: Vec::new(),
                team_index: HashMap::new(),
                problem: None,
            });
            pending.len() - 1
        });
        let m = &mut pending[idx];
        if m.problem.is_some() {
            continue;
        }
        if row.timestamp != m.timestamp {
            m.problem = Some(format!(
                "line {line}: timestamp `{}` disagrees with `{}`",
                row.timestamp, m.timestamp
            ));
            continue;
        }
        let team_idx = *m.team_index.entry(row.team_key.clone()).or_insert_with(|| {
            m.teams.push(PendingTeam {
                key: row.team_key.clone(),
                rank: row.team_rank,
                members: Vec::new(),
            });
            m.teams.len() - 1
        });
        let team = &mut m.teams[team_idx];
        if team.rank != row.team_rank {
            m.problem = Some(format!(
                "line {line}: team `{}` has ranks {} and {}",
                team.key, team.rank, row.team_rank
            ));
            continue;
        }
        team.members.push(PlayerId::from(row.player_id));
    }

    let total_matches = pending.len();
    let mut matches = Vec::with_capacity(total_matches);
    let mut matches_skipped = 0;
    for m in pending {
        let id = m.match_id.clone();
        match m.build(options) {
            Ok(record) => matches.push(record),
            Err(reason) => {
                matches_skipped += 1;
                diagnostics.push(format!("match `{id}` rejected: {reason}"));
            }
        }
    }
    if too_many(rows_skipped, rows_read, options.max_skip_fraction) {
        return Err(IngestError::Data(format!(
            "{rows_skipped} of {rows_read} rows malformed (limit {:.0}%)",
            options.max_skip_fraction * 100.0
        )));
    }
    if too_many(matches_skipped, total_matches, options.max_skip_fraction) {
        return Err(IngestError::Data(format!(
            "{matches_skipped} of {total_matches} matches rejected (limit {:.0}%)",
            options.max_skip_fraction * 100.0
        )));
    }
    matches.sort_by(MatchRecord::chronological_cmp);
    Ok(ParseReport {
        matches,
        rows_read,
        rows_skipped,
        matches_skipped,
        diagnostics,
    })
}

/// Parses a canonical CSV stream into chronologically sorted matches.
pub fn parse_canonical<R: Read>(reader: R, options: &ParseOptions) -> Result<ParseReport, IngestError> {
    let mut diagnostics = Diagnostics::default();
    let (rows, read) = read_canonical_rows(reader, &mut diagnostics)?;
    assemble_matches(rows, read, diagnostics, options)
}

/// Canonical rows of one match, teams and members in record order.
pub fn canonical_rows(m: &MatchRecord) -> impl Iterator<Item = CanonicalRow> + '_ {
    let timestamp = m.timestamp.to_string();
    m.teams.iter().zip(&m.observed_ranks).flat_map(move |(team, &rank)| {
        let timestamp = timestamp.clone();
        team.members.iter().map(move |p| CanonicalRow {
            match_id: m.match_id.clone(),
            timestamp: timestamp.clone(),
            team_key: team.key.to_string(),
            player_id: p.to_string(),
            team_rank: rank,
        })
    })
}

fn canonical_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out)
}

pub fn write_rows<'a, W: Write>(rows: impl IntoIterator<Item = &'a CanonicalRow>, out: W) -> Result<(), IngestError> {
    let mut writer = canonical_writer(out);
    writer.write_record(CANONICAL_HEADER)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_canonical<W: Write>(matches: &[MatchRecord], out: W) -> Result<(), IngestError> {
    let mut writer = canonical_writer(out);
    writer.write_record(CANONICAL_HEADER)?;
    for m in matches {
        for row in canonical_rows(m) {
            writer.serialize(row)?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ParseReport {
        parse_canonical(text.as_bytes(), &ParseOptions::default()).unwrap()
    }

    #[test]
    fn minimal_duo_match() {
        let r = parse(
            "match_id,timestamp,team_key,player_id,team_rank\nm1,5,a,p1,1\nm1,5,a,p2,1\nm1,5,b,p3,2\nm1,5,b,p4,2\n",
        );
        assert_eq!(r.matches.len(), 1);
        let m = &r.matches[0];
        assert_eq!(m.teams.len(), 2);
        assert_eq!(m.teams[0].members, vec![PlayerId::from("p1"), PlayerId::from("p2")]);
        assert_eq!(m.observed_ranks, vec![1, 2]);
        assert_eq!(m.timestamp, Timestamp::Epoch(5));
    }

    #[test]
    fn tied_ranks_are_rejected() {
        let text = "match_id,timestamp,team_key,player_id,team_rank\n\
                    m1,1,a,p1,1\nm1,1,b,p2,1\n\
                    m2,2,a,p1,1\nm2,2,b,p2,2\n";
        let options = ParseOptions {
            max_skip_fraction: 1.0,
            ..ParseOptions::default()
        };
        let r = parse_canonical(text.as_bytes(), &options).unwrap();
        assert_eq!(r.matches.len(), 1);
        assert_eq!(r.matches_skipped, 1);
        assert!(r.diagnostics.messages[0].contains("m1"));
        // the same input is fatal under the default 10% limit
        assert!(parse_canonical(text.as_bytes(), &ParseOptions::default()).is_err());
    }

    #[test]
    fn output_is_sorted() {
        let r = parse("match_id,timestamp,team_key,player_id,team_rank\nm9,20,a,p1,1\nm9,20,b,p2,2\nm2,10,a,p1,2\nm2,10,b,p2,1\nm1,20,a,p1,1\nm1,20,b,p2,2\n");
        let ids: Vec<_> = r.matches.iter().map(|m| m.match_id.as_str()).collect();
        assert_eq!(ids, vec!["m2", "m1", "m9"]);
    }

    #[test]
    fn placements_with_gaps_are_densely_reranked() {
        let r = parse("match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,7\nm,1,b,p2,2\nm,1,c,p3,30\n");
        assert_eq!(r.matches[0].observed_ranks, vec![2, 1, 3]);
    }

    #[test]
    fn malformed_rows_are_skipped_with_line_numbers() {
        let mut text = String::from("match_id,timestamp,team_key,player_id,team_rank\n");
        for i in 0..20 {
            text.push_str(&format!("m{i},{i},a,x{i},1\nm{i},{i},b,y{i},2\n"));
        }
        text.push_str("m0,0,a,z,zero\n");
        let r = parse(&text);
        assert_eq!(r.rows_skipped, 1);
        assert_eq!(r.matches.len(), 20);
        assert!(r.diagnostics.messages[0].starts_with("line 42"), "{:?}", r.diagnostics);
    }

    #[test]
    fn inconsistent_rows_reject_the_match() {
        let options = ParseOptions {
            max_skip_fraction: 1.0,
            ..ParseOptions::default()
        };
        let text = "match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,1\nm,2,b,p2,2\n";
        assert_eq!(parse_canonical(text.as_bytes(), &options).unwrap().matches_skipped, 1);
        let text = "match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,1\nm,1,a,p3,2\nm,1,b,p2,2\n";
        assert_eq!(parse_canonical(text.as_bytes(), &options).unwrap().matches_skipped, 1);
        let text = "match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,1\nm,1,b,p1,2\n";
        assert_eq!(parse_canonical(text.as_bytes(), &options).unwrap().matches_skipped, 1);
        let text = "match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,1\nm,1,a,p2,1\n";
        assert_eq!(parse_canonical(text.as_bytes(), &options).unwrap().matches_skipped, 1);
    }

    #[test]
    fn equal_team_size_flag() {
        let text = "match_id,timestamp,team_key,player_id,team_rank\nm,1,a,p1,1\nm,1,a,p2,1\nm,1,b,p3,2\n";
        assert_eq!(parse(text).matches.len(), 1);
        let strict = ParseOptions {
            require_equal_team_sizes: true,
            max_skip_fraction: 1.0,
        };
        assert_eq!(parse_canonical(text.as_bytes(), &strict).unwrap().matches.len(), 0);
    }

    #[test]
    fn missing_header_column_is_an_error() {
        let err = parse_canonical(
            "match_id,timestamp,team_key,player\n".as_bytes(),
            &ParseOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, IngestError::Data(_)));
    }

    #[test]
    fn quoted_fields_round_trip() {
        let m = MatchRecord::new(
            "m,1",
            Timestamp::parse("2019-01-01 10:00:00"),
            vec![Team::new("team \"a\"", ["p, 1"]), Team::new("b", ["p2"])],
            vec![2, 1],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_canonical(std::slice::from_ref(&m), &mut buf).unwrap();
        let back = parse_canonical(buf.as_slice(), &ParseOptions::default()).unwrap();
        assert_eq!(back.matches, vec![m]);
    }
}
