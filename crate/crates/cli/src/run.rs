//! Loading a dataset and running the system × aggregation matrix over it.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use rayon::prelude::*;

use rankforge::evaluation::{evaluate_setup, replay, MetricKind, SetupResult};
use rankforge::flat_config::FlatConfig;
use rankforge::ingestion::{adapt_dataset, assemble_matches, parse_canonical, AdapterSpec, ParseOptions, ParseReport};
use rankforge::rating::UpdateDiagnostics;
use rankforge::{AggregationMethod, MatchRecord, RatingEngine64, RatingSystemKind};

use crate::config::{ExperimentConfig, MetricChoice};
use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "RANKFORGE_THREADS";

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(format!("cannot open {}", path.display()), e))
}

/// Reads a raw export through an adapter file.
pub fn load_adapted(raw: &Path, adapter: &Path, options: &ParseOptions) -> Result<ParseReport> {
    let spec = AdapterSpec::from_config(&FlatConfig::load(adapter)?)?;
    let adapted = adapt_dataset(open(raw)?, &spec)?;
    log::info!(
        "{}: {} rows read, {} filtered",
        raw.display(),
        adapted.rows_read,
        adapted.rows_filtered
    );
    let considered = adapted.rows_considered();
    Ok(assemble_matches(
        adapted.rows,
        considered,
        adapted.diagnostics,
        options,
    )?)
}

pub fn load_dataset(config: &ExperimentConfig) -> Result<ParseReport> {
    let options = ParseOptions {
        require_equal_team_sizes: config.require_equal_team_sizes,
        ..ParseOptions::default()
    };
    let report = match &config.adapter {
        Some(adapter) => load_adapted(&config.dataset, adapter, &options)?,
        None => parse_canonical(open(&config.dataset)?, &options)?,
    };
    for message in &report.diagnostics.messages {
        log::warn!("{message}");
    }
    if report.matches.is_empty() {
        return Err(CliError::Data(format!(
            "{} holds no valid matches",
            config.dataset.display()
        )));
    }
    Ok(report)
}

/// One rating system with one aggregation; PreviousRank has none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub system: RatingSystemKind,
    pub aggregation: Option<AggregationMethod>,
}

impl Cell {
    pub fn aggregation_label(&self) -> &'static str {
        self.aggregation.map_or("none", AggregationMethod::as_str)
    }
}

/// The matrix in report order: systems as configured, PreviousRank once.
pub fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &system in &config.systems {
        if system == RatingSystemKind::PreviousRank {
            out.push(Cell {
                system,
                aggregation: None,
            });
        } else {
            out.extend(config.aggregations.iter().map(|&a| Cell {
                system,
                aggregation: Some(a),
            }));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: Cell,
    pub diagnostics: UpdateDiagnostics,
    pub skipped_unequal_teams: usize,
    /// Aligned with the configured setups.
    pub setups: Vec<SetupResult<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResults {
    pub metric: MetricKind,
    pub head_to_head: bool,
    pub cells: Vec<CellResult>,
}

pub fn resolve_metric(choice: MetricChoice, matches: &[MatchRecord]) -> MetricKind {
    match choice {
        MetricChoice::Auto => MetricKind::auto(matches),
        MetricChoice::Fixed(m) => m,
    }
}

pub fn run_cell(
    config: &ExperimentConfig,
    cell: Cell,
    matches: &[MatchRecord],
    metric: MetricKind,
) -> Result<CellResult> {
    let head_to_head = matches.iter().all(|m| m.team_count() == 2);
    let engine = RatingEngine64::new(
        cell.system,
        cell.aggregation.unwrap_or(AggregationMethod::Sum),
        config.params,
    )?;
    let log = replay(&engine, matches, metric)?;
    let setups = config
        .setups
        .iter()
        .map(|spec| evaluate_setup(&log, cell.system, spec, head_to_head))
        .collect::<rankforge::Result<Vec<_>>>()?;
    log::info!("{} / {} done", cell.system, cell.aggregation_label());
    Ok(CellResult {
        cell,
        diagnostics: log.diagnostics,
        skipped_unequal_teams: log.skipped_unequal_teams,
        setups,
    })
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))),
    }
}

/// Runs every cell, in parallel up to `RANKFORGE_THREADS`.
pub fn run_matrix(config: &ExperimentConfig, matches: &[MatchRecord]) -> Result<RunResults> {
    let metric = resolve_metric(config.metric, matches);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let cells = cells(config);
    let results = pool.install(|| {
        cells
            .par_iter()
            .map(|&cell| run_cell(config, cell, matches, metric))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(RunResults {
        metric,
        head_to_head: matches.iter().all(|m| m.team_count() == 2),
        cells: results,
    })
}
