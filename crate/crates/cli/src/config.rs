//! Experiment configuration read from a flat `key = value` file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rankforge::evaluation::{MetricKind, SetupKind, SetupSpec};
use rankforge::flat_config::FlatConfig;
use rankforge::{AggregationMethod, RatingSystemKind, SystemParams, TrueSkillMode};

use crate::error::{CliError, Result};

/// Metric choice; `Auto` resolves against the loaded matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricChoice {
    Auto,
    Fixed(MetricKind),
}

impl MetricChoice {
    fn parse(raw: &str) -> Result<Self> {
        match raw.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(MetricChoice::Auto),
            other => Ok(MetricChoice::Fixed(other.parse()?)),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            MetricChoice::Auto => "auto",
            MetricChoice::Fixed(m) => m.as_str(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub dataset_name: String,
    /// Raw-data adapter; without one the dataset must be canonical CSV.
    pub adapter: Option<PathBuf>,
    pub systems: Vec<RatingSystemKind>,
    pub aggregations: Vec<AggregationMethod>,
    pub setups: Vec<SetupSpec>,
    pub metric: MetricChoice,
    pub params: SystemParams<f64>,
    pub require_equal_team_sizes: bool,
}

fn dedup<T: PartialEq + Copy>(items: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

fn non_empty<T>(key: &str, items: Vec<T>) -> Result<Vec<T>> {
    if items.is_empty() {
        return Err(CliError::Config(format!("`{key}` selects nothing")));
    }
    Ok(items)
}

impl ExperimentConfig {
    pub fn from_flat(config: &FlatConfig) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "dataset",
            "dataset_name",
            "adapter",
            "systems",
            "aggregations",
            "setups",
            "metric",
            "k",
            "d",
            "beta",
            "tau",
            "q",
            "trueskill_mode",
            "best_top_k",
            "best_min_games",
            "best_window",
            "frequent_min_games",
            "frequent_window",
            "bins",
            "require_equal_team_sizes",
        ];
        if let Some((key, _)) = config.iter().find(|(k, _)| !KNOWN.contains(k)) {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }
        let dataset = PathBuf::from(config.require("dataset")?);
        let dataset_name = match config.get("dataset_name") {
            Some(name) => name.to_owned(),
            None => dataset
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into()),
        };
        let systems = dedup(non_empty(
            "systems",
            config.list("systems")?.unwrap_or(RatingSystemKind::ALL.to_vec()),
        )?);
        let aggregations = dedup(non_empty(
            "aggregations",
            config.list("aggregations")?.unwrap_or(AggregationMethod::ALL.to_vec()),
        )?);
        let kinds: Vec<SetupKind> = dedup(non_empty(
            "setups",
            config
                .list("setups")?
                .unwrap_or(vec![SetupKind::All, SetupKind::Best, SetupKind::Frequent]),
        )?);
        let mut setups = Vec::with_capacity(kinds.len());
        for kind in kinds {
            let mut spec = SetupSpec::new(kind);
            spec.best_top_k = config.parsed_or("best_top_k", spec.best_top_k)?;
            spec.best_min_games = config.parsed_or("best_min_games", spec.best_min_games)?;
            spec.frequent_min_games = config.parsed_or("frequent_min_games", spec.frequent_min_games)?;
            spec.bins = config.parsed_or("bins", spec.bins)?;
            spec.eval_window = match kind {
                SetupKind::All => 0,
                SetupKind::Best => config.parsed_or("best_window", spec.eval_window)?,
                SetupKind::Frequent => config.parsed_or("frequent_window", spec.eval_window)?,
            };
            spec.validate()?;
            setups.push(spec);
        }
        let defaults = SystemParams::<f64>::default();
        let params = SystemParams {
            k: config.parsed_or("k", defaults.k)?,
            d: config.parsed_or("d", defaults.d)?,
            beta: config.parsed_or("beta", defaults.beta)?,
            tau: config.parsed_or("tau", defaults.tau)?,
            q: config.parsed_or("q", defaults.q)?,
            trueskill_mode: config.parsed_or("trueskill_mode", TrueSkillMode::Standard)?,
        };
        params.validate()?;
        Ok(ExperimentConfig {
            dataset,
            dataset_name,
            adapter: config.get("adapter").map(PathBuf::from),
            systems,
            aggregations,
            setups,
            metric: MetricChoice::parse(config.get("metric").unwrap_or("auto"))?,
            params,
            require_equal_team_sizes: config.parsed_or("require_equal_team_sizes", false)?,
        })
    }

    /// Every setting with defaults filled in, for the run manifest.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let join = |items: Vec<&str>| items.join(",");
        let mut out = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            out.insert(k.to_owned(), v);
        };
        put("dataset", self.dataset.display().to_string());
        put("dataset_name", self.dataset_name.clone());
        if let Some(adapter) = &self.adapter {
            put("adapter", adapter.display().to_string());
        }
        put("systems", join(self.systems.iter().map(|s| s.as_str()).collect()));
        put(
            "aggregations",
            join(self.aggregations.iter().map(|a| a.as_str()).collect()),
        );
        put("setups", join(self.setups.iter().map(|s| s.kind.as_str()).collect()));
        put("metric", self.metric.as_str().to_owned());
        put("k", self.params.k.to_string());
        put("d", self.params.d.to_string());
        put("beta", self.params.beta.to_string());
        put("tau", self.params.tau.to_string());
        put("q", self.params.q.to_string());
        put("trueskill_mode", self.params.trueskill_mode.to_string());
        put("require_equal_team_sizes", self.require_equal_team_sizes.to_string());
        for spec in &self.setups {
            match spec.kind {
                SetupKind::All => put("bins", spec.bins.to_string()),
                SetupKind::Best => {
                    put("best_top_k", spec.best_top_k.to_string());
                    put("best_min_games", spec.best_min_games.to_string());
                    put("best_window", spec.eval_window.to_string());
                }
                SetupKind::Frequent => {
                    put("frequent_min_games", spec.frequent_min_games.to_string());
                    put("frequent_window", spec.eval_window.to_string());
                }
            }
        }
        out
    }
}
