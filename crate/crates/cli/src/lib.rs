//! Experiment runner behind the `rankforge` command: adapt raw exports,
//! generate synthetic streams and run the rating-system matrix over a
//! dataset.

pub mod config;
mod error;
pub mod report;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

use rankforge::flat_config::FlatConfig;
use rankforge::ingestion::{write_canonical, ParseOptions, ParseReport};
use rankforge::synth::{generate, write_latent, SynthConfig};

pub use config::{ExperimentConfig, MetricChoice};
pub use error::{CliError, Result};
pub use run::{run_matrix, RunResults};

/// Loads a flat config file (if any) and applies `key=value` overrides.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<FlatConfig> {
    let mut config = match path {
        Some(p) => FlatConfig::load(p)?,
        None => FlatConfig::new(),
    };
    for pair in overrides {
        config.set_pair(pair)?;
    }
    Ok(config)
}

/// Loads the dataset, runs every cell and writes the report to `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<(ParseReport, RunResults)> {
    let dataset = run::load_dataset(config)?;
    log::info!("{} matches loaded", dataset.matches.len());
    let results = run_matrix(config, &dataset.matches)?;
    report::write_report(config, &dataset, &results, out_dir)?;
    Ok((dataset, results))
}

/// Adapts a raw export into canonical CSV at `out`.
pub fn ingest(adapter: &Path, raw: &Path, out: &Path, require_equal_team_sizes: bool) -> Result<ParseReport> {
    let options = ParseOptions {
        require_equal_team_sizes,
        ..ParseOptions::default()
    };
    let report = run::load_adapted(raw, adapter, &options)?;
    for message in &report.diagnostics.messages {
        log::warn!("{message}");
    }
    if report.matches.is_empty() {
        return Err(CliError::Data(format!("{} yields no valid matches", raw.display())));
    }
    write_file(out, |w| Ok(write_canonical(&report.matches, w)?))?;
    Ok(report)
}

pub const SYNTH_MATCHES_FILE: &str = "matches.csv";
pub const SYNTH_LATENT_FILE: &str = "latent.csv";

/// Writes `matches.csv` and `latent.csv` for a synthetic stream into `out_dir`.
pub fn synthesize(config: &SynthConfig, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let data = generate(config)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(format!("cannot create {}", out_dir.display()), e))?;
    let matches = out_dir.join(SYNTH_MATCHES_FILE);
    let latent = out_dir.join(SYNTH_LATENT_FILE);
    write_file(&matches, |w| Ok(write_canonical(&data.matches, w)?))?;
    if let Err(e) = write_file(&latent, |w| {
        write_latent(&data.latent, w).map_err(|e| CliError::Data(e.to_string()))
    }) {
        let _ = fs::remove_file(&matches);
        return Err(e);
    }
    Ok((matches, latent))
}

fn write_file(path: &Path, body: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(format!("cannot create {}", path.display()), e))?;
    let mut writer = std::io::BufWriter::new(file);
    let result = body(&mut writer).and_then(|_| {
        use std::io::Write;
        writer
            .flush()
            .map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
    });
    if result.is_err() {
        let _ = fs::remove_file(path);
    }
    result
}
