//! Summary table, per-cell series files and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use rankforge::evaluation::SetupSpec;
use rankforge::ingestion::ParseReport;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::run::{CellResult, RunResults};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "run_manifest.json";

/// Six significant digits, plain notation where it stays short, trailing
/// zeros removed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..=6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!(
            "{:.*}",
            decimals,
            mantissa.parse::<f64>().expect("mantissa") * 10f64.powi(exp)
        );
        trim_zeros(&fixed)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

pub fn series_file_name(cell: &CellResult, spec: &SetupSpec) -> String {
    format!(
        "series_{}_{}_{}.csv",
        cell.cell.system,
        cell.cell.aggregation_label(),
        spec.kind
    )
}

/// `[population, repeat]` pairs.
fn run_length(values: &[usize]) -> Vec<[usize; 2]> {
    let mut out: Vec<[usize; 2]> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some(last) if last[0] == v => last[1] += 1,
            _ => out.push([v, 1]),
        }
    }
    out
}

fn summary_csv(config: &ExperimentConfig, results: &RunResults) -> String {
    let mut out = String::from("dataset,setup,system,aggregation,metric,value,n_matches\n");
    for (s, spec) in config.setups.iter().enumerate() {
        for cell in &results.cells {
            let r = &cell.setups[s];
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&config.dataset_name),
                spec.kind,
                cell.cell.system,
                cell.cell.aggregation_label(),
                results.metric,
                r.value.map(format_sig6).unwrap_or_default(),
                r.n_matches
            ));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn series_csv(cell: &CellResult, s: usize) -> String {
    let series = &cell.setups[s].series;
    let mut out = String::from("x,y\n");
    for (x, y) in series.x.iter().zip(&series.y) {
        out.push_str(&format!("{x},{}\n", format_sig6(*y)));
    }
    out
}

fn manifest(config: &ExperimentConfig, dataset: &ParseReport, results: &RunResults) -> Value {
    let cells: Vec<Value> = results
        .cells
        .iter()
        .map(|cell| {
            let setups: Vec<Value> = config
                .setups
                .iter()
                .zip(&cell.setups)
                .map(|(spec, r)| {
                    json!({
                        "setup": spec.kind.as_str(),
                        "series_file": series_file_name(cell, spec),
                        "value": r.value.map(|v| format_sig6(v).parse::<f64>().expect("formatted number")),
                        "n_matches": r.n_matches,
                        "points": r.series.len(),
                        "selection_shortfall": r.shortfall,
                        "populations": run_length(&r.series.populations),
                    })
                })
                .collect();
            json!({
                "system": cell.cell.system.as_str(),
                "aggregation": cell.cell.aggregation_label(),
                "weight_fallbacks": cell.diagnostics.weight_fallbacks,
                "sigma_floors": cell.diagnostics.sigma_floors,
                "unevaluated_unequal_team_matches": cell.skipped_unequal_teams,
                "setups": setups,
            })
        })
        .collect();
    json!({
        "tool": "rankforge",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.resolved(),
        "metric": results.metric.as_str(),
        "dataset": {
            "matches": dataset.matches.len(),
            "rows_read": dataset.rows_read,
            "rows_skipped": dataset.rows_skipped,
            "matches_skipped": dataset.matches_skipped,
            "diagnostics": dataset.diagnostics.len(),
        },
        "cells": cells,
    })
}

/// Files written so far; removed again unless committed.
struct Staged {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    committed: bool,
}

impl Staged {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        let mut file =
            fs::File::create(&path).map_err(|e| CliError::io(format!("cannot create {}", path.display()), e))?;
        self.files.push(path.clone());
        file.write_all(contents.as_bytes())
            .and_then(|_| file.sync_all())
            .map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
    }
}

impl Drop for Staged {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// Writes the summary, one series file per (cell, setup) and the manifest.
/// On failure nothing written by this call is left behind.
pub fn write_report(
    config: &ExperimentConfig,
    dataset: &ParseReport,
    results: &RunResults,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let created_dir = !out_dir.exists();
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(format!("cannot create {}", out_dir.display()), e))?;
    let mut staged = Staged {
        dir: out_dir.to_path_buf(),
        created_dir,
        files: Vec::new(),
        committed: false,
    };
    staged.write(SUMMARY_FILE, &summary_csv(config, results))?;
    for cell in &results.cells {
        for (s, spec) in config.setups.iter().enumerate() {
            staged.write(&series_file_name(cell, spec), &series_csv(cell, s))?;
        }
    }
    let manifest = serde_json::to_string_pretty(&manifest(config, dataset, results)).expect("manifest serializes");
    staged.write(MANIFEST_FILE, &(manifest + "\n"))?;
    staged.committed = true;
    Ok(std::mem::take(&mut staged.files))
}
