use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::Scalar;

/// A plot-ready series. `populations[k]` is the number of matches averaged
/// into `y[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSeries<T = f64> {
    pub label: String,
    pub x: Vec<usize>,
    pub y: Vec<T>,
    pub populations: Vec<usize>,
}

impl<T: Scalar> MetricSeries<T> {
    pub fn empty(label: impl Into<String>) -> Self {
        MetricSeries {
            label: label.into(),
            x: Vec::new(),
            y: Vec::new(),
            populations: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn total_population(&self) -> usize {
        self.populations.iter().sum()
    }

    /// Population-weighted mean of `y`; `None` for an empty series.
    pub fn weighted_mean(&self) -> Option<T> {
        let total = self.total_population();
        if total == 0 {
            return None;
        }
        let sum: T = self
            .y
            .iter()
            .zip(&self.populations)
            .map(|(&y, &n)| y * T::from_count(n))
            .sum();
        Some(sum / T::from_count(total))
    }
}

/// Splits `values` into `n_bins` contiguous chunks, the first
/// `len % n_bins` of them one element longer, and averages each chunk.
/// With fewer values than bins every value gets its own bin.
pub fn bin_series<T: Scalar>(values: &[T], n_bins: usize) -> Result<MetricSeries<T>> {
    if n_bins == 0 {
        return Err(Error::InvalidInput("bin count must be at least 1".into()));
    }
    let bins = n_bins.min(values.len());
    let mut series = MetricSeries::empty("");
    if bins == 0 {
        return Ok(series);
    }
    let base = values.len() / bins;
    let extra = values.len() % bins;
    let mut start = 0;
    for b in 0..bins {
        let size = base + usize::from(b < extra);
        let chunk = &values[start..start + size];
        series.x.push(b + 1);
        series.y.push(chunk.iter().copied().sum::<T>() / T::from_count(size));
        series.populations.push(size);
        start += size;
    }
    Ok(series)
}
