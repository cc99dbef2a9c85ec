//! QPU money-cost accounting and extrapolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// USD per QPU minute.
    pub rate: f64,
    pub per_sample_seconds: f64,
    pub shots_per_sample: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub minutes: f64,
    pub usd: f64,
    /// Processed share of the full dataset, when its size is known.
    pub fraction: Option<f64>,
}

fn non_negative(what: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} must be a non-negative number, got {x}")))
    }
}

pub fn qpu_cost(minutes: f64, rate: f64) -> Result<f64> {
    non_negative("minutes", minutes)?;
    non_negative("rate", rate)?;
    Ok(minutes * rate)
}

/// Minutes and cost of processing `n_samples`, plus `n_samples / total`.
pub fn extrapolate_cost(n_samples: u64, params: &CostParams, total: Option<u64>) -> Result<CostEstimate> {
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be at least 1".into()));
    }
    if !(params.per_sample_seconds > 0.0) || !params.per_sample_seconds.is_finite() {
        return Err(Error::Config("per-sample time must be positive".into()));
    }
    let minutes = n_samples as f64 * params.per_sample_seconds / 60.0;
    let fraction = match total {
        Some(0) => return Err(Error::Config("total dataset size must be positive".into())),
        Some(t) => Some(n_samples as f64 / t as f64),
        None => None,
    };
    Ok(CostEstimate {
        minutes,
        usd: qpu_cost(minutes, params.rate)?,
        fraction,
    })
}

/// Disagreements between a measured total QPU time and a quoted per-sample
/// time for the same run.
pub fn consistency_notes(total_minutes: f64, n_samples: u64, per_sample_seconds: f64) -> Vec<String> {
    let mut notes = Vec::new();
    if n_samples == 0 || total_minutes <= 0.0 {
        return notes;
    }
    let implied = total_minutes * 60.0 / n_samples as f64;
    let rel = (implied - per_sample_seconds).abs() / per_sample_seconds.max(f64::MIN_POSITIVE);
    if rel > 0.05 {
        notes.push(format!(
            "{total_minutes} min over {n_samples} samples is {implied:.1} s/sample, \
             but {per_sample_seconds} s/sample was given ({:.0}% apart); both estimates are reported",
            rel * 100.0
        ));
    }
    notes
}
