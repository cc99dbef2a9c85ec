//! Explainability metrics for binary classifiers run on quantum backends:
//! accuracy, sureness, confidence and class imbalance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::classify;

fn check_pair<A, B>(a: &[A], b: &[B]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Data("metrics need at least one sample".into()));
    }
    if a.len() != b.len() {
        return Err(Error::Shape(format!("{} outputs but {} labels", a.len(), b.len())));
    }
    Ok(())
}

/// `2 · mean |y − 0.5|`: 0 on the decision boundary, 1 when every output is 0 or 1.
pub fn sureness(outputs: &[f64]) -> Result<f64> {
    if outputs.is_empty() {
        return Err(Error::Data("sureness of an empty set".into()));
    }
    Ok(2.0 * outputs.iter().map(|y| (y - 0.5).abs()).sum::<f64>() / outputs.len() as f64)
}

/// Mean and sample standard deviation of `1 − |l − y|`.
pub fn confidence(outputs: &[f64], labels: &[u8]) -> Result<(f64, f64)> {
    check_pair(outputs, labels)?;
    let c: Vec<f64> = outputs
        .iter()
        .zip(labels)
        .map(|(y, &l)| 1.0 - (f64::from(l) - y).abs())
        .collect();
    let n = c.len() as f64;
    let mean = c.iter().sum::<f64>() / n;
    let spread = if c.len() < 2 {
        0.0
    } else {
        (c.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Ok((mean, spread))
}

/// Correct predictions per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub n0: u64,
    pub n1: u64,
}

impl ClassCounts {
    /// `n0 − n1`.
    pub fn imbalance(&self) -> i64 {
        self.n0 as i64 - self.n1 as i64
    }
}

pub fn imbalance(predictions: &[u8], labels: &[u8]) -> Result<ClassCounts> {
    check_pair(predictions, labels)?;
    let mut c = ClassCounts { n0: 0, n1: 0 };
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (0, 0) => c.n0 += 1,
            (1, 1) => c.n1 += 1,
            _ => {}
        }
    }
    Ok(c)
}

pub fn accuracy(predictions: &[u8], labels: &[u8]) -> Result<f64> {
    check_pair(predictions, labels)?;
    let correct = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(correct as f64 / labels.len() as f64)
}

/// One model output on one sample, tagged with the backend that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub output: f64,
    pub predicted: u8,
    pub label: u8,
    pub backend: String,
}

impl EvaluationRecord {
    pub fn new(output: f64, label: u8, backend: impl Into<String>) -> Result<Self> {
        if !(0.0..=1.0).contains(&output) {
            return Err(Error::Data(format!("output {output} outside [0, 1]")));
        }
        if label > 1 {
            return Err(Error::Data(format!("label {label} is not binary")));
        }
        Ok(Self {
            output,
            predicted: classify(output),
            label,
            backend: backend.into(),
        })
    }

    /// Same prediction, opposite label.
    pub fn with_flipped_label(&self) -> Self {
        Self {
            label: 1 - self.label,
            ..self.clone()
        }
    }
}

/// One row of a backend comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub backend: String,
    pub accuracy: f64,
    pub sureness: f64,
    pub confidence_mean: f64,
    pub confidence_spread: f64,
    pub n0: u64,
    pub n1: u64,
    pub imbalance: i64,
    pub n_samples: u64,
}

pub fn metrics_report(records: &[EvaluationRecord]) -> Result<MetricsReport> {
    let first = records
        .first()
        .ok_or_else(|| Error::Data("no evaluation records".into()))?;
    if let Some(r) = records.iter().find(|r| r.backend != first.backend) {
        return Err(Error::Data(format!(
            "mixed backends `{}` and `{}`",
            first.backend, r.backend
        )));
    }
    let outputs: Vec<f64> = records.iter().map(|r| r.output).collect();
    let preds: Vec<u8> = records.iter().map(|r| r.predicted).collect();
    let labels: Vec<u8> = records.iter().map(|r| r.label).collect();
    let acc = accuracy(&preds, &labels)?;
    let counts = imbalance(&preds, &labels)?;
    let n = records.len() as u64;
    // accuracy = (n0 + n1)/N holds by construction; checked against drift.
    debug_assert!((acc - (counts.n0 + counts.n1) as f64 / n as f64).abs() < 1e-12);
    let (confidence_mean, confidence_spread) = confidence(&outputs, &labels)?;
    Ok(MetricsReport {
        backend: first.backend.clone(),
        accuracy: acc,
        sureness: sureness(&outputs)?,
        confidence_mean,
        confidence_spread,
        n0: counts.n0,
        n1: counts.n1,
        imbalance: counts.imbalance(),
        n_samples: n,
    })
}

pub fn reports_to_csv(reports: &[MetricsReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r).map_err(|e| Error::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
