//! Labelled feature datasets: CSV input/output, synthetic clusters,
//! label flipping and stratified splits.

use std::path::Path;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

/// `N × D` features with binary labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub source: Option<String>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Data(format!(
                "{} rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let d = features.first().map_or(0, Vec::len);
        for (i, row) in features.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Data(format!("row {i} has {} features, expected {d}", row.len())));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::Data(format!("row {i}, column {j}: non-finite feature")));
            }
        }
        if let Some(i) = labels.iter().position(|&l| l > 1) {
            return Err(Error::Data(format!("row {i}: label {} is not 0 or 1", labels[i])));
        }
        Ok(Self {
            features,
            labels,
            source: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Samples per class, `[class 0, class 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.len() - ones, ones]
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            source: self.source.clone(),
        }
    }
}

fn parse_records<R: std::io::Read>(reader: R, has_header: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() < 2 {
            return Err(Error::Parse {
                line,
                msg: "need at least one feature and a label".into(),
            });
        }
        let mut row = Vec::with_capacity(rec.len() - 1);
        for (col, field) in rec.iter().take(rec.len() - 1).enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("column {}: `{field}` is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("column {}: non-finite value", col + 1),
                });
            }
            row.push(v);
        }
        let label_field = &rec[rec.len() - 1];
        let label = match label_field.parse::<f64>() {
            Ok(v) if v == 0.0 => 0,
            Ok(v) if v == 1.0 => 1,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("column {}: label `{label_field}` is not 0 or 1", rec.len()),
                })
            }
        };
        features.push(row);
        labels.push(label);
    }
    Dataset::new(features, labels)
}

/// Reads comma-separated rows whose last column is the label.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let mut d = parse_records(file, has_header)?;
    d.source = Some(path.display().to_string());
    Ok(d)
}

pub fn dataset_from_csv_str(text: &str, has_header: bool) -> Result<Dataset> {
    parse_records(text.as_bytes(), has_header)
}

/// Header `f0,…,f{D-1},label`; values with 17 significant digits.
pub fn dataset_to_csv(d: &Dataset) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..d.dims())
        .map(|j| format!("f{j}"))
        .chain(["label".to_string()])
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (row, l) in d.features.iter().zip(&d.labels) {
        for v in row {
            out.push_str(&format!("{v:.16e},"));
        }
        out.push_str(&format!("{l}\n"));
    }
    out
}

pub fn save_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, dataset_to_csv(d))?;
    Ok(())
}

/// Two unit-variance Gaussian clusters centred at `±separation/2` along the
/// diagonal unit vector, `n/2` samples each, in shuffled order.
pub fn synthesize(n: usize, dims: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "sample count must be even and at least 2, got {n}"
        )));
    }
    if dims == 0 {
        return Err(Error::Config("dims must be at least 1".into()));
    }
    if !separation.is_finite() {
        return Err(Error::Config("separation must be finite".into()));
    }
    let mut r = rng::stream(seed, 0);
    let offset = separation / 2.0 / (dims as f64).sqrt();
    let mut rows: Vec<(Vec<f64>, u8)> = (0..n)
        .map(|i| {
            let label = (i % 2) as u8;
            let sign = if label == 1 { 1.0 } else { -1.0 };
            let x = (0..dims)
                .map(|_| {
                    let e: f64 = StandardNormal.sample(&mut r);
                    sign * offset + e
                })
                .collect();
            (x, label)
        })
        .collect();
    rows.shuffle(&mut rng::stream(seed, 1));
    let (features, labels) = rows.into_iter().unzip();
    let mut d = Dataset::new(features, labels)?;
    d.source = Some(format!(
        "synthetic(n={n}, dims={dims}, separation={separation}, seed={seed})"
    ));
    Ok(d)
}

/// Labels `l → 1 − l`; features untouched.
pub fn flip_labels(d: &Dataset) -> Dataset {
    Dataset {
        labels: d.labels.iter().map(|l| 1 - l).collect(),
        ..d.clone()
    }
}

/// Stratified seeded split: each class contributes `round(fraction · count)`
/// samples to the first part.
pub fn split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in 0..2u8 {
        let mut idx: Vec<usize> = (0..d.len()).filter(|&i| d.labels[i] == class).collect();
        idx.shuffle(&mut rng::stream(seed, u64::from(class)));
        let k = (train_fraction * idx.len() as f64).round() as usize;
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::Data(format!(
            "fraction {train_fraction} of {} samples leaves one side empty",
            d.len()
        )));
    }
    train.shuffle(&mut rng::stream(seed, 2));
    test.shuffle(&mut rng::stream(seed, 3));
    Ok((d.subset(&train), d.subset(&test)))
}
