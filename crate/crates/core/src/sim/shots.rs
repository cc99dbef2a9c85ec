use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::state::QubitState;
use crate::error::{Error, Result};
use crate::rng;

/// Measurement outcome counts keyed by bitstring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl ShotCounts {
    pub fn new(counts: BTreeMap<String, u64>) -> Result<Self> {
        let shots = counts.values().sum();
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { counts, shots })
    }

    /// Single-qubit counts from the number of `1` outcomes.
    pub fn from_ones(ones: u64, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if ones > shots {
            return Err(Error::Shape(format!("{ones} ones out of {shots} shots")));
        }
        let mut counts = BTreeMap::new();
        if shots - ones > 0 {
            counts.insert("0".to_string(), shots - ones);
        }
        if ones > 0 {
            counts.insert("1".to_string(), ones);
        }
        Ok(Self { counts, shots })
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    /// Estimated probability of `1` for single-qubit counts.
    pub fn p_one(&self) -> f64 {
        self.get("1") as f64 / self.shots as f64
    }
}

/// Samples `shots` single-qubit measurements of `qubit`.
pub fn sample_shots(state: &QubitState, qubit: usize, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p1 = state.prob_one(qubit)?.clamp(0.0, 1.0);
    let mut r = rng::stream(seed, 0);
    sample_binary(p1, shots, &mut r)
}

pub(crate) fn sample_binary<R: Rng>(p1: f64, shots: u64, r: &mut R) -> Result<ShotCounts> {
    let dist =
        Binomial::new(shots, p1.clamp(0.0, 1.0)).map_err(|e| Error::Numerical(format!("binomial sampler: {e}")))?;
    ShotCounts::from_ones(dist.sample(r), shots)
}

/// Row-stochastic 2×2 readout confusion matrix: `m[true][read]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Confusion([[f64; 2]; 2]);

impl Confusion {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        for row in &m {
            if row.iter().any(|&v| !(0.0..=1.0).contains(&v)) || (row[0] + row[1] - 1.0).abs() > 1e-10 {
                return Err(Error::NotStochastic);
            }
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.0
    }

    /// `(p0, p1) → (p0, p1)·M`.
    pub fn apply_probs(&self, p: [f64; 2]) -> [f64; 2] {
        let m = self.0;
        [p[0] * m[0][0] + p[1] * m[1][0], p[0] * m[0][1] + p[1] * m[1][1]]
    }

    /// Resamples each recorded outcome through the confusion matrix.
    pub fn apply_counts(&self, counts: &ShotCounts, seed: u64) -> Result<ShotCounts> {
        let mut r = rng::stream(seed, 1);
        let zeros = counts.get("0");
        let ones = counts.get("1");
        if zeros + ones != counts.shots() {
            return Err(Error::Shape("readout error applies to single-qubit counts".into()));
        }
        let m = self.0;
        let stay_zero = if zeros > 0 {
            Binomial::new(zeros, m[0][0])
                .map_err(|e| Error::Numerical(e.to_string()))?
                .sample(&mut r)
        } else {
            0
        };
        let flip_one = if ones > 0 {
            Binomial::new(ones, m[1][0])
                .map_err(|e| Error::Numerical(e.to_string()))?
                .sample(&mut r)
        } else {
            0
        };
        let read_zero = stay_zero + flip_one;
        ShotCounts::from_ones(counts.shots() - read_zero, counts.shots())
    }
}

impl TryFrom<[[f64; 2]; 2]> for Confusion {
    type Error = Error;
    fn try_from(m: [[f64; 2]; 2]) -> Result<Self> {
        Confusion::new(m)
    }
}

impl From<Confusion> for [[f64; 2]; 2] {
    fn from(c: Confusion) -> Self {
        c.0
    }
}
