use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use super::config::ModelConfig;
use super::exec::{ExecutionConfig, QuantumLayer};
use crate::ansatz::{amplitude_embedding_real, angle_encoding, ansatz_circuit, LayerKind, MIN_EMBED_NORM};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::sample_binary;

pub fn sigmoid(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

/// Class of an output probability; ties go to class 1.
pub fn classify(y: f64) -> u8 {
    u8::from(y >= 0.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridModel {
    config: ModelConfig,
    /// Row-major `out_dim × in_dim`.
    linear_w: Vec<f64>,
    linear_b: Vec<f64>,
    quantum_weights: Vec<f64>,
}

impl HybridModel {
    /// Linear weights and biases uniform in `±1/√in_dim`, ansatz angles
    /// uniform in `[0, 2π)`.
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut r = rng::stream(seed, 0);
        let bound = 1.0 / (config.in_dim as f64).sqrt();
        let linear_w = (0..config.out_dim() * config.in_dim)
            .map(|_| r.random_range(-bound..bound))
            .collect();
        let linear_b = (0..config.out_dim()).map(|_| r.random_range(-bound..bound)).collect();
        let quantum_weights = (0..config.n_quantum_params())
            .map(|_| r.random_range(0.0..TAU))
            .collect();
        Ok(Self {
            config,
            linear_w,
            linear_b,
            quantum_weights,
        })
    }

    pub fn from_parts(
        config: ModelConfig,
        linear_w: Vec<f64>,
        linear_b: Vec<f64>,
        quantum_weights: Vec<f64>,
    ) -> Result<Self> {
        config.validate()?;
        let shape = |what: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(Error::Shape(format!("{what}: expected {want} values, got {got}")))
            }
        };
        shape("linear weights", linear_w.len(), config.out_dim() * config.in_dim)?;
        shape("linear bias", linear_b.len(), config.out_dim())?;
        shape("quantum weights", quantum_weights.len(), config.n_quantum_params())?;
        Ok(Self {
            config,
            linear_w,
            linear_b,
            quantum_weights,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn linear_weights(&self) -> &[f64] {
        &self.linear_w
    }

    pub fn linear_bias(&self) -> &[f64] {
        &self.linear_b
    }

    pub fn quantum_weights(&self) -> &[f64] {
        &self.quantum_weights
    }

    pub fn n_params(&self) -> usize {
        self.config.n_params()
    }

    /// All trainable parameters: `W` (row-major), then `b`, then the ansatz.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.linear_w.clone();
        p.extend(&self.linear_b);
        p.extend(&self.quantum_weights);
        p
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::Shape(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                p.len()
            )));
        }
        let (w, rest) = p.split_at(self.linear_w.len());
        let (b, q) = rest.split_at(self.linear_b.len());
        self.linear_w.copy_from_slice(w);
        self.linear_b.copy_from_slice(b);
        self.quantum_weights.copy_from_slice(q);
        Ok(())
    }

    pub fn with_params(&self, p: &[f64]) -> Result<Self> {
        let mut m = self.clone();
        m.set_params(p)?;
        Ok(m)
    }

    /// `z = W x + b`.
    pub fn linear(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.config.in_dim {
            return Err(Error::Shape(format!(
                "expected {} features, got {}",
                self.config.in_dim,
                x.len()
            )));
        }
        Ok(self
            .linear_w
            .chunks_exact(self.config.in_dim)
            .zip(&self.linear_b)
            .map(|(row, b)| row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b)
            .collect())
    }

    /// Statevector produced by the encoding layer from `z`.
    pub fn encode(&self, z: &[f64]) -> Result<Vec<C64>> {
        encode_state(self.config.encoding, z, self.config.n_qubits)
    }

    /// The trainable part of the circuit.
    pub fn ansatz_circuit(&self) -> Result<Circuit> {
        ansatz_circuit(
            self.config.ansatz,
            self.config.n_qubits,
            self.config.n_layers,
            &self.quantum_weights,
        )
    }

    /// Encoding followed by the ansatz, as gates.
    pub fn full_circuit(&self, x: &[f64]) -> Result<Circuit> {
        let z = self.linear(x)?;
        let n = self.config.n_qubits;
        let mut c = match self.config.encoding {
            LayerKind::AmplitudeEmbedding => amplitude_embedding_real(&z, n)?,
            kind => angle_encoding(&z, kind, n)?,
        };
        c.extend(&self.ansatz_circuit()?)?;
        Ok(c)
    }

    pub fn evaluator(&self, exec: &ExecutionConfig) -> Result<Evaluator<'_>> {
        exec.validate()?;
        let layer = QuantumLayer::prepare(&self.config, &self.quantum_weights, exec)?;
        Ok(Evaluator {
            model: self,
            layer,
            exec: exec.clone(),
        })
    }

    pub fn forward(&self, x: &[f64], exec: &ExecutionConfig) -> Result<f64> {
        self.evaluator(exec)?.forward(x, 0)
    }

    pub fn predict(&self, x: &[f64], exec: &ExecutionConfig) -> Result<u8> {
        Ok(classify(self.forward(x, exec)?))
    }
}

pub(crate) fn encode_state(kind: LayerKind, z: &[f64], n: usize) -> Result<Vec<C64>> {
    match kind {
        LayerKind::AmplitudeEmbedding => {
            let dim = 1usize << n;
            if z.len() > dim {
                return Err(Error::Shape(format!("{} amplitudes do not fit in {n} qubits", z.len())));
            }
            let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm >= MIN_EMBED_NORM) {
                return Err(Error::ZeroNorm);
            }
            let mut psi: Vec<C64> = z.iter().map(|x| C64::new(x / norm, 0.0)).collect();
            psi.resize(dim, C64::new(0.0, 0.0));
            Ok(psi)
        }
        LayerKind::AngleX | LayerKind::AngleY => {
            if z.len() != n {
                return Err(Error::Shape(format!(
                    "angle encoding needs {n} values, got {}",
                    z.len()
                )));
            }
            let mut psi = vec![C64::new(1.0, 0.0)];
            for &a in z {
                let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
                let one = if kind == LayerKind::AngleX {
                    C64::new(0.0, -s)
                } else {
                    C64::new(s, 0.0)
                };
                psi = psi.iter().flat_map(|&p| [p * c, p * one]).collect();
            }
            Ok(psi)
        }
        other => Err(Error::Config(format!("{other} is not an encoding"))),
    }
}

/// A model bound to a prepared quantum layer; cheap to call per sample.
pub struct Evaluator<'a> {
    model: &'a HybridModel,
    layer: QuantumLayer,
    exec: ExecutionConfig,
}

impl Evaluator<'_> {
    pub fn layer(&self) -> &QuantumLayer {
        &self.layer
    }

    /// Exact `⟨Z⟩` of the measured qubit.
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        let z = self.model.linear(x)?;
        let psi = self.model.encode(&z)?;
        Ok(self.layer.expectation(&psi))
    }

    /// Model output for `x`. In shot mode, `index` selects the sample's
    /// random stream.
    pub fn forward(&self, x: &[f64], index: u64) -> Result<f64> {
        let m = self.expectation(x)?;
        let s = match self.exec.shots {
            None => self.layer.logit(m),
            Some(shots) => {
                let mut r = rng::stream(shots.seed, index);
                let counts = sample_binary(self.layer.p_one(m), shots.count, &mut r)?;
                2.0 * counts.p_one() - 1.0
            }
        };
        let y = sigmoid(s);
        if !y.is_finite() {
            return Err(Error::Numerical(format!("non-finite output for sample {index}")));
        }
        Ok(y)
    }

    /// Outputs for a batch, evaluated in parallel; sample `i` uses stream `i`.
    pub fn forward_batch(&self, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
        xs.par_iter()
            .enumerate()
            .map(|(i, x)| self.forward(x, i as u64))
            .collect()
    }
}
