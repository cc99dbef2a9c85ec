use serde::{Deserialize, Serialize};

use crate::ansatz::{param_count, LayerKind};
use crate::error::{Error, Result};
use crate::sim::MAX_QUBITS;

/// Architecture of the hybrid classifier: linear layer → encoding → ansatz
/// → `⟨Z⟩` on one qubit → sigmoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n_qubits: usize,
    pub in_dim: usize,
    pub encoding: LayerKind,
    pub ansatz: LayerKind,
    pub n_layers: usize,
    pub measured_qubit: usize,
}

impl Default for ModelConfig {
    /// 8 qubits, amplitude embedding, three simplified two-design layers,
    /// 26 input features (13 bands of two images).
    fn default() -> Self {
        Self {
            n_qubits: 8,
            in_dim: 26,
            encoding: LayerKind::AmplitudeEmbedding,
            ansatz: LayerKind::SimplifiedTwoDesign,
            n_layers: 3,
            measured_qubit: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return bad(format!("n_qubits must be in 1..={MAX_QUBITS}"));
        }
        if self.in_dim == 0 {
            return bad("in_dim must be positive".into());
        }
        if !self.encoding.is_encoding() {
            return bad(format!("{} is not an encoding", self.encoding));
        }
        if self.ansatz.is_encoding() {
            return bad(format!("{} is not a trainable ansatz", self.ansatz));
        }
        if self.n_layers == 0 {
            return bad("n_layers must be at least 1".into());
        }
        if self.ansatz == LayerKind::SimplifiedTwoDesign && self.n_qubits < 2 {
            return bad("simplified two-design needs two qubits".into());
        }
        if self.measured_qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: self.measured_qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Width of the linear layer output.
    pub fn out_dim(&self) -> usize {
        match self.encoding {
            LayerKind::AmplitudeEmbedding => 1 << self.n_qubits,
            _ => self.n_qubits,
        }
    }

    pub fn n_quantum_params(&self) -> usize {
        param_count(self.ansatz, self.n_qubits, self.n_layers)
    }

    pub fn n_linear_params(&self) -> usize {
        self.out_dim() * (self.in_dim + 1)
    }

    pub fn n_params(&self) -> usize {
        self.n_linear_params() + self.n_quantum_params()
    }
}
