use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ModelConfig;
use super::hybrid::HybridModel;
use crate::error::{Error, Result};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    config: ModelConfig,
    linear_w: Vec<Vec<f64>>,
    linear_b: Vec<f64>,
    // Optional only so its absence gets a dedicated error.
    #[serde(default)]
    quantum_weights: Option<Vec<f64>>,
    checksum: String,
}

/// SHA-256 over the canonical config JSON and the little-endian bytes of
/// every weight in parameter order.
pub fn weights_checksum(model: &HybridModel) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(model.config()).expect("config serialises"));
    for p in model.params() {
        h.update(p.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn model_to_json(model: &HybridModel) -> String {
    let in_dim = model.config().in_dim;
    let file = ModelFile {
        schema_version: MODEL_SCHEMA_VERSION,
        config: model.config().clone(),
        linear_w: model
            .linear_weights()
            .chunks_exact(in_dim)
            .map(<[f64]>::to_vec)
            .collect(),
        linear_b: model.linear_bias().to_vec(),
        quantum_weights: Some(model.quantum_weights().to_vec()),
        checksum: weights_checksum(model),
    };
    serde_json::to_string_pretty(&file).expect("model serialises") + "\n"
}

pub fn model_from_json(text: &str) -> Result<HybridModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::ModelFile(format!("schema mismatch: {e}")))?;
    if file.schema_version != MODEL_SCHEMA_VERSION {
        return Err(Error::ModelFile(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    let quantum = file.quantum_weights.ok_or_else(|| {
        Error::ModelFile("quantum weights are missing; refusing to load an untrained quantum layer".into())
    })?;
    if file.linear_w.iter().any(|row| row.len() != file.config.in_dim) {
        return Err(Error::ModelFile("linear weight rows do not match in_dim".into()));
    }
    let model = HybridModel::from_parts(file.config, file.linear_w.concat(), file.linear_b, quantum)
        .map_err(|e| Error::ModelFile(e.to_string()))?;
    let sum = weights_checksum(&model);
    if sum != file.checksum {
        return Err(Error::ModelFile(format!(
            "checksum mismatch: file {}, weights {sum}",
            file.checksum
        )));
    }
    Ok(model)
}

pub fn save_model(model: &HybridModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<HybridModel> {
    model_from_json(&std::fs::read_to_string(path)?)
}
