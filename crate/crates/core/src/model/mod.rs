//! The hybrid classifier: a linear layer feeding a quantum circuit whose
//! single-qubit `⟨Z⟩` is squashed into a class probability.

mod config;
mod exec;
mod grad;
mod hybrid;
mod io;

pub use config::ModelConfig;
pub use exec::{Backend, ExecutionConfig, QuantumLayer, Shots};
pub(crate) use grad::bce_term;
pub use grad::{bce_logit_derivative, loss_and_gradient, mean_loss, LossGradient, INPUT_FD_STEP};
pub use hybrid::{classify, sigmoid, Evaluator, HybridModel};
pub use io::{load_model, model_from_json, model_to_json, save_model, weights_checksum, MODEL_SCHEMA_VERSION};
