//! Hybrid quantum-classical binary classification under realistic device
//! constraints.
//!
//! The crate covers the whole pipeline: dense statevector and density-matrix
//! simulation with Kraus noise ([`sim`]), encoding and ansatz templates
//! ([`ansatz`]), device specifications with native-gate decomposition,
//! routing and noise scheduling ([`device`]), the hybrid classifier itself
//! ([`model`]), training ([`train`]), hardware explainability metrics
//! ([`metrics`]), QPU cost accounting ([`cost`]) and dataset handling
//! ([`data`]).
//!
//! Qubit 0 is always the most significant bit of a basis-state index, and
//! `⟨Z⟩` is `+1` on `|0⟩`.

pub mod ansatz;
pub mod circuit;
pub mod cost;
pub mod data;
pub mod device;
pub mod error;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod sim;
pub mod train;

pub use ansatz::LayerKind;
pub use circuit::{Circuit, Instruction};
pub use cost::{CostEstimate, CostParams};
pub use data::Dataset;
pub use device::{CircuitMetadata, DeviceSpec, Layout, Transpiled};
pub use error::{Error, Result};
pub use metrics::{EvaluationRecord, MetricsReport};
pub use model::{ExecutionConfig, HybridModel, ModelConfig};
pub use sim::{Confusion, Gate, GateKind, KrausChannel, QubitState, ShotCounts};
pub use train::{Phase, TrainConfig, TrainHistory};
