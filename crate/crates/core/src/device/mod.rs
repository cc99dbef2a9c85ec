//! Device descriptions and the transpilation pipeline: native-gate
//! decomposition, SWAP routing, circuit metadata and noise scheduling.

mod decompose;
pub mod generate;
mod metadata;
mod noise;
mod route;
mod spec;
mod transpile;

pub use decompose::{decompose_gate, decompose_to_native, merge_rz};
pub use metadata::{circuit_metadata, CircuitMetadata};
pub use noise::noise_schedule;
pub use route::{auto_layout, route, Layout, Routed};
pub use spec::{DeviceSpec, GateProps, QubitProps, SCHEMA_VERSION};
pub use transpile::{transpile, Transpiled};

use std::path::Path;

use crate::error::Result;

/// Loads and validates a device file.
pub fn load_device_spec(path: impl AsRef<Path>) -> Result<DeviceSpec> {
    DeviceSpec::load(path)
}
