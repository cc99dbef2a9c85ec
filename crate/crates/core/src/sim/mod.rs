//! Dense statevector and density-matrix simulation.

mod channel;
mod gate;
pub(crate) mod kernel;
mod program;
mod shots;
mod state;

pub use channel::{KrausChannel, SuperOp};
pub use gate::{Gate, GateKind};
pub use program::{embedding_basis, Observable, Program};
pub(crate) use shots::sample_binary;
pub use shots::{sample_shots, Confusion, ShotCounts};
pub use state::{QubitState, MAX_QUBITS};
