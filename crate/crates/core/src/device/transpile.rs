use std::collections::BTreeSet;

use super::decompose::decompose_to_native;
use super::route::{route, Layout};
use super::spec::DeviceSpec;
use crate::circuit::{Circuit, Instruction};
use crate::error::Result;
use crate::sim::Gate;

/// A routed, native circuit restricted to the device qubits it touches.
///
/// Circuit qubit `i` is device qubit `physical[i]`; layouts map virtual
/// qubits to circuit (compact) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Transpiled {
    pub circuit: Circuit,
    pub physical: Vec<usize>,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swaps: usize,
}

impl Transpiled {
    /// Compact-to-device map as a layout.
    pub fn device_layout(&self) -> Layout {
        Layout::new(self.physical.clone()).expect("compaction is injective")
    }

    pub fn physical_initial_layout(&self) -> Layout {
        self.compose(&self.initial_layout)
    }

    pub fn physical_final_layout(&self) -> Layout {
        self.compose(&self.final_layout)
    }

    fn compose(&self, l: &Layout) -> Layout {
        Layout::new(l.as_slice().iter().map(|&c| self.physical[c]).collect()).expect("injective")
    }

    /// The circuit re-indexed onto device qubits.
    pub fn physical_circuit(&self, n_device: usize) -> Circuit {
        let mut out = Circuit::new(n_device);
        for g in self.circuit.gates() {
            let targets = g.targets.iter().map(|&q| self.physical[q]).collect();
            out.push(Gate { targets, ..g.clone() }).expect("within device");
        }
        out
    }
}

/// Routes `circuit` onto `device`, lowers it to the native gates and
/// compacts it to the qubits in use.
pub fn transpile(circuit: &Circuit, device: &DeviceSpec, layout: Option<&Layout>, seed: u64) -> Result<Transpiled> {
    let routed = route(circuit, device, layout, seed)?;
    let native = decompose_to_native(&routed.circuit, &device.native_gates)?;
    debug_assert!(native
        .gates()
        .all(|g| g.arity() == 1 || device.are_coupled(g.targets[0], g.targets[1])));

    let mut used: BTreeSet<usize> = routed.initial_layout.as_slice().iter().copied().collect();
    for ins in native.instructions() {
        let targets = match ins {
            Instruction::Gate(g) => &g.targets,
            Instruction::Channel { targets, .. } => targets,
        };
        used.extend(targets);
    }
    let physical: Vec<usize> = used.into_iter().collect();
    let mut compact = vec![usize::MAX; device.n_qubits];
    for (i, &p) in physical.iter().enumerate() {
        compact[p] = i;
    }
    let mut out = Circuit::new(physical.len());
    for ins in native.instructions() {
        match ins {
            Instruction::Gate(g) => {
                let targets = g.targets.iter().map(|&q| compact[q]).collect();
                out.push(Gate { targets, ..g.clone() })?;
            }
            Instruction::Channel { channel, targets } => {
                out.push_channel(channel.clone(), targets.iter().map(|&q| compact[q]).collect())?;
            }
        }
    }
    for (&q, &c) in native.readout() {
        out.set_readout(compact[q], c);
    }
    let remap = |l: &Layout| Layout::new(l.as_slice().iter().map(|&p| compact[p]).collect());
    Ok(Transpiled {
        circuit: out,
        initial_layout: remap(&routed.initial_layout)?,
        final_layout: remap(&routed.final_layout)?,
        physical,
        swaps: routed.swaps,
    })
}
