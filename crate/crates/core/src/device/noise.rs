use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::sim::KrausChannel;

use super::route::Layout;
use super::spec::DeviceSpec;

/// Attaches device noise to a routed, native circuit.
///
/// After every gate on qubits `Q`: one depolarizing channel of arity `|Q|`
/// with the gate's error, then one thermal-relaxation channel per qubit in
/// `Q` for the gate's duration. `layout` maps circuit qubits to device
/// qubits; `measured` qubits receive the device readout confusion.
pub fn noise_schedule(circuit: &Circuit, device: &DeviceSpec, layout: &Layout, measured: &[usize]) -> Result<Circuit> {
    if layout.len() != circuit.n_qubits() {
        return Err(Error::Layout(format!(
            "layout covers {} qubits, circuit has {}",
            layout.len(),
            circuit.n_qubits()
        )));
    }
    layout.check_within(device.n_qubits)?;
    let mut out = Circuit::new(circuit.n_qubits());
    for ins in circuit.instructions() {
        let Instruction::Gate(g) = ins else {
            return Err(Error::Config("circuit already carries noise channels".into()));
        };
        let phys: Vec<usize> = g.targets.iter().map(|&q| layout.physical(q)).collect();
        let props = device
            .gate_props(g.kind, &phys)
            .ok_or_else(|| Error::MissingNoise(format!("no properties for {} on qubits {phys:?}", g.kind)))?;
        out.push(g.clone())?;
        out.push_channel(KrausChannel::depolarizing(props.error, g.arity())?, g.targets.clone())?;
        for (&q, &p) in g.targets.iter().zip(&phys) {
            let qp = &device.qubit_props[p];
            out.push_channel(
                KrausChannel::thermal_relaxation(qp.t1, qp.t2, props.duration, 0.0)?,
                vec![q],
            )?;
        }
    }
    for &q in measured {
        if q >= circuit.n_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: circuit.n_qubits(),
            });
        }
        if let Some(c) = device.qubit_props[layout.physical(q)].readout {
            out.set_readout(q, c);
        }
    }
    Ok(out)
}
