//! Rewriting abstract gates into a native gate set.
//!
//! Every template is fixed in structure: an angle `θ` of the input only ever
//! appears as `θ + const` inside a single `rz`, so shifted-parameter circuits
//! share the gate layout of the unshifted one.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::sim::{Gate, GateKind};

const MAX_DEPTH: usize = 6;

/// Candidate expansions of `g`, most preferred first (time order).
fn rules(g: &Gate) -> Vec<Vec<Gate>> {
    let t = &g.targets;
    let p = &g.params;
    match g.kind {
        GateKind::H => vec![
            vec![Gate::rz(t[0], FRAC_PI_2), Gate::sx(t[0]), Gate::rz(t[0], FRAC_PI_2)],
            vec![Gate::ry(t[0], FRAC_PI_2), Gate::x(t[0])],
        ],
        GateKind::X => vec![vec![Gate::sx(t[0]), Gate::sx(t[0])], vec![Gate::rx(t[0], PI)]],
        GateKind::SX => vec![vec![Gate::rx(t[0], FRAC_PI_2)]],
        GateKind::RX => vec![
            vec![
                Gate::rz(t[0], FRAC_PI_2),
                Gate::sx(t[0]),
                Gate::rz(t[0], p[0] + PI),
                Gate::sx(t[0]),
                Gate::rz(t[0], FRAC_PI_2),
            ],
            vec![Gate::h(t[0]), Gate::rz(t[0], p[0]), Gate::h(t[0])],
        ],
        GateKind::RY => vec![
            vec![
                Gate::sx(t[0]),
                Gate::rz(t[0], p[0] + PI),
                Gate::sx(t[0]),
                Gate::rz(t[0], PI),
            ],
            vec![
                Gate::rz(t[0], -FRAC_PI_2),
                Gate::rx(t[0], p[0]),
                Gate::rz(t[0], FRAC_PI_2),
            ],
        ],
        GateKind::RZ => vec![vec![Gate::h(t[0]), Gate::rx(t[0], p[0]), Gate::h(t[0])]],
        GateKind::Rot => vec![vec![Gate::rz(t[0], p[0]), Gate::ry(t[0], p[1]), Gate::rz(t[0], p[2])]],
        GateKind::CNOT => vec![
            // CNOT = e^{iπ/4} · RZ_c(π/2) · SX_t · ECR · X_c (up to global phase)
            vec![
                Gate::x(t[0]),
                Gate::ecr(t[0], t[1]),
                Gate::rz(t[0], FRAC_PI_2),
                Gate::sx(t[1]),
            ],
            vec![Gate::h(t[1]), Gate::cz(t[0], t[1]), Gate::h(t[1])],
        ],
        GateKind::CZ => vec![vec![Gate::h(t[1]), Gate::cnot(t[0], t[1]), Gate::h(t[1])]],
        GateKind::SWAP => vec![vec![
            Gate::cnot(t[0], t[1]),
            Gate::cnot(t[1], t[0]),
            Gate::cnot(t[0], t[1]),
        ]],
        GateKind::ECR => vec![vec![
            Gate::h(t[1]),
            Gate::cnot(t[0], t[1]),
            Gate::rz(t[1], FRAC_PI_2),
            Gate::cnot(t[0], t[1]),
            Gate::h(t[1]),
            Gate::x(t[0]),
        ]],
    }
}

fn expand(g: &Gate, natives: &BTreeSet<GateKind>, depth: usize, out: &mut Vec<Gate>) -> bool {
    if natives.contains(&g.kind) {
        out.push(g.clone());
        return true;
    }
    if depth == MAX_DEPTH {
        return false;
    }
    for rule in rules(g) {
        let mark = out.len();
        if rule.iter().all(|h| expand(h, natives, depth + 1, out)) {
            return true;
        }
        out.truncate(mark);
    }
    false
}

/// Gates of `g` rewritten over `natives`.
pub fn decompose_gate(g: &Gate, natives: &BTreeSet<GateKind>) -> Result<Vec<Gate>> {
    let mut out = Vec::new();
    if expand(g, natives, 0, &mut out) {
        Ok(out)
    } else {
        Err(Error::NoDecomposition(format!(
            "{} has no rule over {{{}}}",
            g.kind,
            natives.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
        )))
    }
}

/// Rewrites every gate into `natives`, then merges adjacent `rz` on the same
/// qubit. Channels are kept in place.
pub fn decompose_to_native(circuit: &Circuit, natives: &BTreeSet<GateKind>) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.n_qubits());
    for ins in circuit.instructions() {
        match ins {
            Instruction::Gate(g) => {
                for h in decompose_gate(g, natives)? {
                    out.push(h)?;
                }
            }
            Instruction::Channel { channel, targets } => {
                out.push_channel(channel.clone(), targets.clone())?;
            }
        }
    }
    for (&q, &c) in circuit.readout() {
        out.set_readout(q, c);
    }
    Ok(merge_rz(&out))
}

/// Fuses runs of `rz` on a qubit into one gate by adding angles.
///
/// Angles are summed without wrapping and `rz(0)` is kept, so the gate
/// layout never depends on parameter values.
pub fn merge_rz(circuit: &Circuit) -> Circuit {
    let mut ins: Vec<Instruction> = Vec::with_capacity(circuit.instructions().len());
    let mut last: Vec<Option<usize>> = vec![None; circuit.n_qubits()];
    for i in circuit.instructions() {
        match i {
            Instruction::Gate(g) if g.kind == GateKind::RZ => {
                let q = g.targets[0];
                if let Some(Instruction::Gate(prev)) = last[q].map(|k| &mut ins[k]) {
                    if prev.kind == GateKind::RZ {
                        prev.params[0] += g.params[0];
                        continue;
                    }
                }
                last[q] = Some(ins.len());
                ins.push(i.clone());
            }
            Instruction::Gate(Gate { targets, .. }) | Instruction::Channel { targets, .. } => {
                for &q in targets {
                    last[q] = Some(ins.len());
                }
                ins.push(i.clone());
            }
        }
    }
    let mut out = Circuit::new(circuit.n_qubits());
    for i in ins {
        match i {
            Instruction::Gate(g) => out.push(g).expect("validated"),
            Instruction::Channel { channel, targets } => out.push_channel(channel, targets).expect("validated"),
        }
    }
    for (&q, &c) in circuit.readout() {
        out.set_readout(q, c);
    }
    out
}
