use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::sim::GateKind;

/// Size summary of a circuit: width, depth and per-kind gate counts.
///
/// Serialises with the keys `n_qubits, depth, rz, sx, ecr, x` in that order;
/// any non-native kinds go to `other`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetadata {
    pub n_qubits: usize,
    pub depth: usize,
    pub rz: usize,
    pub sx: usize,
    pub ecr: usize,
    pub x: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub other: BTreeMap<String, usize>,
}

impl CircuitMetadata {
    pub fn total_gates(&self) -> usize {
        self.rz + self.sx + self.ecr + self.x + self.other.values().sum::<usize>()
    }
}

/// Depth is the longest chain of gates linked through shared qubits;
/// channels do not count.
pub fn circuit_metadata(circuit: &Circuit) -> CircuitMetadata {
    let mut level = vec![0usize; circuit.n_qubits()];
    let mut meta = CircuitMetadata {
        n_qubits: circuit.n_qubits(),
        depth: 0,
        rz: 0,
        sx: 0,
        ecr: 0,
        x: 0,
        other: BTreeMap::new(),
    };
    for g in circuit.gates() {
        let l = 1 + g.targets.iter().map(|&q| level[q]).max().unwrap_or(0);
        for &q in &g.targets {
            level[q] = l;
        }
        meta.depth = meta.depth.max(l);
        match g.kind {
            GateKind::RZ => meta.rz += 1,
            GateKind::SX => meta.sx += 1,
            GateKind::ECR => meta.ecr += 1,
            GateKind::X => meta.x += 1,
            k => *meta.other.entry(k.name().to_string()).or_default() += 1,
        }
    }
    meta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Gate;

    #[test]
    fn empty_circuit() {
        let m = circuit_metadata(&Circuit::new(3));
        assert_eq!((m.depth, m.total_gates()), (0, 0));
    }

    #[test]
    fn single_ecr() {
        let m = circuit_metadata(&Circuit::from_gates(2, [Gate::ecr(0, 1)]).unwrap());
        assert_eq!((m.depth, m.ecr, m.total_gates()), (1, 1, 1));
    }

    #[test]
    fn depth_follows_dependencies() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::sx(0),
                Gate::sx(1),
                Gate::ecr(0, 1),
                Gate::rz(2, 0.1),
                Gate::ecr(1, 2),
                Gate::h(0),
            ],
        )
        .unwrap();
        let m = circuit_metadata(&c);
        assert_eq!(m.depth, 3);
        assert_eq!(m.other["h"], 1);
        assert_eq!(m.total_gates(), c.gate_count());
    }

    #[test]
    fn key_order_is_fixed() {
        let m = circuit_metadata(&Circuit::from_gates(1, [Gate::x(0)]).unwrap());
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n_qubits":1,"depth":1,"rz":0,"sx":0,"ecr":0,"x":1}"#);
    }
}
