//! Generators for the bundled device specifications.

use std::collections::BTreeSet;

use rand::Rng;

use super::spec::{DeviceSpec, GateProps, QubitProps};
use crate::rng;
use crate::sim::{Confusion, GateKind};

/// Coupling map of a 127-qubit heavy-hex lattice: seven rows of data qubits
/// (14, 15, 15, 15, 15, 15, 14) joined by four bridge qubits per gap.
pub fn heavy_hex_127() -> (usize, Vec<[usize; 2]>) {
    // (first column, last column) of each row.
    let rows: [(usize, usize); 7] = [(0, 13), (0, 14), (0, 14), (0, 14), (0, 14), (0, 14), (1, 14)];
    let mut edges = Vec::new();
    let mut next = 0usize;
    let mut row_start = Vec::new();
    for (r, &(lo, hi)) in rows.iter().enumerate() {
        let start = next;
        row_start.push(start);
        for i in 0..(hi - lo) {
            edges.push([start + i, start + i + 1]);
        }
        next += hi - lo + 1;
        if r + 1 < rows.len() {
            // Bridges sit below columns 0,4,8,12 after even rows, 2,6,10,14 after odd rows.
            next += 4;
        }
    }
    let qubit_at = |row: usize, col: usize| row_start[row] + col - rows[row].0;
    for r in 0..rows.len() - 1 {
        let first_bridge = row_start[r] + (rows[r].1 - rows[r].0 + 1);
        let offset = if r % 2 == 0 { 0 } else { 2 };
        for b in 0..4 {
            let col = offset + 4 * b;
            let bridge = first_bridge + b;
            edges.push([qubit_at(r, col), bridge]);
            edges.push([bridge, qubit_at(r + 1, col)]);
        }
    }
    edges.sort_unstable();
    (next, edges)
}

fn all_pairs(n: usize) -> Vec<[usize; 2]> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| [a, b])).collect()
}

fn round_to(x: f64, digits: i32) -> f64 {
    let s = 10f64.powi(digits);
    (x * s).round() / s
}

/// Heavy-hex device with `{rz, sx, x, ecr}` and superconducting-like noise.
pub fn heavy_hex_device() -> DeviceSpec {
    let (n, edges) = heavy_hex_127();
    let mut r = rng::stream(127, 0);
    let qubit_props = (0..n)
        .map(|_| {
            let t1 = round_to(r.random_range(150.0..300.0), 1);
            let t2 = round_to(r.random_range(60.0..f64::min(250.0, 2.0 * t1)), 1);
            let e01 = round_to(r.random_range(0.005..0.03), 4);
            let e10 = round_to(r.random_range(0.01..0.05), 4);
            QubitProps {
                t1: t1 * 1e-6,
                t2: t2 * 1e-6,
                readout: Some(Confusion::new([[round_to(1.0 - e01, 4), e01], [e10, round_to(1.0 - e10, 4)]]).unwrap()),
            }
        })
        .collect();
    let mut gate_props = vec![
        GateProps {
            gate: GateKind::RZ,
            qubits: None,
            duration: 0.0,
            error: 0.0,
        },
        GateProps {
            gate: GateKind::SX,
            qubits: None,
            duration: 60e-9,
            error: 2.5e-4,
        },
        GateProps {
            gate: GateKind::X,
            qubits: None,
            duration: 60e-9,
            error: 2.5e-4,
        },
    ];
    for &[a, b] in &edges {
        gate_props.push(GateProps {
            gate: GateKind::ECR,
            qubits: Some(vec![a, b]),
            duration: 660e-9,
            error: round_to(r.random_range(0.004..0.012), 5),
        });
    }
    let natives = [GateKind::RZ, GateKind::SX, GateKind::X, GateKind::ECR]
        .into_iter()
        .collect();
    DeviceSpec::new("heavy-hex", n, edges, natives, qubit_props, gate_props).expect("generated device is valid")
}

/// Fully connected device accepting every gate kind with uniform noise.
pub fn all_to_all_device(name: &str, n: usize, error: f64, duration: f64, t1: f64, t2: f64) -> DeviceSpec {
    let natives: BTreeSet<GateKind> = GateKind::ALL.into_iter().collect();
    let qubit_props = (0..n).map(|_| QubitProps { t1, t2, readout: None }).collect();
    let gate_props = GateKind::ALL
        .into_iter()
        .map(|gate| GateProps {
            gate,
            qubits: None,
            duration,
            error,
        })
        .collect();
    DeviceSpec::new(name, n, all_pairs(n), natives, qubit_props, gate_props).expect("generated device is valid")
}

/// Every bundled device, in the form written to `devices/*.json`.
pub fn bundled_devices() -> Vec<DeviceSpec> {
    vec![
        all_to_all_device("all-to-all", 12, 0.0, 0.0, 1.0, 1.0),
        heavy_hex_device(),
        all_to_all_device("full-depolarizing", 12, 1.0, 0.0, 1.0, 1.0),
        all_to_all_device("strong-relaxation", 12, 0.0, 100e-6, 1e-6, 1e-6),
    ]
}
