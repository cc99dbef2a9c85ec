//! Data-encoding and trainable circuit templates.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::{Gate, GateKind};

/// Smallest input norm accepted by amplitude embedding.
pub const MIN_EMBED_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerKind {
    AngleX,
    AngleY,
    AmplitudeEmbedding,
    SimplifiedTwoDesign,
    StronglyEntangling,
    Bellman,
}

impl LayerKind {
    pub fn is_encoding(self) -> bool {
        matches!(
            self,
            LayerKind::AngleX | LayerKind::AngleY | LayerKind::AmplitudeEmbedding
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            LayerKind::AngleX => "angle-x",
            LayerKind::AngleY => "angle-y",
            LayerKind::AmplitudeEmbedding => "amplitude-embedding",
            LayerKind::SimplifiedTwoDesign => "simplified-two-design",
            LayerKind::StronglyEntangling => "strongly-entangling",
            LayerKind::Bellman => "bellman",
        }
    }
}

impl fmt::Display for LayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LayerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "angle-x" | "anglex" | "x" => LayerKind::AngleX,
            "angle-y" | "angley" | "y" => LayerKind::AngleY,
            "amplitude" | "amplitude-embedding" => LayerKind::AmplitudeEmbedding,
            "std" | "simplified-two-design" => LayerKind::SimplifiedTwoDesign,
            "sel" | "strongly-entangling" => LayerKind::StronglyEntangling,
            "bellman" => LayerKind::Bellman,
            _ => return Err(Error::UnknownKind(s.to_string())),
        })
    }
}

/// Trainable-parameter count of a layer template.
pub fn param_count(kind: LayerKind, n_qubits: usize, n_layers: usize) -> usize {
    match kind {
        LayerKind::AngleX | LayerKind::AngleY | LayerKind::AmplitudeEmbedding => 0,
        LayerKind::SimplifiedTwoDesign => n_qubits + n_layers * 2 * n_qubits.saturating_sub(1),
        LayerKind::StronglyEntangling => 3 * n_qubits * n_layers,
        LayerKind::Bellman => n_qubits * n_layers,
    }
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::Shape(format!("{what}: expected {expected} values, got {got}")));
    }
    Ok(())
}

/// One `RX(f_i)` or `RY(f_i)` per qubit.
pub fn angle_encoding(features: &[f64], axis: LayerKind, n_qubits: usize) -> Result<Circuit> {
    check_len("angle encoding features", features.len(), n_qubits)?;
    let gate = match axis {
        LayerKind::AngleX => Gate::rx,
        LayerKind::AngleY => Gate::ry,
        other => return Err(Error::Config(format!("{other} is not an angle encoding"))),
    };
    Circuit::from_gates(n_qubits, features.iter().enumerate().map(|(q, &f)| gate(q, f)))
}

/// Zero-pads `vector` to `2^n_qubits` entries and L2-normalises it.
pub fn normalized_amplitudes(vector: &[C64], n_qubits: usize) -> Result<Vec<C64>> {
    let dim = 1usize << n_qubits;
    if vector.len() > dim {
        return Err(Error::Shape(format!(
            "{} amplitudes do not fit in {n_qubits} qubits",
            vector.len()
        )));
    }
    let norm = vector.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm >= MIN_EMBED_NORM) {
        return Err(Error::ZeroNorm);
    }
    let mut out: Vec<C64> = vector.iter().map(|a| a / norm).collect();
    out.resize(dim, C64::new(0.0, 0.0));
    Ok(out)
}

/// Circuit preparing the normalised, zero-padded `vector` from `|0…0⟩`
/// (Möttönen state preparation), exact up to a global phase.
pub fn amplitude_embedding(vector: &[C64], n_qubits: usize) -> Result<Circuit> {
    let target = normalized_amplitudes(vector, n_qubits)?;
    let mags: Vec<f64> = target.iter().map(|a| a.norm()).collect();
    let mut circuit = Circuit::new(n_qubits);

    // Magnitudes: qubit t is rotated conditioned on the prefix of qubits 0..t.
    for t in 0..n_qubits {
        let block = 1usize << (n_qubits - t);
        let angles: Vec<f64> = (0..1usize << t)
            .map(|prefix| {
                let start = prefix * block;
                let half = block / 2;
                let w0: f64 = mags[start..start + half].iter().map(|m| m * m).sum();
                let w1: f64 = mags[start + half..start + block].iter().map(|m| m * m).sum();
                2.0 * w1.sqrt().atan2(w0.sqrt())
            })
            .collect();
        uniformly_controlled(&mut circuit, GateKind::RY, t, &angles)?;
    }

    // Phases: peel relative phases off from the last qubit upwards.
    let mut phases: Vec<f64> = target
        .iter()
        .map(|a| if a.norm() > 0.0 { a.arg() } else { 0.0 })
        .collect();
    if phases.iter().any(|&p| p != 0.0) {
        for t in (0..n_qubits).rev() {
            let mut angles = Vec::with_capacity(phases.len() / 2);
            let mut merged = Vec::with_capacity(phases.len() / 2);
            for pair in phases.chunks(2) {
                angles.push(pair[1] - pair[0]);
                merged.push((pair[0] + pair[1]) / 2.0);
            }
            uniformly_controlled(&mut circuit, GateKind::RZ, t, &angles)?;
            phases = merged;
        }
    }
    Ok(circuit)
}

/// Real-valued convenience wrapper around [`amplitude_embedding`].
pub fn amplitude_embedding_real(vector: &[f64], n_qubits: usize) -> Result<Circuit> {
    let v: Vec<C64> = vector.iter().map(|&x| C64::new(x, 0.0)).collect();
    amplitude_embedding(&v, n_qubits)
}

/// Rotation on `target` by `angles[c]` conditioned on qubits `0..target`
/// holding the value `c` (qubit 0 most significant), realised with
/// alternating rotations and CNOTs in Gray-code order.
fn uniformly_controlled(circuit: &mut Circuit, kind: GateKind, target: usize, angles: &[f64]) -> Result<()> {
    let k = target;
    debug_assert_eq!(angles.len(), 1 << k);
    let rot = |theta: f64| Gate::new(kind, vec![target], vec![theta]);
    if k == 0 {
        return circuit.push(rot(angles[0])?);
    }
    let n = 1usize << k;
    let gray = |i: usize| i ^ (i >> 1);
    for i in 0..n {
        let gi = gray(i);
        let theta: f64 = angles
            .iter()
            .enumerate()
            .map(|(j, &b)| if (j & gi).count_ones() % 2 == 0 { b } else { -b })
            .sum::<f64>()
            / n as f64;
        circuit.push(rot(theta)?)?;
        let flipped = gi ^ gray((i + 1) % n);
        let bit = flipped.trailing_zeros() as usize;
        circuit.push(Gate::cnot(k - 1 - bit, target))?;
    }
    Ok(())
}

/// Simplified two-design: an initial `RY` on every qubit, then per layer
/// `CZ` on pairs `(0,1),(2,3),…`, `RY` on qubits `0..n-1`, `CZ` on pairs
/// `(1,2),(3,4),…`, and `RY` on qubits `1..n`.
///
/// `weights` holds the `n` initial angles followed by `2(n−1)` per layer.
pub fn simplified_two_design(n_qubits: usize, n_layers: usize, weights: &[f64]) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::Shape("simplified two-design needs at least 2 qubits".into()));
    }
    check_len(
        "simplified two-design weights",
        weights.len(),
        param_count(LayerKind::SimplifiedTwoDesign, n_qubits, n_layers),
    )?;
    let mut c = Circuit::new(n_qubits);
    let (init, layers) = weights.split_at(n_qubits);
    for (q, &w) in init.iter().enumerate() {
        c.push(Gate::ry(q, w))?;
    }
    let per_layer = 2 * (n_qubits - 1);
    for layer in layers.chunks(per_layer) {
        let (first, second) = layer.split_at(n_qubits - 1);
        for i in (0..n_qubits - 1).step_by(2) {
            c.push(Gate::cz(i, i + 1))?;
        }
        for (q, &w) in first.iter().enumerate() {
            c.push(Gate::ry(q, w))?;
        }
        for i in (1..n_qubits - 1).step_by(2) {
            c.push(Gate::cz(i, i + 1))?;
        }
        for (q, &w) in second.iter().enumerate() {
            c.push(Gate::ry(q + 1, w))?;
        }
    }
    Ok(c)
}

/// Strongly entangling layers: `ROT` on every qubit then the CZ chain
/// `(0,1),(1,2),…,(n−2,n−1)`. Weights are laid out `[layer][qubit][3]`.
pub fn strongly_entangling(n_qubits: usize, n_layers: usize, weights: &[f64]) -> Result<Circuit> {
    check_len(
        "strongly entangling weights",
        weights.len(),
        param_count(LayerKind::StronglyEntangling, n_qubits, n_layers),
    )?;
    let mut c = Circuit::new(n_qubits);
    for layer in weights.chunks(3 * n_qubits) {
        for (q, w) in layer.chunks(3).enumerate() {
            c.push(Gate::rot(q, w[0], w[1], w[2]))?;
        }
        for q in 0..n_qubits.saturating_sub(1) {
            c.push(Gate::cz(q, q + 1))?;
        }
    }
    Ok(c)
}

/// Bellman layers: `H` on qubit 0, CNOT cascade down the register, `RY`
/// on every qubit, and the cascade reversed. Weights are `[layer][qubit]`.
pub fn bellman_layer(n_qubits: usize, n_layers: usize, weights: &[f64]) -> Result<Circuit> {
    check_len(
        "bellman weights",
        weights.len(),
        param_count(LayerKind::Bellman, n_qubits, n_layers),
    )?;
    let mut c = Circuit::new(n_qubits);
    for layer in weights.chunks(n_qubits) {
        c.push(Gate::h(0))?;
        for q in 0..n_qubits - 1 {
            c.push(Gate::cnot(q, q + 1))?;
        }
        for (q, &w) in layer.iter().enumerate() {
            c.push(Gate::ry(q, w))?;
        }
        for q in (0..n_qubits - 1).rev() {
            c.push(Gate::cnot(q, q + 1))?;
        }
    }
    Ok(c)
}

/// Builds any trainable template by kind.
pub fn ansatz_circuit(kind: LayerKind, n_qubits: usize, n_layers: usize, weights: &[f64]) -> Result<Circuit> {
    if n_layers == 0 {
        return Err(Error::Config("ansatz needs at least one layer".into()));
    }
    match kind {
        LayerKind::SimplifiedTwoDesign => simplified_two_design(n_qubits, n_layers, weights),
        LayerKind::StronglyEntangling => strongly_entangling(n_qubits, n_layers, weights),
        LayerKind::Bellman => bellman_layer(n_qubits, n_layers, weights),
        other => Err(Error::Config(format!("{other} is not a trainable layer"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn counts_for_template_grid() {
        assert_eq!(param_count(LayerKind::SimplifiedTwoDesign, 8, 3), 50);
        assert_eq!(param_count(LayerKind::StronglyEntangling, 8, 3), 72);
        assert_eq!(param_count(LayerKind::StronglyEntangling, 8, 1), 24);
        assert_eq!(param_count(LayerKind::Bellman, 8, 4), 32);
        assert_eq!(param_count(LayerKind::AmplitudeEmbedding, 8, 1), 0);
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(matches!("qaoa".parse::<LayerKind>(), Err(Error::UnknownKind(_))));
        assert_eq!("STD".parse::<LayerKind>().unwrap(), LayerKind::SimplifiedTwoDesign);
    }

    #[test]
    fn angle_encoding_length_checked() {
        assert!(angle_encoding(&[0.1, 0.2], LayerKind::AngleY, 3).is_err());
    }

    #[test]
    fn zero_angles_leave_ground_state() {
        let c = angle_encoding(&[0.0; 3], LayerKind::AngleY, 3).unwrap();
        let s = c.simulate().unwrap();
        assert!((s.amplitudes().unwrap()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn angle_pi_flips() {
        let c = angle_encoding(&[PI], LayerKind::AngleY, 1).unwrap();
        let s = c.simulate().unwrap();
        assert!((s.prob_one(0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn embedding_errors() {
        assert!(matches!(amplitude_embedding_real(&[0.0; 4], 2), Err(Error::ZeroNorm)));
        assert!(amplitude_embedding_real(&[1.0; 5], 2).is_err());
    }

    #[test]
    fn embedding_basis_vector_is_ground_state() {
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let s = amplitude_embedding_real(&v, 3).unwrap().simulate().unwrap();
        assert!((s.amplitudes().unwrap()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_pads_short_input() {
        let s = amplitude_embedding_real(&[3.0, 4.0], 2).unwrap().simulate().unwrap();
        let a = s.amplitudes().unwrap();
        assert!((a[0].norm() - 0.6).abs() < 1e-12);
        assert!((a[1].norm() - 0.8).abs() < 1e-12);
        assert!(a[2].norm() < 1e-12 && a[3].norm() < 1e-12);
    }

    #[test]
    fn template_shapes_checked() {
        assert!(simplified_two_design(4, 2, &[0.0; 5]).is_err());
        assert!(strongly_entangling(2, 1, &[0.0; 5]).is_err());
        assert!(bellman_layer(3, 2, &[0.0; 5]).is_err());
        assert!(ansatz_circuit(LayerKind::AngleY, 2, 1, &[]).is_err());
    }

    #[test]
    fn std_zero_weights_keep_ground_state() {
        let c = simplified_two_design(5, 2, &vec![0.0; param_count(LayerKind::SimplifiedTwoDesign, 5, 2)]).unwrap();
        let s = c.simulate().unwrap();
        assert!((s.amplitudes().unwrap()[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn std_gate_layout_for_eight_qubits() {
        let c = simplified_two_design(8, 1, &vec![0.1; 22]).unwrap();
        let cz: Vec<Vec<usize>> = c
            .gates()
            .filter(|g| g.kind == GateKind::CZ)
            .map(|g| g.targets.clone())
            .collect();
        assert_eq!(
            cz,
            vec![
                vec![0, 1],
                vec![2, 3],
                vec![4, 5],
                vec![6, 7],
                vec![1, 2],
                vec![3, 4],
                vec![5, 6]
            ]
        );
        assert_eq!(c.gates().filter(|g| g.kind == GateKind::RY).count(), 8 + 14);
    }
}
