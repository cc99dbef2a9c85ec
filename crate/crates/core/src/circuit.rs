//! Gate lists with optional noise-channel attachments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::sim::{kernel, Confusion, Gate, GateKind, KrausChannel, QubitState};

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate(Gate),
    Channel { channel: KrausChannel, targets: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
    /// Readout confusion tags for measured qubits.
    readout: BTreeMap<usize, Confusion>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ..Default::default()
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.instructions.push(Instruction::Gate(gate));
        Ok(())
    }

    pub fn push_channel(&mut self, channel: KrausChannel, targets: Vec<usize>) -> Result<()> {
        if channel.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                expected: channel.arity(),
                got: targets.len(),
            });
        }
        if let Some(&q) = targets.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        self.instructions.push(Instruction::Channel { channel, targets });
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Shape(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        self.instructions.extend(other.instructions.iter().cloned());
        Ok(())
    }

    pub fn set_readout(&mut self, qubit: usize, confusion: Confusion) {
        self.readout.insert(qubit, confusion);
    }

    pub fn readout(&self) -> &BTreeMap<usize, Confusion> {
        &self.readout
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            Instruction::Channel { .. } => None,
        })
    }

    pub fn channel_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Channel { .. }))
            .count()
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn has_channels(&self) -> bool {
        self.channel_count() > 0
    }

    /// Gates in reverse order, each inverted (up to global phase).
    /// Channels are not invertible and are dropped.
    pub fn inverse(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits);
        for g in self.gates().collect::<Vec<_>>().into_iter().rev() {
            c.instructions.push(Instruction::Gate(g.adjoint()));
        }
        c
    }

    /// Runs every instruction on `state`.
    pub fn apply_to(&self, state: &mut QubitState) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "circuit has {} qubits, state has {}",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        for ins in &self.instructions {
            match ins {
                Instruction::Gate(g) => state.apply_gate(g)?,
                Instruction::Channel { channel, targets } => state.apply_channel(channel, targets)?,
            }
        }
        Ok(())
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn simulate(&self) -> Result<QubitState> {
        let mut s = QubitState::zero(self.n_qubits)?;
        self.apply_to(&mut s)?;
        Ok(s)
    }

    /// Dense row-major unitary of the gate part (channels must be absent).
    pub fn unitary(&self) -> Result<Vec<C64>> {
        if self.has_channels() {
            return Err(Error::Shape("circuit with channels has no unitary".into()));
        }
        let dim = 1usize << self.n_qubits;
        let mut u = vec![C64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let mut basis = vec![C64::new(0.0, 0.0); dim];
            basis[col] = C64::new(1.0, 0.0);
            let mut s = QubitState::from_amplitudes(basis)?;
            self.apply_to(&mut s)?;
            for (row, a) in s.amplitudes().unwrap().iter().enumerate() {
                u[row * dim + col] = *a;
            }
        }
        Ok(u)
    }

    /// Text form: optional `# qubits N` header, then `NAME q0[,q1] [p,…]`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {}\n", self.n_qubits);
        for g in self.gates() {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut declared = 0usize;
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("qubits") {
                    declared = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: "malformed qubit count".into(),
                    })?;
                }
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let mut fields = line.split_whitespace();
            let kind: GateKind = fields.next().unwrap().parse().map_err(|e: Error| err(e.to_string()))?;
            let targets: Vec<usize> = fields
                .next()
                .ok_or_else(|| err("missing qubit list".into()))?
                .split(',')
                .map(|q| q.parse().map_err(|_| err(format!("bad qubit index `{q}`"))))
                .collect::<Result<_>>()?;
            let params: Vec<f64> = match fields.next() {
                Some(list) => list
                    .split(',')
                    .map(|p| p.parse().map_err(|_| err(format!("bad parameter `{p}`"))))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            if fields.next().is_some() {
                return Err(err("trailing fields".into()));
            }
            gates.push(Gate::new(kind, targets, params).map_err(|e| err(e.to_string()))?);
        }
        let width = gates
            .iter()
            .flat_map(|g| g.targets.iter())
            .map(|q| q + 1)
            .max()
            .unwrap_or(0)
            .max(declared);
        Circuit::from_gates(width, gates)
    }

    /// OpenQASM 3 text for circuits restricted to `rz`, `sx`, `x`, `ecr`.
    pub fn to_qasm3(&self) -> Result<String> {
        let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
        if self.gates().any(|g| g.kind == GateKind::ECR) {
            // stdgates.inc has no ecr: ECR = X_a · RZX(π/2), see ECR_QASM_BODY.
            let _ = writeln!(out, "gate ecr a, b {{ {ECR_QASM_BODY} }}");
        }
        let _ = writeln!(out, "qubit[{}] q;", self.n_qubits);
        for g in self.gates() {
            let q = &g.targets;
            match g.kind {
                GateKind::RZ => {
                    let _ = writeln!(out, "rz({:?}) q[{}];", g.params[0], q[0]);
                }
                GateKind::SX | GateKind::X => {
                    let _ = writeln!(out, "{} q[{}];", g.kind, q[0]);
                }
                GateKind::ECR => {
                    let _ = writeln!(out, "ecr q[{}], q[{}];", q[0], q[1]);
                }
                other => return Err(Error::NoDecomposition(format!("{other} (qasm emitter)"))),
            }
        }
        Ok(out)
    }
}

/// Body of the QASM `ecr` definition, up to global phase.
pub(crate) const ECR_QASM_BODY: &str = "h b; cx a, b; rz(pi/2) b; cx a, b; h b; x a;";

/// Largest entry-wise distance between `a` and `e^{iφ}·b`, minimised over
/// the global phase.
pub fn phase_distance(a: &[C64], b: &[C64]) -> f64 {
    let overlap: C64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

/// Embeds a `k`-qubit unitary in an `n`-qubit register (dense; tests and
/// verification only).
pub fn embed_unitary(u: &[C64], targets: &[usize], n_qubits: usize) -> Vec<C64> {
    let dim = 1usize << n_qubits;
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[col] = C64::new(1.0, 0.0);
        kernel::apply_local(&mut v, n_qubits, targets, u);
        for (row, x) in v.into_iter().enumerate() {
            out[row * dim + col] = x;
        }
    }
    out
}
