//! Compiled circuits as fused superoperator blocks.
//!
//! Gates and channels are turned into superoperators and merged so that, as
//! far as possible, every block is one two-qubit gate together with all
//! single-qubit work and noise around it. The result can be run forward on a
//! density matrix or backward on an observable (Heisenberg picture).

use num_complex::Complex64 as C64;

use super::{kernel, QubitState, SuperOp};
use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Block {
    targets: Vec<usize>,
    op: SuperOp,
}

#[derive(Debug, Clone)]
pub struct Program {
    n_qubits: usize,
    blocks: Vec<Block>,
}

/// Reorders a two-qubit superoperator from qubit order `(a, b)` to `(b, a)`.
fn swap_pair(op: &SuperOp) -> SuperOp {
    let sigma = |i: usize| ((i & 0b0101) << 1) | ((i & 0b1010) >> 1);
    let m = op.matrix();
    let mut out = vec![C64::new(0.0, 0.0); 256];
    for r in 0..16 {
        for c in 0..16 {
            out[r * 16 + c] = m[sigma(r) * 16 + sigma(c)];
        }
    }
    SuperOp::from_matrix(2, out)
}

impl Program {
    pub fn compile(circuit: &Circuit) -> Result<Self> {
        let n = circuit.n_qubits();
        let mut blocks: Vec<Block> = Vec::new();
        let mut pending: Vec<Option<SuperOp>> = vec![None; n];
        let mut last: Vec<Option<usize>> = vec![None; n];

        for ins in circuit.instructions() {
            let (targets, op) = match ins {
                Instruction::Gate(g) => (&g.targets, SuperOp::from_unitary(g.arity(), &g.matrix())),
                Instruction::Channel { channel, targets } => (targets, channel.superop()),
            };
            if op.is_identity(1e-15) {
                continue;
            }
            match targets.len() {
                1 => {
                    let q = targets[0];
                    match last[q] {
                        Some(i) => {
                            let b = &mut blocks[i];
                            let lifted = if b.targets.len() == 1 {
                                op
                            } else {
                                op.lift_to_pair(usize::from(b.targets[1] == q))
                            };
                            b.op = b.op.then(&lifted);
                        }
                        None => {
                            pending[q] = Some(match pending[q].take() {
                                Some(p) => p.then(&op),
                                None => op,
                            });
                        }
                    }
                }
                2 => {
                    let (a, b) = (targets[0], targets[1]);
                    if let (Some(i), Some(j)) = (last[a], last[b]) {
                        if i == j {
                            let blk = &mut blocks[i];
                            let oriented = if blk.targets[0] == a { op } else { swap_pair(&op) };
                            blk.op = blk.op.then(&oriented);
                            continue;
                        }
                    }
                    let mut pre = SuperOp::identity(2);
                    for (slot, q) in [a, b].into_iter().enumerate() {
                        if let Some(p) = pending[q].take() {
                            pre = pre.then(&p.lift_to_pair(slot));
                        }
                    }
                    let idx = blocks.len();
                    blocks.push(Block {
                        targets: vec![a, b],
                        op: pre.then(&op),
                    });
                    last[a] = Some(idx);
                    last[b] = Some(idx);
                }
                k => return Err(Error::Shape(format!("cannot compile a {k}-qubit operation"))),
            }
        }
        for (q, p) in pending.into_iter().enumerate() {
            if let Some(op) = p {
                blocks.push(Block { targets: vec![q], op });
            }
        }
        Ok(Self { n_qubits: n, blocks })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Runs the program on `state`, promoting it to a density matrix.
    pub fn run(&self, state: &mut QubitState) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "program on {} qubits, state on {}",
                self.n_qubits,
                state.n_qubits()
            )));
        }
        for b in &self.blocks {
            state.apply_superop(&b.op, &b.targets)?;
        }
        Ok(())
    }

    /// `Φ†(Z_q)`, the Heisenberg-evolved Pauli-Z observable on `qubit`.
    pub fn heisenberg_z(&self, qubit: usize) -> Result<Observable> {
        let n = self.n_qubits;
        if qubit >= n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: n,
            });
        }
        let dim = 1usize << n;
        // Evolves Ô = Oᵀ, on which the adjoint map acts as the plain transpose Sᵀ.
        let mut o_t = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let sign = if (i >> (n - 1 - qubit)) & 1 == 0 { 1.0 } else { -1.0 };
            o_t[i * dim + i] = C64::new(sign, 0.0);
        }
        for b in self.blocks.iter().rev() {
            let d = 1 << (2 * b.targets.len());
            let st = kernel::transpose(b.op.matrix(), d);
            let mut bits = b.targets.clone();
            bits.extend(b.targets.iter().map(|&t| t + n));
            kernel::apply_local(&mut o_t, 2 * n, &bits, &st);
        }
        // O is Hermitian, so O = conj(Oᵀ).
        for x in &mut o_t {
            *x = x.conj();
        }
        Ok(Observable {
            n_qubits: n,
            matrix: o_t,
        })
    }
}

/// A Hermitian observable as a dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    matrix: Vec<C64>,
}

impl Observable {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    /// `⟨ψ|O|ψ⟩` for a normalised statevector.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let d = self.dim();
        debug_assert_eq!(psi.len(), d);
        let mut acc = 0.0;
        for (i, row) in self.matrix.chunks_exact(d).enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (o, p) in row.iter().zip(psi) {
                s += o * p;
            }
            acc += (psi[i].conj() * s).re;
        }
        acc
    }

    /// `Tr(Oρ)` for a density matrix.
    pub fn expectation_density(&self, rho: &[C64]) -> f64 {
        // Tr(Oρ) = Σ_ij O_ij ρ_ji
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.matrix[i * d + j] * rho[j * d + i]).re;
            }
        }
        acc
    }

    /// Restriction to a subspace: entry `(j, k)` of the result is entry
    /// `(basis[j], basis[k])` of `self`.
    pub fn restrict(&self, basis: &[usize], n_qubits: usize) -> Observable {
        let d = self.dim();
        let out_dim = basis.len();
        debug_assert_eq!(out_dim, 1 << n_qubits);
        let mut m = Vec::with_capacity(out_dim * out_dim);
        for &r in basis {
            for &c in basis {
                m.push(self.matrix[r * d + c]);
            }
        }
        Observable { n_qubits, matrix: m }
    }

    /// Real part of the matrix; enough for real statevectors.
    pub fn real_part(&self) -> Vec<f64> {
        self.matrix.iter().map(|x| x.re).collect()
    }
}

/// Basis index of the wide register for each basis index of a narrow one,
/// with narrow qubit `v` placed on wide qubit `map[v]` and the rest in `|0⟩`.
pub fn embedding_basis(map: &[usize], n_wide: usize) -> Vec<usize> {
    let n = map.len();
    (0..1usize << n)
        .map(|x| {
            map.iter()
                .enumerate()
                .filter(|(v, _)| (x >> (n - 1 - v)) & 1 == 1)
                .map(|(_, &w)| 1usize << (n_wide - 1 - w))
                .sum()
        })
        .collect()
}
