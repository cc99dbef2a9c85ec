use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::kernel;
use crate::error::{Error, Result};

const TP_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map given by Kraus operators
/// on one or two qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausChannel {
    arity: usize,
    operators: Vec<Vec<C64>>,
}

impl KrausChannel {
    pub fn new(arity: usize, operators: Vec<Vec<C64>>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::Shape(format!("channel arity {arity} not in 1..=2")));
        }
        let dim = 1 << arity;
        if operators.is_empty() || operators.iter().any(|k| k.len() != dim * dim) {
            return Err(Error::Shape(format!("every Kraus operator must be {dim}x{dim}")));
        }
        let ch = Self { arity, operators };
        let dev = ch.trace_deviation();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            arity,
            operators: vec![kernel::identity(1 << arity)],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn operators(&self) -> &[Vec<C64>] {
        &self.operators
    }

    /// Largest entry of `Σ K†K − I` in magnitude.
    pub fn trace_deviation(&self) -> f64 {
        let dim = 1 << self.arity;
        let mut sum = vec![C64::new(0.0, 0.0); dim * dim];
        for k in &self.operators {
            let kk = kernel::matmul(&kernel::adjoint(k, dim), k, dim);
            for (s, v) in sum.iter_mut().zip(kk) {
                *s += v;
            }
        }
        let id = kernel::identity(dim);
        sum.iter().zip(id).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Depolarizing channel `ρ → (1−p)ρ + p·I/2^arity` on the target subsystem.
    pub fn depolarizing(p: f64, arity: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        if !(1..=2).contains(&arity) {
            return Err(Error::Shape(format!("channel arity {arity} not in 1..=2")));
        }
        let n_paulis = 1usize << (2 * arity);
        let w_id = 1.0 - p * (n_paulis as f64 - 1.0) / n_paulis as f64;
        let w_other = p / n_paulis as f64;
        let mut operators = vec![scale(&kernel::identity(1 << arity), w_id.sqrt())];
        if w_other > 0.0 {
            for idx in 1..n_paulis {
                let op = pauli_string(idx, arity);
                operators.push(scale(&op, w_other.sqrt()));
            }
        }
        Self::new(arity, operators)
    }

    /// Single-qubit thermal relaxation over `duration` seconds.
    ///
    /// Generalized amplitude damping with rate `1 − exp(−duration/t1)` and
    /// asymptotic excited population `excited_population`, followed by pure
    /// dephasing chosen so coherences decay as `exp(−duration/t2)`.
    pub fn thermal_relaxation(t1: f64, t2: f64, duration: f64, excited_population: f64) -> Result<Self> {
        if !(t1 > 0.0 && t1.is_finite()) {
            return Err(Error::Relaxation(format!("t1 must be positive, got {t1}")));
        }
        if !(t2 > 0.0 && t2.is_finite()) {
            return Err(Error::Relaxation(format!("t2 must be positive, got {t2}")));
        }
        if t2 > 2.0 * t1 {
            return Err(Error::Relaxation(format!("t2 = {t2} exceeds 2·t1 = {}", 2.0 * t1)));
        }
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::Relaxation(format!(
                "duration must be non-negative, got {duration}"
            )));
        }
        if !(0.0..=1.0).contains(&excited_population) {
            return Err(Error::InvalidProbability(excited_population));
        }

        let gamma = -(-duration / t1).exp_m1();
        let keep = (1.0 - gamma).sqrt();
        // Residual dephasing on top of what amplitude damping already does.
        let dephase = (-duration / t2 + duration / (2.0 * t1)).exp().min(1.0);

        let z = C64::new(0.0, 0.0);
        let r = |x: f64| C64::new(x, 0.0);
        let pg = 1.0 - excited_population;
        let pe = excited_population;
        let mut damping: Vec<Vec<C64>> = Vec::with_capacity(4);
        if pg > 0.0 {
            let s = pg.sqrt();
            damping.push(vec![r(s), z, z, r(s * keep)]);
            if gamma > 0.0 {
                damping.push(vec![z, r(s * gamma.sqrt()), z, z]);
            }
        }
        if pe > 0.0 {
            let s = pe.sqrt();
            damping.push(vec![r(s * keep), z, z, r(s)]);
            if gamma > 0.0 {
                damping.push(vec![z, z, r(s * gamma.sqrt()), z]);
            }
        }

        let a = ((1.0 + dephase) / 2.0).sqrt();
        let b = ((1.0 - dephase) / 2.0).sqrt();
        let mut operators = Vec::with_capacity(damping.len() * 2);
        for k in &damping {
            operators.push(scale(k, a));
        }
        if b > 0.0 {
            let pz = [r(1.0), z, z, r(-1.0)];
            for k in &damping {
                operators.push(scale(&kernel::matmul(&pz, k, 2), b));
            }
        }
        Self::new(1, operators)
    }

    pub fn superop(&self) -> SuperOp {
        SuperOp::from_kraus(self.arity, &self.operators)
    }
}

/// Linear map on vectorised density matrices of `arity` qubits.
///
/// The matrix acts on the `2·arity` local bits `(row bits, column bits)`,
/// i.e. `S = Σ K ⊗ conj(K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    arity: usize,
    matrix: Vec<C64>,
}

impl SuperOp {
    pub fn identity(arity: usize) -> Self {
        Self {
            arity,
            matrix: kernel::identity(1 << (2 * arity)),
        }
    }

    pub fn from_unitary(arity: usize, u: &[C64]) -> Self {
        let d = 1 << arity;
        Self {
            arity,
            matrix: kernel::kron(u, d, &kernel::conj(u), d),
        }
    }

    pub fn from_kraus(arity: usize, ops: &[Vec<C64>]) -> Self {
        let d = 1 << arity;
        let dd = d * d;
        let mut matrix = vec![C64::new(0.0, 0.0); dd * dd];
        for k in ops {
            let term = kernel::kron(k, d, &kernel::conj(k), d);
            for (m, t) in matrix.iter_mut().zip(term) {
                *m += t;
            }
        }
        Self { arity, matrix }
    }

    pub(crate) fn from_matrix(arity: usize, matrix: Vec<C64>) -> Self {
        debug_assert_eq!(matrix.len(), 1 << (4 * arity));
        Self { arity, matrix }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    /// `self` followed by `next` (both on the same qubits).
    pub fn then(&self, next: &SuperOp) -> SuperOp {
        assert_eq!(self.arity, next.arity);
        let dim = 1 << (2 * self.arity);
        SuperOp {
            arity: self.arity,
            matrix: kernel::matmul(&next.matrix, &self.matrix, dim),
        }
    }

    /// Embeds a single-qubit superoperator as the `slot` (0 or 1) factor of a
    /// two-qubit one.
    pub fn lift_to_pair(&self, slot: usize) -> SuperOp {
        assert_eq!(self.arity, 1);
        // Local bit order of a pair superop is (r0, r1, c0, c1); a single-qubit
        // superop acts on (r, c). Build it explicitly on the 16-dim space.
        let mut m = vec![C64::new(0.0, 0.0); 256];
        for out in 0..16usize {
            for inp in 0..16usize {
                let (r0o, r1o, c0o, c1o) = ((out >> 3) & 1, (out >> 2) & 1, (out >> 1) & 1, out & 1);
                let (r0i, r1i, c0i, c1i) = ((inp >> 3) & 1, (inp >> 2) & 1, (inp >> 1) & 1, inp & 1);
                let (act_o, act_i, same) = if slot == 0 {
                    ((r0o << 1) | c0o, (r0i << 1) | c0i, r1o == r1i && c1o == c1i)
                } else {
                    ((r1o << 1) | c1o, (r1i << 1) | c1i, r0o == r0i && c0o == c0i)
                };
                if same {
                    m[out * 16 + inp] = self.matrix[act_o * 4 + act_i];
                }
            }
        }
        SuperOp { arity: 2, matrix: m }
    }

    /// Matrix of the adjoint (Heisenberg-picture) map.
    pub fn adjoint_matrix(&self) -> Vec<C64> {
        kernel::adjoint(&self.matrix, 1 << (2 * self.arity))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let id = kernel::identity(1 << (2 * self.arity));
        self.matrix.iter().zip(id).all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn scale(m: &[C64], s: f64) -> Vec<C64> {
    m.iter().map(|x| x * s).collect()
}

/// Pauli string for a base-4 digit index (digit 0 = I, 1 = X, 2 = Y, 3 = Z),
/// most significant digit on the first qubit.
fn pauli_string(idx: usize, arity: usize) -> Vec<C64> {
    let mut op = vec![C64::new(1.0, 0.0)];
    let mut dim = 1;
    for q in 0..arity {
        let digit = (idx >> (2 * (arity - 1 - q))) & 3;
        op = kernel::kron(&op, dim, &pauli(digit), 2);
        dim *= 2;
    }
    op
}

fn pauli(digit: usize) -> Vec<C64> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match digit {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -i, i, z],
        _ => vec![one, z, z, -one],
    }
}
