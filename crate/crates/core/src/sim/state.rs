use num_complex::Complex64 as C64;

use super::channel::{KrausChannel, SuperOp};
use super::gate::Gate;
use super::kernel;
use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Pure(Vec<C64>),
    /// Row-major `2^n x 2^n` density matrix.
    Mixed(Vec<C64>),
}

/// Quantum register state, either a statevector or a density matrix.
///
/// Qubit 0 is the most significant bit of basis-state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    repr: Repr,
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(n_qubits));
    }
    Ok(())
}

impl QubitState {
    /// `|0…0⟩` as a statevector.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            repr: Repr::Pure(amps),
        })
    }

    /// Statevector from amplitudes that must already be normalised.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len())?;
        check_width(n_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Shape(format!("statevector norm² is {norm}, expected 1")));
        }
        Ok(Self {
            n_qubits,
            repr: Repr::Pure(amps),
        })
    }

    /// Density matrix from row-major entries; checks trace and hermiticity.
    pub fn from_density(rho: Vec<C64>) -> Result<Self> {
        let dim = (rho.len() as f64).sqrt().round() as usize;
        if dim * dim != rho.len() {
            return Err(Error::Shape("density matrix must be square".into()));
        }
        let n_qubits = log2_exact(dim)?;
        check_width(n_qubits)?;
        let state = Self {
            n_qubits,
            repr: Repr::Mixed(rho),
        };
        if (state.trace() - 1.0).abs() > NORM_TOL {
            return Err(Error::Shape("density matrix trace differs from 1".into()));
        }
        if state.hermiticity_error() > NORM_TOL {
            return Err(Error::Shape("density matrix is not Hermitian".into()));
        }
        Ok(state)
    }

    /// Maximally mixed state `I/2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            rho[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self {
            n_qubits,
            repr: Repr::Mixed(rho),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_pure_repr(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match &self.repr {
            Repr::Pure(a) => Some(a),
            Repr::Mixed(_) => None,
        }
    }

    /// Density matrix, computing `|ψ⟩⟨ψ|` for statevectors.
    pub fn density_matrix(&self) -> Vec<C64> {
        match &self.repr {
            Repr::Mixed(rho) => rho.clone(),
            Repr::Pure(a) => outer(a),
        }
    }

    /// Converts in place to the density-matrix representation.
    pub fn promote(&mut self) {
        if let Repr::Pure(a) = &self.repr {
            self.repr = Repr::Mixed(outer(a));
        }
    }

    pub fn into_mixed(mut self) -> Self {
        self.promote();
        self
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        if let Some(&q) = targets.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        for (i, a) in targets.iter().enumerate() {
            if targets[i + 1..].contains(a) {
                return Err(Error::DuplicateTargets(targets.to_vec()));
            }
        }
        Ok(())
    }

    /// `|ψ⟩ → U|ψ⟩` or `ρ → UρU†`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unitary(&gate.targets, &gate.matrix())
    }

    /// Applies an arbitrary unitary given in the local basis of `targets`.
    pub fn apply_unitary(&mut self, targets: &[usize], u: &[C64]) -> Result<()> {
        self.check_targets(targets)?;
        let k = targets.len();
        if u.len() != 1 << (2 * k) {
            return Err(Error::Shape("unitary size does not match targets".into()));
        }
        let n = self.n_qubits;
        let dim = 1 << k;
        let diagonal = kernel::is_diagonal(u, dim);
        let diag: Vec<C64> = (0..dim).map(|i| u[i * dim + i]).collect();
        match &mut self.repr {
            Repr::Pure(a) => {
                if diagonal {
                    kernel::apply_diagonal(a, n, targets, &diag);
                } else {
                    kernel::apply_local(a, n, targets, u);
                }
            }
            Repr::Mixed(rho) => {
                let cols: Vec<usize> = targets.iter().map(|&t| t + n).collect();
                if diagonal {
                    let cdiag = kernel::conj(&diag);
                    kernel::apply_diagonal(rho, 2 * n, targets, &diag);
                    kernel::apply_diagonal(rho, 2 * n, &cols, &cdiag);
                } else {
                    kernel::apply_local(rho, 2 * n, targets, u);
                    kernel::apply_local(rho, 2 * n, &cols, &kernel::conj(u));
                }
            }
        }
        Ok(())
    }

    /// `ρ → Σ K ρ K†`; statevectors are promoted first.
    pub fn apply_channel(&mut self, channel: &KrausChannel, targets: &[usize]) -> Result<()> {
        if targets.len() != channel.arity() {
            return Err(Error::ArityMismatch {
                expected: channel.arity(),
                got: targets.len(),
            });
        }
        self.check_targets(targets)?;
        self.promote();
        let n = self.n_qubits;
        let cols: Vec<usize> = targets.iter().map(|&t| t + n).collect();
        let Repr::Mixed(rho) = &mut self.repr else {
            unreachable!()
        };
        let mut acc = vec![C64::new(0.0, 0.0); rho.len()];
        for k in channel.operators() {
            let mut term = rho.clone();
            kernel::apply_local(&mut term, 2 * n, targets, k);
            kernel::apply_local(&mut term, 2 * n, &cols, &kernel::conj(k));
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        *rho = acc;
        Ok(())
    }

    /// Applies a superoperator on `targets`; statevectors are promoted first.
    pub fn apply_superop(&mut self, op: &SuperOp, targets: &[usize]) -> Result<()> {
        if targets.len() != op.arity() {
            return Err(Error::ArityMismatch {
                expected: op.arity(),
                got: targets.len(),
            });
        }
        self.check_targets(targets)?;
        self.promote();
        let n = self.n_qubits;
        let mut bits: Vec<usize> = targets.to_vec();
        bits.extend(targets.iter().map(|&t| t + n));
        let Repr::Mixed(rho) = &mut self.repr else {
            unreachable!()
        };
        kernel::apply_local(rho, 2 * n, &bits, op.matrix());
        Ok(())
    }

    /// Probability of reading `1` on `qubit`.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        self.check_targets(&[qubit])?;
        let shift = self.n_qubits - 1 - qubit;
        let p = match &self.repr {
            Repr::Pure(a) => a
                .iter()
                .enumerate()
                .filter(|(i, _)| (i >> shift) & 1 == 1)
                .map(|(_, x)| x.norm_sqr())
                .sum(),
            Repr::Mixed(rho) => {
                let dim = self.dim();
                (0..dim)
                    .filter(|i| (i >> shift) & 1 == 1)
                    .map(|i| rho[i * dim + i].re)
                    .sum()
            }
        };
        Ok(p)
    }

    /// `⟨Z⟩` on `qubit`, with `|0⟩ → +1`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        Ok((1.0 - 2.0 * self.prob_one(qubit)?).clamp(-1.0, 1.0))
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Pure(a) => a.iter().map(|x| x.norm_sqr()).sum(),
            Repr::Mixed(rho) => {
                let dim = self.dim();
                (0..dim).map(|i| rho[i * dim + i].re).sum()
            }
        }
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        match &self.repr {
            Repr::Pure(_) => self.trace().powi(2),
            Repr::Mixed(rho) => rho.iter().map(|x| x.norm_sqr()).sum(),
        }
    }

    fn hermiticity_error(&self) -> f64 {
        match &self.repr {
            Repr::Pure(_) => 0.0,
            Repr::Mixed(rho) => {
                let dim = self.dim();
                let mut worst = 0.0f64;
                for r in 0..dim {
                    for c in r..dim {
                        worst = worst.max((rho[r * dim + c] - rho[c * dim + r].conj()).norm());
                    }
                }
                worst
            }
        }
    }

    /// Checks normalisation (and hermiticity for density matrices).
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::Numerical(format!("state trace drifted to {tr}")));
        }
        let h = self.hermiticity_error();
        if h > tol {
            return Err(Error::Numerical(format!("density matrix hermiticity error {h}")));
        }
        Ok(())
    }
}

fn outer(a: &[C64]) -> Vec<C64> {
    let dim = a.len();
    let mut rho = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            rho[r * dim + c] = a[r] * a[c].conj();
        }
    }
    rho
}

pub(crate) fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::Shape(format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn x_flips_zero_to_one() {
        let mut s = QubitState::zero(1).unwrap();
        s.apply_gate(&Gate::x(0)).unwrap();
        assert!((s.prob_one(0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ry_pi_reaches_one_up_to_phase() {
        let mut s = QubitState::zero(1).unwrap();
        s.apply_gate(&Gate::ry(0, PI)).unwrap();
        let a = s.amplitudes().unwrap();
        assert!(a[0].norm() < 1e-15);
        assert!((a[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let mut s = QubitState::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate(&Gate::h(2)),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
        assert!(s.expectation_z(5).is_err());
    }

    #[test]
    fn expectation_z_basics() {
        let s = QubitState::zero(1).unwrap();
        assert_eq!(s.expectation_z(0).unwrap(), 1.0);
        let mut plus = QubitState::zero(1).unwrap();
        plus.apply_gate(&Gate::h(0)).unwrap();
        assert!(plus.expectation_z(0).unwrap().abs() < 1e-15);
        let mixed = QubitState::maximally_mixed(3).unwrap();
        for q in 0..3 {
            assert!(mixed.expectation_z(q).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn width_limit_is_enforced() {
        assert!(matches!(QubitState::zero(13), Err(Error::TooManyQubits(13))));
        assert!(QubitState::zero(0).is_err());
    }

    #[test]
    fn channel_arity_mismatch() {
        let mut s = QubitState::zero(2).unwrap();
        let ch = KrausChannel::depolarizing(0.1, 2).unwrap();
        assert!(matches!(
            s.apply_channel(&ch, &[0]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn density_validation() {
        let bad = vec![
            C64::new(0.7, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.7, 0.0),
        ];
        assert!(QubitState::from_density(bad).is_err());
        let nonherm = vec![
            C64::new(0.5, 0.0),
            C64::new(0.1, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.0),
        ];
        assert!(QubitState::from_density(nonherm).is_err());
    }
}
