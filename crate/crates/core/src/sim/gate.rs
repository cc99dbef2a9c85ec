use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    SX,
    RX,
    RY,
    RZ,
    /// `RZ(ω)·RY(θ)·RZ(φ)` for parameters `[φ, θ, ω]`.
    Rot,
    CNOT,
    CZ,
    /// Echoed cross-resonance, `(X⊗I − Y⊗X)/√2` with the control as the
    /// first tensor factor.
    ECR,
    SWAP,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::H,
        GateKind::X,
        GateKind::SX,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::Rot,
        GateKind::CNOT,
        GateKind::CZ,
        GateKind::ECR,
        GateKind::SWAP,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ | GateKind::ECR | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    pub fn n_params(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::Rot => 3,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::SX => "sx",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::Rot => "rot",
            GateKind::CNOT => "cnot",
            GateKind::CZ => "cz",
            GateKind::ECR => "ecr",
            GateKind::SWAP => "swap",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let kind = match lower.as_str() {
            "cx" => GateKind::CNOT,
            other => GateKind::ALL
                .into_iter()
                .find(|k| k.name() == other)
                .ok_or_else(|| Error::UnknownKind(s.to_string()))?,
        };
        Ok(kind)
    }
}

/// A gate instance: kind, target qubits and angles (radians).
///
/// For two-qubit gates `targets[0]` is the control (CNOT, ECR) or simply
/// the first operand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub params: Vec<f64>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::TargetCount {
                kind: kind.name(),
                expected: kind.arity(),
                got: targets.len(),
            });
        }
        if params.len() != kind.n_params() {
            return Err(Error::ParamCount {
                kind: kind.name(),
                expected: kind.n_params(),
                got: params.len(),
            });
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTargets(targets));
        }
        Ok(Self { kind, targets, params })
    }

    fn raw(kind: GateKind, targets: Vec<usize>, params: Vec<f64>) -> Self {
        Self::new(kind, targets, params).expect("well-formed gate")
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, vec![q], vec![])
    }
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![q], vec![])
    }
    pub fn sx(q: usize) -> Self {
        Self::raw(GateKind::SX, vec![q], vec![])
    }
    pub fn rx(q: usize, theta: f64) -> Self {
        Self::raw(GateKind::RX, vec![q], vec![theta])
    }
    pub fn ry(q: usize, theta: f64) -> Self {
        Self::raw(GateKind::RY, vec![q], vec![theta])
    }
    pub fn rz(q: usize, theta: f64) -> Self {
        Self::raw(GateKind::RZ, vec![q], vec![theta])
    }
    pub fn rot(q: usize, phi: f64, theta: f64, omega: f64) -> Self {
        Self::raw(GateKind::Rot, vec![q], vec![phi, theta, omega])
    }
    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::raw(GateKind::CNOT, vec![control, target], vec![])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::raw(GateKind::CZ, vec![a, b], vec![])
    }
    pub fn ecr(control: usize, target: usize) -> Self {
        Self::raw(GateKind::ECR, vec![control, target], vec![])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::raw(GateKind::SWAP, vec![a, b], vec![])
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    /// Checks the gate against a register width.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        Gate::new(self.kind, self.targets.clone(), self.params.clone())?;
        if let Some(&q) = self.targets.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        Ok(())
    }

    /// Row-major unitary in the local basis of `targets` (first target is the
    /// most significant bit).
    pub fn matrix(&self) -> Vec<C64> {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let r = |x: f64| C64::new(x, 0.0);
        match self.kind {
            GateKind::H => vec![r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)],
            GateKind::X => vec![z, one, one, z],
            GateKind::SX => {
                let a = C64::new(0.5, 0.5);
                let b = C64::new(0.5, -0.5);
                vec![a, b, b, a]
            }
            GateKind::RX => rx_matrix(self.params[0]).to_vec(),
            GateKind::RY => ry_matrix(self.params[0]).to_vec(),
            GateKind::RZ => rz_matrix(self.params[0]).to_vec(),
            GateKind::Rot => {
                let [phi, theta, omega] = [self.params[0], self.params[1], self.params[2]];
                let m = mul2(&rz_matrix(omega), &mul2(&ry_matrix(theta), &rz_matrix(phi)));
                m.to_vec()
            }
            GateKind::CNOT => vec![
                one, z, z, z, //
                z, one, z, z, //
                z, z, z, one, //
                z, z, one, z,
            ],
            GateKind::CZ => vec![
                one, z, z, z, //
                z, one, z, z, //
                z, z, one, z, //
                z, z, z, -one,
            ],
            GateKind::ECR => {
                let s = FRAC_1_SQRT_2;
                vec![
                    z,
                    z,
                    r(s),
                    i * s, //
                    z,
                    z,
                    i * s,
                    r(s), //
                    r(s),
                    -i * s,
                    z,
                    z, //
                    -i * s,
                    r(s),
                    z,
                    z,
                ]
            }
            GateKind::SWAP => vec![
                one, z, z, z, //
                z, z, one, z, //
                z, one, z, z, //
                z, z, z, one,
            ],
        }
    }

    /// Inverse gate, exact up to a global phase (SX maps to RX(−π/2)).
    pub fn adjoint(&self) -> Gate {
        let q = &self.targets;
        match self.kind {
            GateKind::RX | GateKind::RY | GateKind::RZ => Gate::raw(self.kind, q.clone(), vec![-self.params[0]]),
            GateKind::Rot => Gate::rot(q[0], -self.params[2], -self.params[1], -self.params[0]),
            GateKind::SX => Gate::rx(q[0], -PI / 2.0),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        let qs: Vec<String> = self.targets.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| format!("{p:?}")).collect();
            write!(f, " {}", ps.join(","))?;
        }
        Ok(())
    }
}

pub(crate) fn rx_matrix(theta: f64) -> [C64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)]
}

pub(crate) fn ry_matrix(theta: f64) -> [C64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]
}

pub(crate) fn rz_matrix(theta: f64) -> [C64; 4] {
    let z = C64::new(0.0, 0.0);
    [
        C64::from_polar(1.0, -theta / 2.0),
        z,
        z,
        C64::from_polar(1.0, theta / 2.0),
    ]
}

pub(crate) fn mul2(a: &[C64; 4], b: &[C64; 4]) -> [C64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}
