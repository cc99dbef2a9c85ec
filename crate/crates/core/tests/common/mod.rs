//! Dense reference implementations built on nalgebra, independent of the
//! crate's kernels. Qubit 0 is the most significant bit.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use noisyqml::{Gate, GateKind};
pub use num_complex::Complex64 as C;

pub type M = DMatrix<C>;
pub type V = DVector<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn m2(a: [[C; 2]; 2]) -> M {
    M::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

pub fn rx(t: f64) -> M {
    let (co, s) = ((t / 2.0).cos(), (t / 2.0).sin());
    m2([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
}

pub fn ry(t: f64) -> M {
    let (co, s) = ((t / 2.0).cos(), (t / 2.0).sin());
    m2([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
}

pub fn rz(t: f64) -> M {
    m2([
        [C::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), C::from_polar(1.0, t / 2.0)],
    ])
}

pub fn h() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    m2([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
}

pub fn x() -> M {
    m2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn y() -> M {
    m2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn z() -> M {
    m2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn id(d: usize) -> M {
    M::identity(d, d)
}

pub fn sx() -> M {
    m2([[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]])
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`, control on the high bit.
pub fn controlled(u: &M) -> M {
    let p0 = m2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
    let p1 = m2([[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
    p0.kronecker(&id(2)) + p1.kronecker(u)
}

/// Echoed cross-resonance, control on the high bit: `(X⊗I − Y⊗X)/√2`.
pub fn ecr() -> M {
    (x().kronecker(&id(2)) - y().kronecker(&x())) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

pub fn swap() -> M {
    let mut m = M::zeros(4, 4);
    for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        m[(r, col)] = c(1.0, 0.0);
    }
    m
}

/// Local matrix of a gate with `targets[0]` as the high bit.
pub fn local(g: &Gate) -> M {
    let p = &g.params;
    match g.kind {
        GateKind::H => h(),
        GateKind::X => x(),
        GateKind::SX => sx(),
        GateKind::RX => rx(p[0]),
        GateKind::RY => ry(p[0]),
        GateKind::RZ => rz(p[0]),
        GateKind::Rot => rz(p[2]) * ry(p[1]) * rz(p[0]),
        GateKind::CNOT => controlled(&x()),
        GateKind::CZ => controlled(&z()),
        GateKind::ECR => ecr(),
        GateKind::SWAP => swap(),
    }
}

/// Full-register matrix of a gate: single-qubit gates by Kronecker products,
/// two-qubit gates by explicit basis permutation.
pub fn full(g: &Gate, n: usize) -> M {
    let u = local(g);
    if g.targets.len() == 1 {
        let q = g.targets[0];
        return id(1 << q).kronecker(&u).kronecker(&id(1 << (n - 1 - q)));
    }
    let (a, b) = (g.targets[0], g.targets[1]);
    let dim = 1 << n;
    let mut m = M::zeros(dim, dim);
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    for col in 0..dim {
        let lc = (bit(col, a) << 1) | bit(col, b);
        for lr in 0..4 {
            let mut row = col;
            for (q, v) in [(a, lr >> 1), (b, lr & 1)] {
                row = (row & !(1 << (n - 1 - q))) | (v << (n - 1 - q));
            }
            m[(row, col)] += u[(lr, lc)];
        }
    }
    m
}

pub fn circuit_unitary(gates: &[Gate], n: usize) -> M {
    gates.iter().fold(id(1 << n), |acc, g| full(g, n) * acc)
}

/// Maximum entry distance after removing the best global phase.
pub fn phase_dist(a: &M, b: &M) -> f64 {
    let overlap: C = a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| (p * phase - q).norm())
        .fold(0.0, f64::max)
}

pub fn vec_phase_dist(a: &[C], b: &[C]) -> f64 {
    let va = V::from_column_slice(a);
    let vb = V::from_column_slice(b);
    let overlap = va.dotc(&vb);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    a.iter().zip(b).map(|(p, q)| (p * phase - q).norm()).fold(0.0, f64::max)
}

pub fn to_matrix(flat: &[C], dim: usize) -> M {
    M::from_row_slice(dim, dim, flat)
}

pub fn max_dist(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn kraus_apply(ops: &[M], rho: &M) -> M {
    ops.iter()
        .fold(M::zeros(rho.nrows(), rho.ncols()), |acc, k| acc + k * rho * k.adjoint())
}

pub fn random_gate<R: rand::Rng>(r: &mut R, n: usize) -> Gate {
    let q = r.random_range(0..n);
    let p = (q + r.random_range(1..n.max(2))) % n.max(2);
    let a = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let b = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let d = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let two = n >= 2 && p < n && p != q;
    match r.random_range(0..11) {
        0 => Gate::h(q),
        1 => Gate::x(q),
        2 => Gate::sx(q),
        3 => Gate::rx(q, a),
        4 => Gate::ry(q, a),
        5 => Gate::rz(q, a),
        6 => Gate::rot(q, a, b, d),
        7 if two => Gate::cnot(q, p),
        8 if two => Gate::cz(q, p),
        9 if two => Gate::ecr(q, p),
        10 if two => Gate::swap(q, p),
        _ => Gate::ry(q, b),
    }
}

pub fn random_state<R: rand::Rng>(r: &mut R, dim: usize) -> Vec<C> {
    let v: Vec<C> = (0..dim)
        .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}
