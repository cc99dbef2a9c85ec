//! Dense local-operator kernels over a flat amplitude buffer.
//!
//! A buffer of length `2^n_bits` is addressed big-endian: bit `q` of the
//! register is bit `n_bits - 1 - q` of the flat index. A density matrix of
//! `n` qubits stored row-major is the same buffer read as `2n` bits, with
//! row qubit `q` at bit `q` and column qubit `q` at bit `n + q`.

use num_complex::Complex64 as C64;

/// Applies a row-major `2^k x 2^k` matrix to the `k` listed bits.
///
/// `targets[0]` is the most significant bit of the local index.
pub(crate) fn apply_local(amps: &mut [C64], n_bits: usize, targets: &[usize], m: &[C64]) {
    debug_assert_eq!(amps.len(), 1usize << n_bits);
    debug_assert_eq!(m.len(), 1usize << (2 * targets.len()));
    match targets.len() {
        1 => apply_dim::<2>(amps, n_bits, targets, m),
        2 => apply_dim::<4>(amps, n_bits, targets, m),
        3 => apply_dim::<8>(amps, n_bits, targets, m),
        4 => apply_dim::<16>(amps, n_bits, targets, m),
        k => panic!("local operators on {k} bits are not supported"),
    }
}

fn apply_dim<const D: usize>(amps: &mut [C64], n_bits: usize, targets: &[usize], m: &[C64]) {
    let k = targets.len();
    let positions: Vec<usize> = targets.iter().map(|&t| n_bits - 1 - t).collect();
    let mut offsets = [0usize; D];
    for (l, off) in offsets.iter_mut().enumerate() {
        for (t, &p) in positions.iter().enumerate() {
            if (l >> (k - 1 - t)) & 1 == 1 {
                *off |= 1 << p;
            }
        }
    }
    let mut sorted = positions.clone();
    sorted.sort_unstable();

    let mut buf = [C64::new(0.0, 0.0); D];
    for i in 0..(1usize << (n_bits - k)) {
        let mut base = i;
        for &p in &sorted {
            base = ((base >> p) << (p + 1)) | (base & ((1 << p) - 1));
        }
        for l in 0..D {
            buf[l] = amps[base + offsets[l]];
        }
        for r in 0..D {
            let row = &m[r * D..(r + 1) * D];
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..D {
                acc += row[c] * buf[c];
            }
            amps[base + offsets[r]] = acc;
        }
    }
}

/// Applies a diagonal operator given by its `2^k` diagonal entries.
pub(crate) fn apply_diagonal(amps: &mut [C64], n_bits: usize, targets: &[usize], diag: &[C64]) {
    let k = targets.len();
    let positions: Vec<usize> = targets.iter().map(|&t| n_bits - 1 - t).collect();
    for (idx, a) in amps.iter_mut().enumerate() {
        let mut l = 0;
        for (t, &p) in positions.iter().enumerate() {
            l |= ((idx >> p) & 1) << (k - 1 - t);
        }
        *a *= diag[l];
    }
}

pub(crate) fn is_diagonal(m: &[C64], dim: usize) -> bool {
    (0..dim).all(|r| (0..dim).all(|c| r == c || m[r * dim + c] == C64::new(0.0, 0.0)))
}

/// Row-major product `a * b` of two square matrices.
pub(crate) fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let x = a[r * dim + k];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dim {
                out[r * dim + c] += x * b[k * dim + c];
            }
        }
    }
    out
}

pub(crate) fn adjoint(a: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[c * dim + r] = a[r * dim + c].conj();
        }
    }
    out
}

pub(crate) fn transpose(a: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[c * dim + r] = a[r * dim + c];
        }
    }
    out
}

pub(crate) fn conj(a: &[C64]) -> Vec<C64> {
    a.iter().map(|x| x.conj()).collect()
}

/// Kronecker product `a ⊗ b`, with `a` on the high bits.
pub(crate) fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let d = da * db;
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    for ar in 0..da {
        for ac in 0..da {
            let x = a[ar * da + ac];
            for br in 0..db {
                for bc in 0..db {
                    out[(ar * db + br) * d + ac * db + bc] = x * b[br * db + bc];
                }
            }
        }
    }
    out
}

pub(crate) fn identity(dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        out[i * dim + i] = C64::new(1.0, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn x_on_msb_flips_high_bit() {
        let mut amps = vec![c(1.0), c(0.0), c(0.0), c(0.0)];
        let x = [c(0.0), c(1.0), c(1.0), c(0.0)];
        apply_local(&mut amps, 2, &[0], &x);
        assert_eq!(amps[2], c(1.0));
    }

    #[test]
    fn target_order_is_local_msb_first() {
        // CNOT with control bit 1, target bit 0.
        let mut cnot = vec![c(0.0); 16];
        for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[r * 4 + col] = c(1.0);
        }
        // |q0 q1> = |01>, index 1.
        let mut amps = vec![c(0.0), c(1.0), c(0.0), c(0.0)];
        apply_local(&mut amps, 2, &[1, 0], &cnot);
        assert_eq!(amps[3], c(1.0));
    }

    #[test]
    fn kron_places_first_factor_high() {
        let x = [c(0.0), c(1.0), c(1.0), c(0.0)];
        let id = identity(2);
        let xi = kron(&x, 2, &id, 2);
        // X ⊗ I maps |00> (0) to |10> (2).
        assert_eq!(xi[2 * 4], c(1.0));
    }
}
