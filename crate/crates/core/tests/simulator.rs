mod common;

use common::*;
use noisyqml::rng;
use noisyqml::sim::{sample_shots, Confusion, KrausChannel, QubitState};
use noisyqml::{Circuit, Gate};
use proptest::prelude::*;
use rand::Rng;

fn plus() -> Vec<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(s, 0.0), c(s, 0.0)]
}

fn rho_of(s: &QubitState) -> M {
    to_matrix(&s.density_matrix(), s.dim())
}

#[test]
fn random_three_qubit_sequences_match_dense_oracle() {
    let mut r = rng::stream(21, 0);
    for _ in 0..30 {
        let gates: Vec<Gate> = (0..15).map(|_| random_gate(&mut r, 3)).collect();
        let psi0 = random_state(&mut r, 8);
        let mut s = QubitState::from_amplitudes(psi0.clone()).unwrap();
        for g in &gates {
            s.apply_gate(g).unwrap();
        }
        let want = circuit_unitary(&gates, 3) * V::from_column_slice(&psi0);
        let got = s.amplitudes().unwrap();
        let d = got
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-10, "{d}");
    }
}

#[test]
fn pure_and_mixed_paths_agree_on_fifty_four_qubit_circuits() {
    let mut r = rng::stream(22, 0);
    for _ in 0..50 {
        let gates: Vec<Gate> = (0..25).map(|_| random_gate(&mut r, 4)).collect();
        let c = Circuit::from_gates(4, gates).unwrap();
        let pure = c.simulate().unwrap();
        let mut mixed = QubitState::zero(4).unwrap().into_mixed();
        c.apply_to(&mut mixed).unwrap();
        let psi = V::from_column_slice(pure.amplitudes().unwrap());
        let outer = &psi * psi.adjoint();
        assert!(max_dist(&outer, &rho_of(&mixed)) < 1e-10);
        mixed.check_physical(1e-10).unwrap();
    }
}

#[test]
fn identity_channel_leaves_state() {
    let mut r = rng::stream(23, 0);
    let mut s = QubitState::from_amplitudes(random_state(&mut r, 4))
        .unwrap()
        .into_mixed();
    let before = rho_of(&s);
    s.apply_channel(&KrausChannel::identity(1), &[1]).unwrap();
    assert!(max_dist(&before, &rho_of(&s)) < 1e-15);
}

#[test]
fn full_depolarizing_gives_maximally_mixed() {
    let mut r = rng::stream(24, 0);
    for _ in 0..10 {
        let mut s = QubitState::from_amplitudes(random_state(&mut r, 2)).unwrap();
        s.apply_channel(&KrausChannel::depolarizing(1.0, 1).unwrap(), &[0])
            .unwrap();
        assert!(max_dist(&rho_of(&s), &(id(2) * c(0.5, 0.0))) < 1e-10);
    }
}

#[test]
fn depolarizing_on_plus_state() {
    let mut s = QubitState::from_amplitudes(plus()).unwrap();
    s.apply_channel(&KrausChannel::depolarizing(0.3, 1).unwrap(), &[0])
        .unwrap();
    let rho = rho_of(&s);
    assert!((rho[(0, 1)] - c(0.35, 0.0)).norm() < 1e-12);
    assert!((rho[(0, 0)] - c(0.5, 0.0)).norm() < 1e-12);
}

#[test]
fn two_qubit_depolarizing_purity_matches_kraus_sum() {
    let mut r = rng::stream(25, 0);
    let psi0 = random_state(&mut r, 4);
    let p = 0.5;
    let mut s = QubitState::from_amplitudes(psi0.clone()).unwrap();
    s.apply_channel(&KrausChannel::depolarizing(p, 2).unwrap(), &[0, 1])
        .unwrap();

    // Kraus-sum oracle over all 16 two-qubit Pauli strings.
    let paulis = [id(2), x(), y(), z()];
    let mut ops = Vec::new();
    for (i, a) in paulis.iter().enumerate() {
        for (j, b) in paulis.iter().enumerate() {
            let w = if i == 0 && j == 0 {
                1.0 - p * 15.0 / 16.0
            } else {
                p / 16.0
            };
            ops.push(a.kronecker(b) * c(w.sqrt(), 0.0));
        }
    }
    let v = V::from_column_slice(&psi0);
    let want = kraus_apply(&ops, &(&v * v.adjoint()));
    assert!(max_dist(&want, &rho_of(&s)) < 1e-12);
    let purity_want = (&want * &want).trace().re;
    assert!((s.purity() - purity_want).abs() < 1e-12);
    // (1-p)ρ + p·I/4 closed form.
    let closed = (&v * v.adjoint()) * c(1.0 - p, 0.0) + id(4) * c(p / 4.0, 0.0);
    assert!(max_dist(&closed, &want) < 1e-12);
}

#[test]
fn depolarizing_fixes_maximally_mixed() {
    for p in [0.0, 0.2, 0.7, 1.0] {
        let mut s = QubitState::maximally_mixed(2).unwrap();
        s.apply_channel(&KrausChannel::depolarizing(p, 2).unwrap(), &[1, 0])
            .unwrap();
        assert!(max_dist(&rho_of(&s), &(id(4) * c(0.25, 0.0))) < 1e-12);
    }
}

#[test]
fn relaxation_limits_and_decay() {
    let zero = KrausChannel::thermal_relaxation(100e-6, 80e-6, 0.0, 0.0).unwrap();
    let mut s = QubitState::from_amplitudes(plus()).unwrap();
    let before = rho_of(&s.clone().into_mixed());
    s.apply_channel(&zero, &[0]).unwrap();
    assert!(max_dist(&before, &rho_of(&s)) < 1e-14);

    let long = KrausChannel::thermal_relaxation(100e-6, 80e-6, 1.0, 0.0).unwrap();
    let mut r = rng::stream(26, 0);
    let mut s = QubitState::from_amplitudes(random_state(&mut r, 2)).unwrap();
    s.apply_channel(&long, &[0]).unwrap();
    assert!((rho_of(&s)[(0, 0)].re - 1.0).abs() < 1e-6);

    let mut s = QubitState::from_amplitudes(plus()).unwrap();
    s.apply_channel(
        &KrausChannel::thermal_relaxation(100e-6, 80e-6, 1e-6, 0.0).unwrap(),
        &[0],
    )
    .unwrap();
    let off = rho_of(&s)[(0, 1)].norm();
    assert!((off - 0.5 * (-1.0f64 / 80.0).exp()).abs() < 1e-12, "{off}");

    let mut g = QubitState::zero(1).unwrap();
    g.apply_channel(
        &KrausChannel::thermal_relaxation(50e-6, 30e-6, 5e-6, 0.0).unwrap(),
        &[0],
    )
    .unwrap();
    assert!((rho_of(&g)[(0, 0)].re - 1.0).abs() < 1e-14);

    assert!(KrausChannel::thermal_relaxation(10e-6, 30e-6, 1e-6, 0.0).is_err());
    assert!(KrausChannel::thermal_relaxation(10e-6, 10e-6, -1e-6, 0.0).is_err());
}

#[test]
fn expectation_conventions() {
    assert_eq!(QubitState::zero(2).unwrap().expectation_z(1).unwrap(), 1.0);
    assert!(
        QubitState::from_amplitudes(plus())
            .unwrap()
            .expectation_z(0)
            .unwrap()
            .abs()
            < 1e-15
    );
    assert!(QubitState::maximally_mixed(3).unwrap().expectation_z(2).unwrap().abs() < 1e-15);
    assert!(QubitState::zero(2).unwrap().expectation_z(2).is_err());
}

#[test]
fn million_shots_concentrate() {
    let s = QubitState::from_amplitudes(plus()).unwrap();
    let counts = sample_shots(&s, 0, 1_000_000, 5).unwrap();
    assert!((counts.p_one() - 0.5).abs() < 0.002, "{}", counts.p_one());
    assert_eq!(counts, sample_shots(&s, 0, 1_000_000, 5).unwrap());
}

#[test]
fn readout_error_examples() {
    let m = Confusion::new([[0.98, 0.02], [0.05, 0.95]]).unwrap();
    let p = m.apply_probs([0.9, 0.1]);
    assert!((p[0] - 0.887).abs() < 1e-12 && (p[1] - 0.113).abs() < 1e-12);
    let swap = Confusion::new([[0.0, 1.0], [1.0, 0.0]]).unwrap();
    assert_eq!(swap.apply_probs([0.3, 0.7]), [0.7, 0.3]);
    assert_eq!(Confusion::identity().apply_probs([0.3, 0.7]), [0.3, 0.7]);
    assert!(Confusion::new([[0.9, 0.2], [0.0, 1.0]]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_and_channels_preserve_trace(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut r = rng::stream(seed, 0);
        let mut s = QubitState::from_amplitudes(random_state(&mut r, 8)).unwrap();
        for _ in 0..6 {
            s.apply_gate(&random_gate(&mut r, 3)).unwrap();
            prop_assert!((s.trace() - 1.0).abs() < 1e-10);
        }
        s.apply_channel(&KrausChannel::depolarizing(p, 2).unwrap(), &[2, 0]).unwrap();
        let t1 = r.random_range(10e-6..200e-6);
        let t2 = r.random_range(1e-6..2.0 * t1);
        s.apply_channel(&KrausChannel::thermal_relaxation(t1, t2, r.random_range(0.0..1e-4), p).unwrap(), &[1]).unwrap();
        prop_assert!(s.check_physical(1e-9).is_ok());
    }
}
