mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use noisyqml::ansatz::LayerKind;
use noisyqml::device::{noise_schedule, transpile, DeviceSpec};
use noisyqml::model::{
    classify, load_model, loss_and_gradient, mean_loss, save_model, sigmoid, ExecutionConfig, HybridModel, ModelConfig,
};
use noisyqml::rng;
use noisyqml::QubitState;
use rand::Rng;

const LOW: f64 = 0.268_941_421_369_995_1;
const HIGH: f64 = 0.731_058_578_630_004_9;

fn device(name: &str) -> Arc<DeviceSpec> {
    Arc::new(DeviceSpec::bundled(name).unwrap())
}

fn inputs(r: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| r.random_range(-1.0..1.0)).collect())
        .collect()
}

fn small(encoding: LayerKind, ansatz: LayerKind, n_qubits: usize, in_dim: usize) -> ModelConfig {
    ModelConfig {
        n_qubits,
        in_dim,
        encoding,
        ansatz,
        n_layers: 2,
        measured_qubit: 0,
    }
}

#[test]
fn engineered_excited_state_gives_upper_sigmoid() {
    let cfg = ModelConfig {
        n_qubits: 3,
        in_dim: 2,
        n_layers: 1,
        ..Default::default()
    };
    let n_q = cfg.n_quantum_params();
    let mut b = vec![0.0; 8];
    b[1 << 2] = 1.0;
    let model = HybridModel::from_parts(cfg, vec![0.0; 16], b, vec![0.0; n_q]).unwrap();
    let y = model.forward(&[0.3, -0.2], &ExecutionConfig::noiseless()).unwrap();
    assert!((y - sigmoid(1.0)).abs() < 1e-12);
    assert!((y - 0.7311).abs() < 1e-4);
    assert_eq!(classify(y), 1);
    assert_eq!(classify(0.27), 0);
    assert_eq!(classify(0.5), 1);
}

#[test]
fn full_depolarization_gives_one_half() {
    let mut r = rng::stream(51, 0);
    let model = HybridModel::new(
        small(LayerKind::AmplitudeEmbedding, LayerKind::SimplifiedTwoDesign, 4, 5),
        1,
    )
    .unwrap();
    let exec = ExecutionConfig::noisy(device("full-depolarizing"));
    let ev = model.evaluator(&exec).unwrap();
    for x in inputs(&mut r, 20, 5) {
        assert!((ev.forward(&x, 0).unwrap() - 0.5).abs() < 1e-6);
    }
}

#[test]
fn strong_relaxation_collapses_to_class_zero() {
    let mut r = rng::stream(52, 0);
    let model = HybridModel::new(small(LayerKind::AngleY, LayerKind::StronglyEntangling, 4, 3), 2).unwrap();
    let exec = ExecutionConfig::noisy(device("strong-relaxation"));
    for x in inputs(&mut r, 20, 3) {
        assert_eq!(model.predict(&x, &exec).unwrap(), 0);
    }
}

#[test]
fn shot_estimate_is_close_to_exact() {
    let mut r = rng::stream(53, 0);
    let model = HybridModel::new(small(LayerKind::AmplitudeEmbedding, LayerKind::Bellman, 3, 4), 3).unwrap();
    let exact = model.evaluator(&ExecutionConfig::noiseless()).unwrap();
    let shots = model
        .evaluator(&ExecutionConfig::noiseless().with_shots(1_000_000, 9))
        .unwrap();
    for (i, x) in inputs(&mut r, 5, 4).iter().enumerate() {
        let d = (exact.forward(x, i as u64).unwrap() - shots.forward(x, i as u64).unwrap()).abs();
        assert!(d < 0.01, "{d}");
    }
}

#[test]
fn zero_noise_devices_match_noiseless() {
    let mut r = rng::stream(54, 0);
    let model = HybridModel::new(ModelConfig::default(), 4).unwrap();
    let xs = inputs(&mut r, 8, 26);
    let base = model
        .evaluator(&ExecutionConfig::noiseless())
        .unwrap()
        .forward_batch(&xs)
        .unwrap();
    for exec in [
        ExecutionConfig::noisy(device("all-to-all")),
        ExecutionConfig::topology(device("all-to-all")),
        ExecutionConfig::topology(device("heavy-hex")),
    ] {
        let out = model.evaluator(&exec).unwrap().forward_batch(&xs).unwrap();
        for (a, b) in base.iter().zip(&out) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn outputs_stay_in_the_reachable_range() {
    let mut r = rng::stream(55, 0);
    for (seed, enc) in [LayerKind::AmplitudeEmbedding, LayerKind::AngleX, LayerKind::AngleY]
        .into_iter()
        .enumerate()
    {
        let model = HybridModel::new(small(enc, LayerKind::StronglyEntangling, 3, 4), seed as u64).unwrap();
        for exec in [
            ExecutionConfig::noiseless(),
            ExecutionConfig::noisy(device("heavy-hex")),
        ] {
            let ys = model
                .evaluator(&exec)
                .unwrap()
                .forward_batch(&inputs(&mut r, 30, 4))
                .unwrap();
            assert!(ys.iter().all(|&y| (LOW..=HIGH).contains(&y)));
        }
    }
}

#[test]
fn noiseless_layer_matches_full_circuit_simulation() {
    let mut r = rng::stream(56, 0);
    for enc in [LayerKind::AmplitudeEmbedding, LayerKind::AngleX, LayerKind::AngleY] {
        let cfg = ModelConfig {
            measured_qubit: 2,
            ..small(enc, LayerKind::SimplifiedTwoDesign, 3, 4)
        };
        let model = HybridModel::new(cfg, 6).unwrap();
        let ev = model.evaluator(&ExecutionConfig::noiseless()).unwrap();
        for x in inputs(&mut r, 10, 4) {
            let s = model.full_circuit(&x).unwrap().simulate().unwrap();
            let want = s.expectation_z(2).unwrap();
            assert!((ev.expectation(&x).unwrap() - want).abs() < 1e-10);
        }
    }
}

#[test]
fn noisy_layer_matches_density_matrix_simulation() {
    let dev = device("heavy-hex");
    let mut r = rng::stream(57, 0);
    let cfg = ModelConfig {
        measured_qubit: 1,
        ..small(LayerKind::AmplitudeEmbedding, LayerKind::StronglyEntangling, 3, 4)
    };
    let model = HybridModel::new(cfg.clone(), 7).unwrap();
    let exec = ExecutionConfig::noisy(dev.clone());
    let ev = model.evaluator(&exec).unwrap();

    let t = transpile(&model.ansatz_circuit().unwrap(), &dev, None, exec.route_seed).unwrap();
    let measured = t.final_layout.physical(1);
    let noisy = noise_schedule(&t.circuit, &dev, &t.device_layout(), &[measured]).unwrap();
    let w = t.circuit.n_qubits();
    let init = t.initial_layout.as_slice().to_vec();

    for x in inputs(&mut r, 5, 4) {
        let psi = model.encode(&model.linear(&x).unwrap()).unwrap();
        let mut wide = vec![c(0.0, 0.0); 1 << w];
        for (i, a) in psi.iter().enumerate() {
            let mut j = 0;
            for (v, &q) in init.iter().enumerate() {
                if (i >> (3 - 1 - v)) & 1 == 1 {
                    j |= 1 << (w - 1 - q);
                }
            }
            wide[j] = *a;
        }
        let mut state = QubitState::from_amplitudes(wide).unwrap().into_mixed();
        noisy.apply_to(&mut state).unwrap();
        let want = state.expectation_z(measured).unwrap();
        let got = ev.expectation(&x).unwrap();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

fn relative_gradient_error(model: &HybridModel, xs: &[Vec<f64>], labels: &[u8]) -> f64 {
    let exec = ExecutionConfig::noiseless();
    let g = loss_and_gradient(model, xs, labels, &exec).unwrap();
    let p = model.params();
    let h = 1e-4;
    let (mut err, mut norm) = (0.0f64, 0.0f64);
    for k in 0..p.len() {
        let mut q = p.clone();
        q[k] += h;
        let up = mean_loss(&model.with_params(&q).unwrap(), xs, labels, &exec).unwrap();
        q[k] -= 2.0 * h;
        let down = mean_loss(&model.with_params(&q).unwrap(), xs, labels, &exec).unwrap();
        let fd = (up - down) / (2.0 * h);
        err = err.max((fd - g.gradient[k]).abs());
        norm = norm.max(fd.abs());
    }
    // Some template/qubit pairs give a flat landscape; there the
    // finite-difference gradient is exactly zero and only the absolute
    // error is meaningful.
    if norm == 0.0 {
        assert!(err < 1e-12, "flat landscape, error {err}");
        return 0.0;
    }
    err / norm
}

#[test]
fn gradient_matches_finite_differences_on_random_models() {
    let mut r = rng::stream(58, 0);
    let encodings = [LayerKind::AmplitudeEmbedding, LayerKind::AngleX, LayerKind::AngleY];
    let ansatze = [
        LayerKind::SimplifiedTwoDesign,
        LayerKind::StronglyEntangling,
        LayerKind::Bellman,
    ];
    for case in 0..20u64 {
        let cfg = ModelConfig {
            measured_qubit: case as usize % 4,
            n_layers: 1,
            ..small(encodings[case as usize % 3], ansatze[(case / 3) as usize % 3], 4, 3)
        };
        let model = HybridModel::new(cfg, 100 + case).unwrap();
        let xs = inputs(&mut r, 3, 3);
        let labels = [0, 1, (case % 2) as u8];
        let e = relative_gradient_error(&model, &xs, &labels);
        assert!(e < 1e-5, "case {case}: {e}");
    }
}

#[test]
fn single_rotation_derivative_is_the_shift_difference() {
    let cfg = ModelConfig {
        n_layers: 1,
        ..small(LayerKind::AngleY, LayerKind::SimplifiedTwoDesign, 2, 2)
    };
    let n_q = cfg.n_quantum_params();
    let model = HybridModel::from_parts(cfg, vec![1.0, 0.0, 0.0, 1.0], vec![0.0; 2], vec![0.0; n_q]).unwrap();
    let x = vec![0.4, 0.4];
    let exec = ExecutionConfig::noiseless();
    let m = |theta: &[f64]| {
        let mut p = model.params();
        p[6..].copy_from_slice(theta);
        model
            .with_params(&p)
            .unwrap()
            .evaluator(&exec)
            .unwrap()
            .expectation(&x)
            .unwrap()
    };
    let g = loss_and_gradient(&model, &[x.clone()], &[1], &exec).unwrap();
    let y = model.forward(&x, &exec).unwrap();
    for k in 0..n_q {
        let mut plus = vec![0.0; n_q];
        let mut minus = vec![0.0; n_q];
        plus[k] = PI / 2.0;
        minus[k] = -PI / 2.0;
        let shift = (m(&plus) - m(&minus)) / 2.0;
        let mut a = vec![0.0; n_q];
        let mut b = vec![0.0; n_q];
        a[k] = 1e-5;
        b[k] = -1e-5;
        let fd = (m(&a) - m(&b)) / 2e-5;
        assert!((shift - fd).abs() < 1e-8);
        // With one sample the chain rule reduces to (y - 1) * ds/dm * dm/dθ, ds/dm = -1.
        assert!((g.gradient[6 + k] - (y - 1.0) * -shift).abs() < 1e-12);
    }
}

#[test]
fn save_load_round_trip_preserves_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let model = HybridModel::new(ModelConfig::default(), 8).unwrap();
    save_model(&model, &path).unwrap();
    let back = load_model(&path).unwrap();
    let bits = |m: &HybridModel| m.params().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&model), bits(&back));
    let mut r = rng::stream(59, 0);
    let exec = ExecutionConfig::noiseless();
    for x in inputs(&mut r, 5, 26) {
        assert!((model.forward(&x, &exec).unwrap() - back.forward(&x, &exec).unwrap()).abs() < 1e-12);
    }

    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_object_mut().unwrap().remove("quantum_weights");
    std::fs::write(&path, v.to_string()).unwrap();
    let err = load_model(&path).unwrap_err();
    assert!(err.to_string().contains("quantum weights"), "{err}");
}
