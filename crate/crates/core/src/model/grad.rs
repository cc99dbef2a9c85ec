use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::exec::{ExecutionConfig, QuantumLayer};
use super::hybrid::{encode_state, sigmoid, HybridModel};
use crate::ansatz::LayerKind;
use crate::error::{Error, Result};

/// Step of the central differences taken through the encoding.
pub const INPUT_FD_STEP: f64 = 1e-4;

const LOSS_FLOOR: f64 = 1e-12;

/// Binary cross-entropy of one output, clamped away from `ln 0`.
pub(crate) fn bce_term(y: f64, label: u8) -> (f64, bool) {
    let clamped = y.clamp(LOSS_FLOOR, 1.0 - LOSS_FLOOR);
    let l = if label == 1 {
        -clamped.ln()
    } else {
        -(1.0 - clamped).ln()
    };
    (l, clamped != y)
}

/// `∂BCE/∂s` for `y = σ(s)`.
pub fn bce_logit_derivative(y: f64, label: u8) -> f64 {
    y - f64::from(label)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossGradient {
    pub loss: f64,
    /// Same order as [`HybridModel::params`].
    pub gradient: Vec<f64>,
}

struct Encoded {
    /// Unnormalised real amplitudes (amplitude embedding only).
    u: Vec<f64>,
    psi: Vec<C64>,
    z: Vec<f64>,
}

fn check_batch(model: &HybridModel, xs: &[Vec<f64>], labels: &[u8]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Data("empty batch".into()));
    }
    if xs.len() != labels.len() {
        return Err(Error::Data(format!("{} samples but {} labels", xs.len(), labels.len())));
    }
    if let Some(l) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::Data(format!("label {l} is not binary")));
    }
    let in_dim = model.config().in_dim;
    if let Some(x) = xs.iter().find(|x| x.len() != in_dim) {
        return Err(Error::Shape(format!("expected {in_dim} features, got {}", x.len())));
    }
    Ok(())
}

fn encode_batch(model: &HybridModel, xs: &[Vec<f64>]) -> Result<Vec<Encoded>> {
    xs.par_iter()
        .map(|x| {
            let z = model.linear(x)?;
            let psi = model.encode(&z)?;
            let mut u = Vec::new();
            if model.config().encoding == LayerKind::AmplitudeEmbedding {
                u = z.clone();
                u.resize(psi.len(), 0.0);
            }
            Ok(Encoded { u, psi, z })
        })
        .collect()
}

/// Mean binary cross-entropy of the exact model outputs.
pub fn mean_loss(model: &HybridModel, xs: &[Vec<f64>], labels: &[u8], exec: &ExecutionConfig) -> Result<f64> {
    check_batch(model, xs, labels)?;
    let eval = model.evaluator(exec)?;
    let ys = eval.forward_batch(xs)?;
    let loss = ys.iter().zip(labels).map(|(&y, &l)| bce_term(y, l).0).sum::<f64>() / xs.len() as f64;
    if !loss.is_finite() {
        return Err(Error::Numerical("non-finite loss".into()));
    }
    Ok(loss)
}

/// Loss and gradient over a batch.
///
/// Ansatz angles are differentiated by the parameter-shift rule (every angle
/// enters a single Pauli rotation); the linear layer by the chain rule with
/// the encoding's input Jacobian from central differences of step
/// [`INPUT_FD_STEP`].
pub fn loss_and_gradient(
    model: &HybridModel,
    xs: &[Vec<f64>],
    labels: &[u8],
    exec: &ExecutionConfig,
) -> Result<LossGradient> {
    check_batch(model, xs, labels)?;
    exec.validate()?;
    if exec.shots.is_some() {
        return Err(Error::Config(
            "gradients need an exact backend, not shot sampling".into(),
        ));
    }
    let cfg = model.config();
    let theta = model.quantum_weights();
    let n_batch = xs.len() as f64;
    let encoded = encode_batch(model, xs)?;

    let base = QuantumLayer::prepare(cfg, theta, exec)?;
    let ds_dm = base.dlogit_dm();
    let mut loss = 0.0;
    let mut clamped = false;
    // dL/dm for every sample.
    let dm: Vec<f64> = encoded
        .iter()
        .zip(labels)
        .map(|(e, &l)| {
            let y = sigmoid(base.logit(base.expectation(&e.psi)));
            let (term, c) = bce_term(y, l);
            loss += term;
            clamped |= c;
            bce_logit_derivative(y, l) * ds_dm / n_batch
        })
        .collect();
    loss /= n_batch;
    if clamped {
        log::warn!("model output reached 0 or 1; loss clamped at {LOSS_FLOOR}");
    }
    if !loss.is_finite() {
        return Err(Error::Numerical("non-finite loss".into()));
    }

    let quantum_grad: Vec<f64> = (0..theta.len())
        .into_par_iter()
        .map(|k| {
            let mut sum = 0.0;
            let mut w = theta.to_vec();
            for (sign, shift) in [(0.5, FRAC_PI_2), (-0.5, -FRAC_PI_2)] {
                w[k] = theta[k] + shift;
                let layer = QuantumLayer::prepare(cfg, &w, exec)?;
                sum += sign
                    * encoded
                        .iter()
                        .zip(&dm)
                        .map(|(e, g)| g * layer.expectation(&e.psi))
                        .sum::<f64>();
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;

    let dz: Vec<Vec<f64>> = encoded
        .par_iter()
        .zip(&dm)
        .map(|(e, &g)| {
            Ok(input_jacobian(&base, cfg.encoding, cfg.n_qubits, e)?
                .into_iter()
                .map(|d| g * d)
                .collect())
        })
        .collect::<Result<_>>()?;

    let in_dim = cfg.in_dim;
    let out_dim = cfg.out_dim();
    let mut gradient = vec![0.0; model.n_params()];
    let (gw, rest) = gradient.split_at_mut(out_dim * in_dim);
    let (gb, gq) = rest.split_at_mut(out_dim);
    for (x, d) in xs.iter().zip(&dz) {
        for r in 0..out_dim {
            gb[r] += d[r];
            let row = &mut gw[r * in_dim..(r + 1) * in_dim];
            for (w, v) in row.iter_mut().zip(x) {
                *w += d[r] * v;
            }
        }
    }
    gq.copy_from_slice(&quantum_grad);
    Ok(LossGradient { loss, gradient })
}

/// `∂m/∂z` by central differences through the encoding.
fn input_jacobian(layer: &QuantumLayer, encoding: LayerKind, n: usize, e: &Encoded) -> Result<Vec<f64>> {
    let h = INPUT_FD_STEP;
    match encoding {
        LayerKind::AmplitudeEmbedding => {
            // m(u) = uᵀRu / uᵀu with R = Re(O); one coordinate moves at a time.
            let d = e.u.len();
            let v = layer.real_times(&e.u);
            let q: f64 = e.u.iter().zip(&v).map(|(a, b)| a * b).sum();
            let nn: f64 = e.u.iter().map(|a| a * a).sum();
            Ok((0..e.z.len())
                .map(|i| {
                    let at = |delta: f64| {
                        (q + 2.0 * delta * v[i] + delta * delta * layer.real_diag(i, d))
                            / (nn + 2.0 * delta * e.u[i] + delta * delta)
                    };
                    (at(h) - at(-h)) / (2.0 * h)
                })
                .collect())
        }
        kind => {
            let mut z = e.z.clone();
            (0..z.len())
                .map(|i| {
                    let orig = z[i];
                    z[i] = orig + h;
                    let plus = layer.expectation(&encode_state(kind, &z, n)?);
                    z[i] = orig - h;
                    let minus = layer.expectation(&encode_state(kind, &z, n)?);
                    z[i] = orig;
                    Ok((plus - minus) / (2.0 * h))
                })
                .collect()
        }
    }
}
