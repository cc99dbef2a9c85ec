use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::optim::{Adam, Spsa};
use crate::data::{split, Dataset};
use crate::device::{DeviceSpec, Layout};
use crate::error::{Error, Result};
use crate::model::{bce_term, classify, loss_and_gradient, mean_loss, ExecutionConfig, HybridModel};
use crate::rng;

/// Progressively realistic training environments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    /// Ideal simulation of the ansatz.
    Noiseless,
    /// Ansatz routed and lowered to the device's coupling map and gates.
    Topology,
    /// As `Topology`, plus the device noise model.
    Noisy,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Noiseless => "noiseless",
            Phase::Topology => "topology",
            Phase::Noisy => "noisy",
        })
    }
}

impl FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noiseless" => Ok(Phase::Noiseless),
            "topology" => Ok(Phase::Topology),
            "noisy" => Ok(Phase::Noisy),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OptimizerConfig {
    Adam { lr: f64, beta1: f64, beta2: f64, eps: f64 },
    Spsa(Spsa),
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig::Adam {
            lr: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub phase: Phase,
    pub optimizer: OptimizerConfig,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Stop after this many epochs without a validation improvement.
    pub patience: Option<usize>,
    /// Share of the data held out for checkpoint selection.
    pub validation_fraction: f64,
    pub device: Option<Arc<DeviceSpec>>,
    pub layout: Option<Layout>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            phase: Phase::Noiseless,
            optimizer: OptimizerConfig::default(),
            epochs: 10,
            batch_size: 16,
            seed: 0,
            patience: None,
            validation_fraction: 0.2,
            device: None,
            layout: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1");
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return bad("validation fraction must lie in [0, 1)");
        }
        match self.optimizer {
            OptimizerConfig::Adam { lr, beta1, beta2, eps } => {
                // lr = 0 is allowed as a no-op run.
                if !(lr >= 0.0 && lr.is_finite()) {
                    return bad("learning rate must be non-negative");
                }
                if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) || !(eps > 0.0) {
                    return bad("Adam needs 0 ≤ β < 1 and ε > 0");
                }
            }
            OptimizerConfig::Spsa(s) => {
                if !(s.a >= 0.0 && s.c > 0.0 && s.alpha > 0.0 && s.gamma > 0.0 && s.stability >= 0.0) {
                    return bad("SPSA needs a ≥ 0, c > 0, α > 0, γ > 0, A ≥ 0");
                }
            }
        }
        if self.phase != Phase::Noiseless && self.device.is_none() {
            return Err(Error::Config(format!("phase `{}` needs a device", self.phase)));
        }
        Ok(())
    }

    /// Backend used for every forward and gradient evaluation.
    pub fn execution(&self) -> Result<ExecutionConfig> {
        let exec = match (self.phase, &self.device) {
            (Phase::Noiseless, _) => return Ok(ExecutionConfig::noiseless()),
            (Phase::Topology, Some(d)) => ExecutionConfig::topology(d.clone()),
            (Phase::Noisy, Some(d)) => ExecutionConfig::noisy(d.clone()),
            (p, None) => return Err(Error::Config(format!("phase `{p}` needs a device"))),
        };
        Ok(match &self.layout {
            Some(l) => exec.with_layout(l.clone()),
            None => exec,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean cross-entropy over the training part after the epoch.
    pub loss: f64,
    pub accuracy: f64,
    pub validation_loss: f64,
    /// Wall time of the epoch.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose weights were returned.
    pub best_epoch: usize,
}

impl TrainHistory {
    /// `epoch,loss,accuracy,seconds` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss,accuracy,seconds\n");
        for e in &self.epochs {
            out.push_str(&format!("{},{},{},{:.6}\n", e.epoch, e.loss, e.accuracy, e.seconds));
        }
        out
    }

    pub fn losses(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.loss).collect()
    }
}

/// Mean loss and accuracy of `model` on `d`.
pub fn evaluate_loss(model: &HybridModel, d: &Dataset, exec: &ExecutionConfig) -> Result<(f64, f64)> {
    let ys = model.evaluator(exec)?.forward_batch(&d.features)?;
    let loss = ys.iter().zip(&d.labels).map(|(&y, &l)| bce_term(y, l).0).sum::<f64>() / d.len() as f64;
    let correct = ys.iter().zip(&d.labels).filter(|(&y, &l)| classify(y) == l).count();
    if !loss.is_finite() {
        return Err(Error::Numerical("training loss is not finite".into()));
    }
    Ok((loss, correct as f64 / d.len() as f64))
}

/// Mean BCE over a batch of outputs, clamping outputs away from 0 and 1.
pub fn bce_loss(outputs: &[f64], labels: &[u8]) -> Result<f64> {
    if outputs.is_empty() || outputs.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} outputs but {} labels",
            outputs.len(),
            labels.len()
        )));
    }
    let mut clamped = false;
    let mut sum = 0.0;
    for (&y, &l) in outputs.iter().zip(labels) {
        if !(0.0..=1.0).contains(&y) || l > 1 {
            return Err(Error::Data(format!("output {y} / label {l} out of range")));
        }
        let (t, c) = bce_term(y, l);
        sum += t;
        clamped |= c;
    }
    if clamped {
        log::warn!("output at 0 or 1; cross-entropy clamped");
    }
    Ok(sum / outputs.len() as f64)
}

/// One SPSA update of all model parameters on a batch.
pub fn spsa_step(
    model: &HybridModel,
    xs: &[Vec<f64>],
    labels: &[u8],
    iteration: u64,
    spsa: &Spsa,
    exec: &ExecutionConfig,
    rng: &mut rng::Rng,
) -> Result<HybridModel> {
    let mut p = model.params();
    spsa.step(&mut p, iteration, rng, |q| {
        mean_loss(&model.with_params(q)?, xs, labels, exec)
    })?;
    model.with_params(&p)
}

/// Trains `model` and returns the weights with the lowest validation loss.
pub fn train(model: &HybridModel, data: &Dataset, cfg: &TrainConfig) -> Result<(HybridModel, TrainHistory)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if data.dims() != model.config().in_dim {
        return Err(Error::Shape(format!(
            "dataset has {} features, model expects {}",
            data.dims(),
            model.config().in_dim
        )));
    }
    let exec = cfg.execution()?;
    let (train_set, val_set) = if cfg.validation_fraction > 0.0 {
        match split(data, 1.0 - cfg.validation_fraction, cfg.seed) {
            Ok(parts) => parts,
            Err(_) => {
                log::warn!("dataset too small for a validation split; validating on the training data");
                (data.clone(), data.clone())
            }
        }
    } else {
        (data.clone(), data.clone())
    };

    let mut params = model.params();
    let mut current = model.clone();
    let mut adam = match cfg.optimizer {
        OptimizerConfig::Adam { lr, beta1, beta2, eps } => Some(Adam::new(lr, beta1, beta2, eps)),
        OptimizerConfig::Spsa(_) => None,
    };
    let mut spsa_rng = rng::stream(cfg.seed, 7);
    let mut iteration = 0u64;
    let mut history = TrainHistory::default();
    let mut best = (f64::INFINITY, model.clone());
    let mut since_best = 0usize;

    for epoch in 1..=cfg.epochs {
        let start = Instant::now();
        let mut order: Vec<usize> = (0..train_set.len()).collect();
        order.shuffle(&mut rng::stream(cfg.seed, 1000 + epoch as u64));
        for chunk in order.chunks(cfg.batch_size) {
            let batch = train_set.subset(chunk);
            iteration += 1;
            match (&mut adam, cfg.optimizer) {
                (Some(adam), _) => {
                    let lg = loss_and_gradient(&current, &batch.features, &batch.labels, &exec)?;
                    if lg.gradient.iter().any(|g| !g.is_finite()) {
                        return Err(Error::Numerical(format!("non-finite gradient in epoch {epoch}")));
                    }
                    adam.step(&mut params, &lg.gradient);
                }
                (None, OptimizerConfig::Spsa(s)) => {
                    current = spsa_step(
                        &current,
                        &batch.features,
                        &batch.labels,
                        iteration,
                        &s,
                        &exec,
                        &mut spsa_rng,
                    )?;
                    params = current.params();
                }
                (None, OptimizerConfig::Adam { .. }) => unreachable!(),
            }
            current.set_params(&params)?;
        }
        let (loss, accuracy) = evaluate_loss(&current, &train_set, &exec)?;
        let (validation_loss, _) = evaluate_loss(&current, &val_set, &exec)?;
        log::info!("epoch {epoch}: loss {loss:.6}, accuracy {accuracy:.4}, validation loss {validation_loss:.6}");
        history.epochs.push(EpochRecord {
            epoch,
            loss,
            accuracy,
            validation_loss,
            seconds: start.elapsed().as_secs_f64(),
        });
        if validation_loss < best.0 {
            best = (validation_loss, current.clone());
            history.best_epoch = epoch;
            since_best = 0;
        } else {
            since_best += 1;
            if cfg.patience.is_some_and(|p| since_best >= p) {
                log::info!("no validation improvement for {since_best} epochs; stopping");
                break;
            }
        }
    }
    Ok((best.1, history))
}
