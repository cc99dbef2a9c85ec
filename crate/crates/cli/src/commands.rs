use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::args::*;
use crate::UsageError;
use noisyqml::cost::{consistency_notes, extrapolate_cost, qpu_cost};
use noisyqml::data::{flip_labels, load_csv, save_csv, synthesize};
use noisyqml::device::{circuit_metadata, transpile};
use noisyqml::metrics::{metrics_report, reports_to_csv};
use noisyqml::model::{load_model, save_model, weights_checksum};
use noisyqml::train::{evaluate_loss, train, OptimizerConfig, Spsa};
use noisyqml::{
    Circuit, CostParams, Dataset, DeviceSpec, EvaluationRecord, ExecutionConfig, HybridModel, Layout, ModelConfig,
    Phase, TrainConfig,
};

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Header shared by every report: tool identity, full config and seeds.
fn report(command: &str, config: Value, seeds: Value, body: Value) -> Value {
    let mut out = json!({
        "tool": { "name": "noisyqml", "version": env!("CARGO_PKG_VERSION"), "command": command },
        "config": config,
        "seeds": seeds,
    });
    if let (Some(o), Value::Object(b)) = (out.as_object_mut(), body) {
        o.extend(b);
    }
    out
}

struct Output<'a> {
    dir: &'a Path,
    quiet: bool,
}

impl Output<'_> {
    fn write(&self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    fn write_json(&self, name: &str, v: &Value) -> Result<()> {
        self.write(name, &(serde_json::to_string_pretty(v)? + "\n"))
    }

    fn say(&self, text: &str) {
        if !self.quiet {
            println!("{text}");
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    fs::create_dir_all(&cli.out_dir).with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let out = Output {
        dir: &cli.out_dir,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Synth(a) => synth(a, cli.seed, &out),
        Command::Train(a) => train_cmd(a, cli.seed, &out),
        Command::Eval(a) => eval(a, cli.seed, &out),
        Command::Transpile(a) => transpile_cmd(a, cli.seed, &out),
        Command::Cost(a) => cost(a, &out),
    }
}

fn load_data(a: &DataArgs) -> Result<Dataset> {
    load_csv(&a.data, !a.no_header).with_context(|| format!("loading {}", a.data.display()))
}

fn device(name: &str) -> Result<Arc<DeviceSpec>> {
    Ok(Arc::new(
        DeviceSpec::resolve(name).with_context(|| format!("device `{name}`"))?,
    ))
}

fn layout(l: &Option<Vec<usize>>) -> Result<Option<Layout>> {
    Ok(l.as_ref().map(|v| Layout::new(v.clone())).transpose()?)
}

fn synth(a: &SynthArgs, seed: u64, out: &Output) -> Result<()> {
    let d = synthesize(a.n, a.dims, a.sep, seed)?;
    let path = out.dir.join(&a.output);
    save_csv(&d, &path)?;
    let config = json!({ "n": a.n, "dims": a.dims, "sep": a.sep, "output": a.output });
    let body = json!({ "class_counts": d.class_counts() });
    out.write_json(
        "synth_report.json",
        &report("synth", config, json!({ "seed": seed }), body),
    )?;
    out.say(&format!("wrote {} samples to {}", d.len(), path.display()));
    Ok(())
}

fn train_cmd(a: &TrainArgs, seed: u64, out: &Output) -> Result<()> {
    let phase: Phase = a.phase.into();
    if phase != Phase::Noiseless && a.device.is_none() {
        return usage(format!("--phase {phase} needs --device"));
    }
    let data = load_data(&a.data)?;
    let config = ModelConfig {
        n_qubits: a.model.n_qubits,
        in_dim: data.dims(),
        encoding: a.model.encoding,
        ansatz: a.model.ansatz,
        n_layers: a.model.layers,
        measured_qubit: a.model.measured_qubit,
    };
    let optimizer = match a.optimizer {
        OptimizerArg::Adam => OptimizerConfig::Adam {
            lr: a.lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        },
        OptimizerArg::Spsa => OptimizerConfig::Spsa(Spsa::default()),
    };
    let cfg = TrainConfig {
        phase,
        optimizer,
        epochs: a.epochs,
        batch_size: a.batch_size,
        seed,
        patience: a.patience,
        validation_fraction: a.validation_fraction,
        device: a.device.as_deref().map(device).transpose()?,
        layout: layout(&a.layout)?,
    };
    let model = HybridModel::new(config.clone(), seed)?;
    let (best, history) = train(&model, &data, &cfg)?;
    let (loss, accuracy) = evaluate_loss(&best, &data, &cfg.execution()?)?;

    save_model(&best, out.dir.join("model.json"))?;
    out.write("history.csv", &history.to_csv())?;
    let config_json = json!({
        "data": a.data.data,
        "model": config,
        "phase": phase.to_string(),
        "device": cfg.device.as_ref().map(|d| d.name.clone()),
        "layout": a.layout,
        "optimizer": optimizer,
        "epochs": a.epochs,
        "batch_size": a.batch_size,
        "patience": a.patience,
        "validation_fraction": a.validation_fraction,
    });
    let body = json!({
        "n_params": best.n_params(),
        "epochs_run": history.epochs.len(),
        "best_epoch": history.best_epoch,
        "loss": loss,
        "accuracy": accuracy,
        "checksum": weights_checksum(&best),
    });
    let rep = report("train", config_json, json!({ "seed": seed }), body);
    out.write_json("train_report.json", &rep)?;
    out.say(&format!(
        "accuracy {accuracy:.4}, loss {loss:.6}, best epoch {}",
        history.best_epoch
    ));
    Ok(())
}

/// Pairs each device backend with a device: one shared, or one each in order.
fn backend_configs(a: &EvalArgs, seed: u64) -> Result<Vec<(String, ExecutionConfig)>> {
    let needing = a.backends.iter().filter(|b| **b != BackendArg::Noiseless).count();
    if needing > 0 && a.devices.is_empty() {
        return usage("device backends need --device");
    }
    if needing > 1 && a.devices.len() != 1 && a.devices.len() != needing {
        return usage(format!(
            "{needing} device backends but {} --device values",
            a.devices.len()
        ));
    }
    let mut devices = a.devices.iter().cycle();
    let mut out = Vec::new();
    for b in &a.backends {
        let (tag, exec) = match b {
            BackendArg::Noiseless => ("noiseless".to_string(), ExecutionConfig::noiseless()),
            BackendArg::Topology | BackendArg::Noisy => {
                let name = devices.next().expect("checked above");
                let d = device(name)?;
                let (kind, exec) = if *b == BackendArg::Noisy {
                    ("noisy", ExecutionConfig::noisy(d.clone()))
                } else {
                    ("topology", ExecutionConfig::topology(d.clone()))
                };
                (format!("{kind}:{}", d.name), exec)
            }
        };
        out.push(match a.shots {
            Some(n) => (format!("{tag}@{n}"), exec.with_shots(n, seed)),
            None => (tag, exec),
        });
    }
    Ok(out)
}

fn eval(a: &EvalArgs, seed: u64, out: &Output) -> Result<()> {
    if a.shots == Some(0) {
        return usage("--shots must be at least 1");
    }
    let model = load_model(&a.model).with_context(|| format!("loading {}", a.model.display()))?;
    let mut data = load_data(&a.data)?;
    if a.flip_labels {
        data = flip_labels(&data);
    }
    let mut reports = Vec::new();
    for (tag, exec) in backend_configs(a, seed)? {
        let ys = model.evaluator(&exec)?.forward_batch(&data.features)?;
        let records = ys
            .iter()
            .zip(&data.labels)
            .map(|(&y, &l)| EvaluationRecord::new(y, l, tag.clone()))
            .collect::<noisyqml::Result<Vec<_>>>()?;
        reports.push(metrics_report(&records)?);
    }
    let csv = reports_to_csv(&reports)?;
    out.write("metrics.csv", &csv)?;
    let config = json!({
        "model": a.model,
        "model_checksum": weights_checksum(&model),
        "data": a.data.data,
        "backends": reports.iter().map(|r| r.backend.clone()).collect::<Vec<_>>(),
        "shots": a.shots,
        "flip_labels": a.flip_labels,
    });
    let rep = report(
        "eval",
        config,
        json!({ "shot_seed": seed }),
        json!({ "reports": reports }),
    );
    out.write_json("eval_report.json", &rep)?;
    out.say(csv.trim_end());
    Ok(())
}

fn transpile_cmd(a: &TranspileArgs, seed: u64, out: &Output) -> Result<()> {
    let (source, circuit) = match (&a.model, &a.circuit) {
        (Some(p), _) => (json!({ "model": p }), load_model(p)?.ansatz_circuit()?),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            (json!({ "circuit": p }), Circuit::from_text(&text)?)
        }
        (None, None) => {
            // Weights do not change the gate structure, only the angles.
            let cfg = ModelConfig::default();
            (
                json!({ "default_model": cfg }),
                HybridModel::new(cfg, seed)?.ansatz_circuit()?,
            )
        }
    };
    let dev = device(&a.device)?;
    let t = transpile(&circuit, &dev, layout(&a.layout)?.as_ref(), seed)?;
    let meta = circuit_metadata(&t.circuit);
    out.write("circuit.txt", &t.circuit.to_text())?;
    match t.circuit.to_qasm3() {
        Ok(q) => out.write("circuit.qasm", &q)?,
        Err(e) => log::warn!("no OpenQASM output for this device: {e}"),
    }
    out.write_json("metadata.json", &serde_json::to_value(&meta)?)?;
    let config = json!({ "source": source, "device": dev.name, "layout": a.layout });
    let body = json!({
        "swaps": t.swaps,
        "physical_qubits": t.physical,
        "initial_layout": t.physical_initial_layout(),
        "final_layout": t.physical_final_layout(),
        "metadata": meta,
    });
    out.write_json(
        "transpile_report.json",
        &report("transpile", config, json!({ "route_seed": seed }), body),
    )?;
    out.say(&serde_json::to_string(&meta)?);
    Ok(())
}

fn cost(a: &CostArgs, out: &Output) -> Result<()> {
    for (name, v) in [
        ("--minutes", a.minutes),
        ("--per-sample-s", a.per_sample_seconds),
        ("--rate", Some(a.rate)),
    ] {
        if v.is_some_and(|x| !(x >= 0.0 && x.is_finite())) {
            return usage(format!("{name} must be a non-negative number"));
        }
    }
    if a.total == Some(0) {
        return usage("--total must be positive");
    }
    let processed = a.processed.or(a.samples);
    let per_sample = match (a.samples, a.per_sample_seconds) {
        (Some(n), Some(s)) => {
            let params = CostParams {
                rate: a.rate,
                per_sample_seconds: s,
                shots_per_sample: None,
            };
            Some(extrapolate_cost(n, &params, None)?)
        }
        (None, None) => None,
        _ => return usage("--samples and --per-sample-s go together"),
    };
    let measured = a.minutes.map(|m| qpu_cost(m, a.rate).map(|usd| (m, usd))).transpose()?;
    let fraction = match (processed, a.total) {
        (Some(n), Some(t)) => Some(n as f64 / t as f64),
        _ => None,
    };
    let (minutes, usd) = match (measured, per_sample) {
        (Some(m), _) => m,
        (None, Some(e)) => (e.minutes, e.usd),
        (None, None) => return usage("give --minutes, or --samples with --per-sample-s"),
    };
    let mut body = json!({ "minutes": minutes, "usd": usd, "fraction": fraction });
    let mut notes = Vec::new();
    if let (Some((m, _)), Some(e)) = (measured, per_sample) {
        body["per_sample_estimate"] = json!({ "samples": a.samples, "minutes": e.minutes, "usd": e.usd });
        let (Some(p), Some(n), Some(s)) = (processed, a.samples, a.per_sample_seconds) else {
            unreachable!("both estimates imply samples and per-sample time")
        };
        // Same sample count, priced at the measured time per sample.
        let scaled = m / p as f64 * n as f64;
        body["total_time_estimate"] = json!({ "samples": n, "minutes": scaled, "usd": qpu_cost(scaled, a.rate)? });
        notes = consistency_notes(m, p, s);
    }
    body["notes"] = json!(notes);
    let config = json!({
        "minutes": a.minutes,
        "processed": a.processed,
        "samples": a.samples,
        "per_sample_seconds": a.per_sample_seconds,
        "rate": a.rate,
        "total": a.total,
    });
    let rep = report("cost", config, json!({}), body);
    out.write_json("cost.json", &rep)?;
    out.say(&serde_json::to_string_pretty(&rep)?);
    for n in &notes {
        log::warn!("{n}");
    }
    Ok(())
}
