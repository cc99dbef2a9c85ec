use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::config::ModelConfig;
use crate::ansatz::ansatz_circuit;
use crate::device::{noise_schedule, transpile, DeviceSpec, Layout};
use crate::error::{Error, Result};
use crate::sim::{embedding_basis, Confusion, Observable, Program};

/// Where the quantum layer runs.
#[derive(Debug, Clone)]
pub enum Backend {
    /// The ansatz as written, no device constraints.
    Noiseless,
    /// Routed and lowered onto `device`; with `noisy` the device noise model
    /// is attached as well.
    Device {
        device: Arc<DeviceSpec>,
        layout: Option<Layout>,
        noisy: bool,
    },
}

/// Shot sampling of the measured qubit instead of exact probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shots {
    pub count: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct ExecutionConfig {
    pub backend: Backend,
    pub shots: Option<Shots>,
    /// Tie-breaking seed of the router.
    pub route_seed: u64,
}

impl ExecutionConfig {
    pub fn noiseless() -> Self {
        Self {
            backend: Backend::Noiseless,
            shots: None,
            route_seed: 0,
        }
    }

    pub fn topology(device: Arc<DeviceSpec>) -> Self {
        Self {
            backend: Backend::Device {
                device,
                layout: None,
                noisy: false,
            },
            shots: None,
            route_seed: 0,
        }
    }

    pub fn noisy(device: Arc<DeviceSpec>) -> Self {
        Self {
            backend: Backend::Device {
                device,
                layout: None,
                noisy: true,
            },
            shots: None,
            route_seed: 0,
        }
    }

    pub fn with_layout(mut self, l: Layout) -> Self {
        if let Backend::Device { layout, .. } = &mut self.backend {
            *layout = Some(l);
        }
        self
    }

    pub fn with_shots(mut self, count: u64, seed: u64) -> Self {
        self.shots = Some(Shots { count, seed });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.shots {
            if s.count == 0 {
                return Err(Error::ZeroShots);
            }
        }
        Ok(())
    }
}

/// The quantum layer for one weight vector, reduced to an observable on the
/// encoded state: `m(ψ) = ⟨ψ|O|ψ⟩` with `O = Φ†(Z)` restricted to the
/// logical qubits.
#[derive(Debug, Clone)]
pub struct QuantumLayer {
    observable: Observable,
    real: Vec<f64>,
    readout: Confusion,
}

impl QuantumLayer {
    pub fn prepare(config: &ModelConfig, weights: &[f64], exec: &ExecutionConfig) -> Result<Self> {
        let n = config.n_qubits;
        let circuit = ansatz_circuit(config.ansatz, n, config.n_layers, weights)?;
        let (observable, readout) = match &exec.backend {
            Backend::Noiseless => {
                let program = Program::compile(&circuit)?;
                (program.heisenberg_z(config.measured_qubit)?, Confusion::identity())
            }
            Backend::Device { device, layout, noisy } => {
                let t = transpile(&circuit, device, layout.as_ref(), exec.route_seed)?;
                let measured = t.final_layout.physical(config.measured_qubit);
                let run = if *noisy {
                    noise_schedule(&t.circuit, device, &t.device_layout(), &[measured])?
                } else {
                    t.circuit.clone()
                };
                let readout = run
                    .readout()
                    .get(&measured)
                    .copied()
                    .unwrap_or_else(Confusion::identity);
                let program = Program::compile(&run)?;
                let wide = program.heisenberg_z(measured)?;
                let basis = embedding_basis(t.initial_layout.as_slice(), t.circuit.n_qubits());
                (wide.restrict(&basis, n), readout)
            }
        };
        let real = observable.real_part();
        Ok(Self {
            observable,
            real,
            readout,
        })
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn readout(&self) -> Confusion {
        self.readout
    }

    pub fn expectation(&self, psi: &[C64]) -> f64 {
        self.observable.expectation(psi)
    }

    /// `⟨u|O|u⟩ / ⟨u|u⟩` for a real, not necessarily normalised `u`.
    pub fn expectation_real(&self, u: &[f64]) -> f64 {
        let d = u.len();
        let mut q = 0.0;
        for (i, row) in self.real.chunks_exact(d).enumerate() {
            q += u[i] * row.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
        }
        q / u.iter().map(|x| x * x).sum::<f64>()
    }

    /// `Re(O) u`, the building block of input derivatives.
    pub(crate) fn real_times(&self, u: &[f64]) -> Vec<f64> {
        self.real
            .chunks_exact(u.len())
            .map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub(crate) fn real_diag(&self, i: usize, d: usize) -> f64 {
        self.real[i * d + i]
    }

    /// Probability of reading 1, after readout confusion.
    pub fn p_one(&self, m: f64) -> f64 {
        let p1 = ((1.0 - m) / 2.0).clamp(0.0, 1.0);
        self.readout.apply_probs([1.0 - p1, p1])[1]
    }

    /// Sigmoid input `s = 2·P(1) − 1`.
    pub fn logit(&self, m: f64) -> f64 {
        2.0 * self.p_one(m) - 1.0
    }

    /// `ds/dm`, constant because the readout map is affine.
    pub fn dlogit_dm(&self) -> f64 {
        let c = self.readout.matrix();
        c[0][1] - c[1][1]
    }
}
