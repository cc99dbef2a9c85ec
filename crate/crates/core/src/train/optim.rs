use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adam with bias-corrected moment estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(lr: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        Self {
            lr,
            beta1,
            beta2,
            eps,
            m: Vec::new(),
            v: Vec::new(),
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        debug_assert_eq!(params.len(), grad.len());
        if self.m.len() != params.len() {
            self.m = vec![0.0; params.len()];
            self.v = vec![0.0; params.len()];
        }
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            params[i] -= self.lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + self.eps);
        }
    }
}

impl Default for Adam {
    fn default() -> Self {
        Self::new(0.01, 0.9, 0.999, 1e-8)
    }
}

/// Simultaneous-perturbation stochastic approximation with gains
/// `a_k = a / (k + A)^α` and `c_k = c / k^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spsa {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Stability constant `A`.
    #[serde(default)]
    pub stability: f64,
}

impl Default for Spsa {
    fn default() -> Self {
        Self {
            a: 0.1,
            c: 0.1,
            alpha: 0.602,
            gamma: 0.101,
            stability: 0.0,
        }
    }
}

impl Spsa {
    /// `(a_k, c_k)` for iteration `k ≥ 1`.
    pub fn gains(&self, k: u64) -> (f64, f64) {
        let k = k as f64;
        (
            self.a / (k + self.stability).powf(self.alpha),
            self.c / k.powf(self.gamma),
        )
    }

    /// Rademacher vector: entries `±1` with equal probability.
    pub fn perturbation<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
        (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect()
    }

    /// One update of `params` from two evaluations of `f`.
    pub fn step<R, F>(&self, params: &mut [f64], k: u64, rng: &mut R, mut f: F) -> Result<()>
    where
        R: Rng,
        F: FnMut(&[f64]) -> Result<f64>,
    {
        if k == 0 {
            return Err(Error::Config("SPSA iterations start at 1".into()));
        }
        let (ak, ck) = self.gains(k);
        let delta = Self::perturbation(rng, params.len());
        let probe = |s: f64| {
            params
                .iter()
                .zip(&delta)
                .map(|(p, d)| p + s * ck * d)
                .collect::<Vec<f64>>()
        };
        let plus = f(&probe(1.0))?;
        let minus = f(&probe(-1.0))?;
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::Numerical(format!(
                "SPSA evaluation at iteration {k} is not finite"
            )));
        }
        let diff = (plus - minus) / (2.0 * ck);
        for (p, d) in params.iter_mut().zip(&delta) {
            // 1/Δ_i = Δ_i for Δ_i = ±1
            *p -= ak * diff * d;
        }
        Ok(())
    }
}
