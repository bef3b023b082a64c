use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adam with bias correction. The normalized update is clamped to ±1 per
/// coordinate, so a single step never moves a parameter by more than
/// `lr * (1 + eps correction)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(n_params: usize, lr: f64) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            step: 0,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One update in place. Rejects non-finite gradients before touching any
    /// state, so a failed call leaves parameters and moments unchanged.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::Dimension(format!(
                "opt_step: {} params / {} grads vs state size {}",
                params.len(),
                grads.len(),
                self.m.len()
            )));
        }
        if !grads.iter().all(|g| g.is_finite()) {
            return Err(Error::NonFinite("opt_step: non-finite gradient".into()));
        }
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            let u = (m_hat / (v_hat.sqrt() + self.eps)).clamp(-1.0, 1.0);
            params[i] -= self.lr * u;
        }
        Ok(())
    }
}
