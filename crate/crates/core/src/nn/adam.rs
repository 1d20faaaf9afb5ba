use ndarray::Zip;

use super::loss::Gradients;
use super::mlp::Mlp;
use crate::{Error, Result};

pub const BETA1: f64 = 0.9;
pub const BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;

/// Bias-corrected Adam moments for one network.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Gradients,
    v: Gradients,
    t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(model: &Mlp) -> Self {
        Self {
            m: Gradients::zeros_like(model),
            v: Gradients::zeros_like(model),
            t: 0,
            beta1: BETA1,
            beta2: BETA2,
            eps: EPSILON,
        }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One update `θ ← θ − lr · m̂ / (√v̂ + ε)`. Non-finite gradients are
    /// rejected before anything is modified.
    pub fn step(&mut self, model: &mut Mlp, grads: &Gradients, lr: f64) -> Result<()> {
        if !(lr > 0.0 && lr.is_finite()) {
            return Err(Error::InvalidArgument(format!("learning rate {lr}")));
        }
        if grads.w.len() != model.w.len()
            || grads.w.iter().zip(&model.w).any(|(g, w)| g.dim() != w.dim())
            || grads.b.iter().zip(&model.b).any(|(g, b)| g.dim() != b.dim())
        {
            return Err(Error::Dimension("gradient shape does not match the network".into()));
        }
        if !grads.is_finite() {
            return Err(Error::NonFinite("gradient".into()));
        }
        self.t += 1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let c1 = 1.0 - b1.powi(self.t as i32);
        let c2 = 1.0 - b2.powi(self.t as i32);
        let update = |p: &mut f64, m: &mut f64, v: &mut f64, &g: &f64| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
        };
        for i in 0..model.w.len() {
            Zip::from(&mut model.w[i])
                .and(&mut self.m.w[i])
                .and(&mut self.v.w[i])
                .and(&grads.w[i])
                .for_each(update);
            Zip::from(&mut model.b[i])
                .and(&mut self.m.b[i])
                .and(&mut self.v.b[i])
                .and(&grads.b[i])
                .for_each(update);
        }
        if !model.is_finite() {
            return Err(Error::NonFinite("parameters after Adam step".into()));
        }
        Ok(())
    }
}
