//! Bias-corrected Adam with decoupled weight decay.

use crate::snn::SnnModel;

use super::{ParamTensors, TrainConfig};

/// First/second-moment accumulators and the step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m: ParamTensors,
    pub v: ParamTensors,
    pub step: u64,
}

impl AdamState {
    pub fn new() -> Self {
        AdamState {
            m: ParamTensors::zeros(),
            v: ParamTensors::zeros(),
            step: 0,
        }
    }
}

impl Default for AdamState {
    fn default() -> Self {
        Self::new()
    }
}

/// One optimizer step. The decay term is decoupled: it scales the parameter
/// directly instead of entering the gradient, and both the gradient term and
/// the decay use the pre-update parameter value.
pub fn adam_step(model: &mut SnnModel, grad: &ParamTensors, state: &mut AdamState, cfg: &TrainConfig) {
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - cfg.beta1.powi(t);
    let bc2 = 1.0 - cfg.beta2.powi(t);
    for (((p, g), m), v) in model
        .params_mut()
        .zip(grad.params())
        .zip(state.m.params_mut())
        .zip(state.v.params_mut())
    {
        *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
        *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
        let mhat = *m / bc1;
        let vhat = *v / bc2;
        let old = *p;
        *p = old - cfg.learning_rate * (mhat / (vhat.sqrt() + cfg.adam_eps))
            - cfg.learning_rate * cfg.weight_decay * old;
    }
}
