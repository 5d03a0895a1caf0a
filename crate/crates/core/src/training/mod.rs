//! Two-stage supervised training of the network weighting function.
//!
//! Stage one fits the linear weights on stencils drawn from smooth functions;
//! stage two fits the JS labels of a piecewise initial condition, with a
//! linear-weights term that reduces dissipation. The whole pipeline is a pure
//! function of the seed and configuration.

pub mod adam;
pub mod dataset;
pub mod loss;

pub use adam::{adam_step, AdamState};
pub use dataset::{gen_stage1_dataset, gen_stage2_dataset, lambda_smoothness, TrainSample};
pub use loss::{
    gradients, loss_and_gradient, loss_l0, loss_l1, loss_l2, loss_l2_with_stats, ParamTensors,
};

use crate::error::{Error, Result};
use crate::snn::{delta_features, ModelMeta, SnnModel, StageTag, N_FEATURES};
use crate::weno::KernelConfig;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Which loss drives stage two (L0 stops after the initialization stage).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    L0,
    L1,
    L2,
}

/// Loss selection and its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LossConfig {
    pub kind: LossKind,
    /// Smoothness-indicator scale of the MSE loss.
    #[serde(default = "LossConfig::default_c")]
    pub c: f64,
    /// Linear-part scale of the MSLE loss.
    #[serde(default = "LossConfig::default_d")]
    pub d: f64,
}

impl LossConfig {
    fn default_c() -> f64 {
        35.0
    }

    fn default_d() -> f64 {
        2.5
    }

    pub fn new(kind: LossKind) -> Self {
        LossConfig {
            kind,
            c: Self::default_c(),
            d: Self::default_d(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c <= 0.0 {
            return Err(Error::Config(format!("loss parameter C must be > 0, got {}", self.c)));
        }
        if self.d < 0.0 {
            return Err(Error::Config(format!("loss parameter D must be >= 0, got {}", self.d)));
        }
        Ok(())
    }
}

/// Optimizer and schedule settings for both stages.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_eps: f64,
    pub stage1_epochs: usize,
    pub stage2_epochs: usize,
    pub stage1_samples: usize,
    /// 0 means full batch.
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            weight_decay: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            adam_eps: 1e-8,
            stage1_epochs: 500,
            stage2_epochs: 5000,
            stage1_samples: 20_000,
            batch_size: 0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::Config("learning rate must be > 0".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Config("adam betas must lie in [0, 1)".into()));
        }
        if self.adam_eps <= 0.0 {
            return Err(Error::Config("adam eps must be > 0".into()));
        }
        Ok(())
    }
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEntry {
    pub stage: u8,
    pub epoch: usize,
    pub loss: f64,
}

/// Trained model plus the per-epoch loss log.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub model: SnnModel,
    pub log: Vec<LogEntry>,
}

/// Seeded uniform initialization, +-sqrt(1/fan_in) per layer.
pub fn init_model(seed: u64) -> SnnModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = SnnModel::zeros(ModelMeta {
        stage: StageTag::Init,
        seed,
        loss_param: 0.0,
    });
    let bound0 = (1.0 / N_FEATURES as f64).sqrt();
    for v in m.w0.iter_mut().flatten() {
        *v = rng.gen_range(-bound0..bound0);
    }
    for v in m.b0.iter_mut() {
        *v = rng.gen_range(-bound0..bound0);
    }
    let bound1 = (1.0 / crate::snn::N_HIDDEN as f64).sqrt();
    for v in m.w1.iter_mut().flatten() {
        *v = rng.gen_range(-bound1..bound1);
    }
    for v in m.b1.iter_mut() {
        *v = rng.gen_range(-bound1..bound1);
    }
    m
}

fn run_stage(
    model: &mut SnnModel,
    stage: u8,
    epochs: usize,
    batch: &[TrainSample],
    loss_cfg: &LossConfig,
    stage_loss: LossKind,
    cfg: &TrainConfig,
    log: &mut Vec<LogEntry>,
) -> Result<()> {
    let features: Vec<[f64; N_FEATURES]> = batch
        .iter()
        .map(|s| delta_features(&s.stencil).0)
        .collect();
    let mut state = AdamState::new();
    let chunk = if cfg.batch_size == 0 {
        batch.len()
    } else {
        cfg.batch_size.min(batch.len())
    };
    let stage_loss_cfg = LossConfig {
        kind: stage_loss,
        ..*loss_cfg
    };
    for epoch in 0..epochs {
        let mut epoch_loss = 0.0;
        let mut start = 0;
        while start < batch.len() {
            let end = (start + chunk).min(batch.len());
            let (value, grad) = loss::loss_and_gradient_cached(
                model,
                &batch[start..end],
                &features[start..end],
                &stage_loss_cfg,
            )?;
            epoch_loss += if stage_loss == LossKind::L0 {
                value * (end - start) as f64 / batch.len() as f64
            } else {
                value
            };
            adam_step(model, &grad, &mut state, cfg);
            start = end;
        }
        if !epoch_loss.is_finite() {
            return Err(Error::TrainingDiverged { stage, epoch });
        }
        log.push(LogEntry {
            stage,
            epoch,
            loss: epoch_loss,
        });
    }
    Ok(())
}

/// Runs the two training stages and returns the tagged model.
///
/// Stage one always minimizes the initialization loss on the smooth dataset;
/// stage two minimizes the selected loss on the piecewise dataset. A config
/// with `LossKind::L0` returns the initialization-stage model directly.
pub fn train(cfg: &TrainConfig, loss_cfg: &LossConfig) -> Result<TrainResult> {
    cfg.validate()?;
    loss_cfg.validate()?;

    let mut model = init_model(cfg.seed);
    let mut log = Vec::new();

    let stage1 = gen_stage1_dataset(cfg.seed, cfg.stage1_samples);
    let stage1: Vec<TrainSample> = stage1
        .into_iter()
        .map(|stencil| TrainSample {
            stencil,
            label: crate::weno::WeightPair::linear(),
            lambda: 0.0,
        })
        .collect();
    run_stage(
        &mut model, 1, cfg.stage1_epochs, &stage1, loss_cfg, LossKind::L0, cfg, &mut log,
    )?;

    match loss_cfg.kind {
        LossKind::L0 => {
            model.meta = ModelMeta {
                stage: StageTag::Init,
                seed: cfg.seed,
                loss_param: 0.0,
            };
        }
        kind => {
            let stage2 = gen_stage2_dataset(&KernelConfig::default(), loss_cfg);
            run_stage(
                &mut model, 2, cfg.stage2_epochs, &stage2, loss_cfg, kind, cfg, &mut log,
            )?;
            model.meta = ModelMeta {
                stage: if kind == LossKind::L1 {
                    StageTag::Snn1
                } else {
                    StageTag::Snn2
                },
                seed: cfg.seed,
                loss_param: if kind == LossKind::L1 {
                    loss_cfg.c
                } else {
                    loss_cfg.d
                },
            };
        }
    }

    Ok(TrainResult { model, log })
}
