//! The three loss functions and their analytic gradients.
//!
//! Values follow the written forms: the initialization loss carries a 1/N,
//! the two stage-two losses are plain sums over the batch. Gradients are
//! computed by backpropagation through softmax, the affine layers, and the
//! GELU; the feature layer has no parameters.

use crate::error::{Error, Result};
use crate::snn::{
    delta_features, gelu, gelu_prime, ModelMeta, SnnModel, StageTag, N_FEATURES, N_HIDDEN,
    N_OUTPUTS,
};
use crate::weno::WeightPair;

use super::{LossConfig, LossKind, TrainSample};

/// Parameter-shaped container used for gradients and optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTensors {
    pub w0: [[f64; N_FEATURES]; N_HIDDEN],
    pub b0: [f64; N_HIDDEN],
    pub w1: [[f64; N_HIDDEN]; N_OUTPUTS],
    pub b1: [f64; N_OUTPUTS],
}

impl ParamTensors {
    pub fn zeros() -> Self {
        ParamTensors {
            w0: [[0.0; N_FEATURES]; N_HIDDEN],
            b0: [0.0; N_HIDDEN],
            w1: [[0.0; N_HIDDEN]; N_OUTPUTS],
            b1: [0.0; N_OUTPUTS],
        }
    }

    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.w0
            .iter()
            .flatten()
            .chain(self.b0.iter())
            .chain(self.w1.iter().flatten())
            .chain(self.b1.iter())
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w0
            .iter_mut()
            .flatten()
            .chain(self.b0.iter_mut())
            .chain(self.w1.iter_mut().flatten())
            .chain(self.b1.iter_mut())
    }

    pub fn norm(&self) -> f64 {
        self.params().map(|g| g * g).sum::<f64>().sqrt()
    }
}

fn check_positive_pair(w: &WeightPair, what: &str) -> Result<()> {
    if w.w0 > 0.0 && w.w1 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} has a non-positive component ({}, {})",
            w.w0, w.w1
        )))
    }
}

/// Initialization loss: mean squared difference of log(2 w0) and log(w1).
pub fn loss_l0(predictions: &[WeightPair]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::InvalidInput("empty prediction batch".into()));
    }
    let mut sum = 0.0;
    for w in predictions {
        check_positive_pair(w, "prediction")?;
        let t = (2.0 * w.w0).ln() - w.w1.ln();
        sum += t * t;
    }
    Ok(sum / predictions.len() as f64)
}

/// MSE stage-two loss: a JS-matching part weighted by (1 - lambda) plus a
/// linear-weights part weighted by lambda, summed over the batch.
pub fn loss_l1(batch: &[TrainSample], predictions: &[WeightPair]) -> Result<f64> {
    if batch.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: batch.len(),
            right: predictions.len(),
        });
    }
    let mut sum = 0.0;
    for (s, w) in batch.iter().zip(predictions) {
        let js = (w.w0 - s.label.w0).powi(2) + (w.w1 - s.label.w1).powi(2);
        let ln = (2.0 * w.w0 - w.w1).powi(2);
        sum += (1.0 - s.lambda) * js + s.lambda * ln;
    }
    Ok(sum)
}

/// MSLE stage-two loss with the linear part scaled by `d`, summed over the
/// batch. Returns the value and the number of labels floored at 1e-300.
pub fn loss_l2_with_stats(
    batch: &[TrainSample],
    predictions: &[WeightPair],
    d: f64,
) -> Result<(f64, usize)> {
    if batch.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: batch.len(),
            right: predictions.len(),
        });
    }
    let mut sum = 0.0;
    let mut floored = 0usize;
    for (s, w) in batch.iter().zip(predictions) {
        check_positive_pair(w, "prediction")?;
        if s.label.w0 < 1e-300 || s.label.w1 < 1e-300 {
            floored += 1;
        }
        let y0 = s.label.w0.max(1e-300);
        let y1 = s.label.w1.max(1e-300);
        let js = (w.w0.ln() - y0.ln()).powi(2) + (w.w1.ln() - y1.ln()).powi(2);
        let t = (2.0 * w.w0).ln() - w.w1.ln();
        sum += js + d * t * t;
    }
    Ok((sum, floored))
}

/// MSLE stage-two loss; see [`loss_l2_with_stats`].
pub fn loss_l2(batch: &[TrainSample], predictions: &[WeightPair], d: f64) -> Result<f64> {
    loss_l2_with_stats(batch, predictions, d).map(|(v, _)| v)
}

/// Forward pass retaining intermediates, in log space for the output.
struct Trace {
    pre: [f64; N_HIDDEN],
    h: [f64; N_HIDDEN],
    w: [f64; N_OUTPUTS],
    logw: [f64; N_OUTPUTS],
}

fn trace_forward(model: &SnnModel, x: &[f64; N_FEATURES]) -> Trace {
    let mut pre = model.b0;
    for (j, row) in model.w0.iter().enumerate() {
        for (i, wji) in row.iter().enumerate() {
            pre[j] += wji * x[i];
        }
    }
    let mut h = [0.0; N_HIDDEN];
    for j in 0..N_HIDDEN {
        h[j] = gelu(pre[j]);
    }
    let mut z = model.b1;
    for (k, row) in model.w1.iter().enumerate() {
        for (j, wkj) in row.iter().enumerate() {
            z[k] += wkj * h[j];
        }
    }
    let m = z[0].max(z[1]);
    let e0 = (z[0] - m).exp();
    let e1 = (z[1] - m).exp();
    let s = e0 + e1;
    let lse = m + s.ln();
    Trace {
        pre,
        h,
        w: [e0 / s, e1 / s],
        logw: [z[0] - lse, z[1] - lse],
    }
}

/// Loss and gradient over a batch with precomputed feature vectors.
///
/// This is the training hot path; features are invariant across epochs, so
/// callers compute them once.
pub(crate) fn loss_and_gradient_cached(
    model: &SnnModel,
    batch: &[TrainSample],
    features: &[[f64; N_FEATURES]],
    loss: &LossConfig,
) -> Result<(f64, ParamTensors)> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty training batch".into()));
    }
    debug_assert_eq!(batch.len(), features.len());
    let ln2 = std::f64::consts::LN_2;
    let n = batch.len() as f64;

    let mut grad = ParamTensors::zeros();
    let mut value = 0.0;

    for (sample, x) in batch.iter().zip(features) {
        let tr = trace_forward(model, x);
        let mut dz = [0.0; N_OUTPUTS];
        match loss.kind {
            LossKind::L0 => {
                let t = ln2 + tr.logw[0] - tr.logw[1];
                value += t * t / n;
                dz[0] = 2.0 * t / n;
                dz[1] = -2.0 * t / n;
            }
            LossKind::L1 => {
                let lam = sample.lambda;
                let (y0, y1) = (sample.label.w0, sample.label.w1);
                let (w0, w1) = (tr.w[0], tr.w[1]);
                let ln_term = 2.0 * w0 - w1;
                value += (1.0 - lam) * ((w0 - y0).powi(2) + (w1 - y1).powi(2))
                    + lam * ln_term * ln_term;
                let dw0 = 2.0 * (1.0 - lam) * (w0 - y0) + 4.0 * lam * ln_term;
                let dw1 = 2.0 * (1.0 - lam) * (w1 - y1) - 2.0 * lam * ln_term;
                // softmax jacobian: dw_k/dz_j = w_k (delta_kj - w_j)
                dz[0] = dw0 * w0 * (1.0 - w0) + dw1 * w1 * (0.0 - w0);
                dz[1] = dw0 * w0 * (0.0 - w1) + dw1 * w1 * (1.0 - w1);
            }
            LossKind::L2 => {
                let y0 = sample.label.w0.max(1e-300).ln();
                let y1 = sample.label.w1.max(1e-300).ln();
                let a0 = tr.logw[0] - y0;
                let a1 = tr.logw[1] - y1;
                let t = ln2 + tr.logw[0] - tr.logw[1];
                value += a0 * a0 + a1 * a1 + loss.d * t * t;
                // d logw_k / dz_j = delta_kj - w_j
                dz[0] = 2.0 * (a0 * (1.0 - tr.w[0]) + a1 * (0.0 - tr.w[0])) + 2.0 * loss.d * t;
                dz[1] = 2.0 * (a0 * (0.0 - tr.w[1]) + a1 * (1.0 - tr.w[1])) - 2.0 * loss.d * t;
            }
        }

        let mut dh = [0.0; N_HIDDEN];
        for k in 0..N_OUTPUTS {
            grad.b1[k] += dz[k];
            for j in 0..N_HIDDEN {
                grad.w1[k][j] += dz[k] * tr.h[j];
                dh[j] += dz[k] * model.w1[k][j];
            }
        }
        for j in 0..N_HIDDEN {
            let dpre = dh[j] * gelu_prime(tr.pre[j]);
            grad.b0[j] += dpre;
            for i in 0..N_FEATURES {
                grad.w0[j][i] += dpre * x[i];
            }
        }
    }

    Ok((value, grad))
}

/// Loss value and analytic gradient of the selected loss over a batch.
pub fn loss_and_gradient(
    model: &SnnModel,
    batch: &[TrainSample],
    loss: &LossConfig,
) -> Result<(f64, ParamTensors)> {
    let features: Vec<[f64; N_FEATURES]> = batch
        .iter()
        .map(|s| delta_features(&s.stencil).0)
        .collect();
    loss_and_gradient_cached(model, batch, &features, loss)
}

/// Analytic gradient of the selected loss over a batch.
pub fn gradients(model: &SnnModel, batch: &[TrainSample], loss: &LossConfig) -> Result<ParamTensors> {
    loss_and_gradient(model, batch, loss).map(|(_, g)| g)
}

/// Evaluates the selected loss through the public loss functions; used as
/// the independent route of the finite-difference gradient checks.
pub fn loss_value(model: &SnnModel, batch: &[TrainSample], loss: &LossConfig) -> Result<f64> {
    let predictions: Vec<WeightPair> = batch
        .iter()
        .map(|s| crate::snn::forward(&s.stencil, model))
        .collect();
    match loss.kind {
        LossKind::L0 => loss_l0(&predictions),
        LossKind::L1 => loss_l1(batch, &predictions),
        LossKind::L2 => loss_l2(batch, &predictions, loss.d),
    }
}

#[allow(dead_code)]
fn unused_meta() -> ModelMeta {
    ModelMeta {
        stage: StageTag::Init,
        seed: 0,
        loss_param: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno::Stencil;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn wp(w0: f64, w1: f64) -> WeightPair {
        WeightPair::new(w0, w1).unwrap()
    }

    fn sample(stencil: (f64, f64, f64), label: (f64, f64), lambda: f64) -> TrainSample {
        TrainSample {
            stencil: Stencil::new(stencil.0, stencil.1, stencil.2).unwrap(),
            label: wp(label.0, label.1),
            lambda,
        }
    }

    #[test]
    fn loss_l0_examples() {
        let third = 1.0 / 3.0;
        assert_eq!(loss_l0(&[wp(third, 2.0 * third)]).unwrap(), 0.0);
        // frozen: (ln 2)^2 and its halved two-sample mean
        let v = loss_l0(&[wp(0.5, 0.5)]).unwrap();
        assert!((v - 0.48045301391820142467).abs() < 1e-15);
        let v = loss_l0(&[wp(third, 2.0 * third), wp(0.5, 0.5)]).unwrap();
        assert!((v - 0.24022650695910071233).abs() < 1e-15);
        assert!(loss_l0(&[]).is_err());
        assert!(loss_l0(&[WeightPair { w0: 0.0, w1: 1.0 }]).is_err());
    }

    #[test]
    fn loss_l1_examples() {
        let third = 1.0 / 3.0;
        // predictions equal labels, all lambda zero
        let batch = vec![
            sample((1.0, 2.0, 3.0), (0.25, 0.75), 0.0),
            sample((0.0, 0.0, 0.0), (third, 2.0 * third), 0.0),
        ];
        let preds = vec![wp(0.25, 0.75), wp(third, 2.0 * third)];
        assert_eq!(loss_l1(&batch, &preds).unwrap(), 0.0);

        // linear predictions, all lambda one
        let batch = vec![sample((0.0, 0.0, 0.0), (0.9, 0.1), 1.0)];
        let preds = vec![wp(third, 2.0 * third)];
        assert!(loss_l1(&batch, &preds).unwrap().abs() < 1e-30);

        // frozen hand evaluation
        let batch = vec![sample((0.0, 0.0, 0.0), (third, 2.0 * third), 0.5)];
        let preds = vec![wp(0.5, 0.5)];
        let v = loss_l1(&batch, &preds).unwrap();
        assert!((v - 0.15277777777777777778).abs() < 1e-15);

        assert!(loss_l1(&batch, &[]).is_err());
    }

    #[test]
    fn loss_l2_examples() {
        let third = 1.0 / 3.0;
        let batch = vec![sample((0.0, 0.0, 0.0), (third, 2.0 * third), 0.0)];
        let preds = vec![wp(third, 2.0 * third)];
        assert_eq!(loss_l2(&batch, &preds, 2.5).unwrap(), 0.0);

        // JS part zero, linear part (ln2)^2 scaled by D
        let batch = vec![sample((0.0, 0.0, 0.0), (0.5, 0.5), 0.0)];
        let preds = vec![wp(0.5, 0.5)];
        let v = loss_l2(&batch, &preds, 2.5).unwrap();
        assert!((v - 1.2011325347955035617).abs() < 1e-14);

        // D = 0 keeps only the log-matching part
        let batch = vec![sample((0.0, 0.0, 0.0), (third, 2.0 * third), 0.0)];
        let preds = vec![wp(0.5, 0.5)];
        let v = loss_l2(&batch, &preds, 0.0).unwrap();
        assert!((v - 0.24716292870331716045).abs() < 1e-14);
    }

    #[test]
    fn loss_l2_floors_zero_labels() {
        let mut s = sample((0.0, 0.0, 0.0), (0.5, 0.5), 0.0);
        s.label = WeightPair { w0: 0.0, w1: 1.0 };
        let (v, floored) = loss_l2_with_stats(&[s], &[wp(0.5, 0.5)], 0.0).unwrap();
        assert_eq!(floored, 1);
        assert!(v.is_finite());
    }

    #[test]
    fn gradient_zero_at_exact_minimum() {
        let model = SnnModel::zeros(super::unused_meta());
        // zero model predicts (0.5, 0.5); labels equal the prediction
        let batch = vec![sample((1.0, 2.0, 0.0), (0.5, 0.5), 0.0); 4];
        let g = gradients(&model, &batch, &LossConfig { kind: LossKind::L1, c: 35.0, d: 2.5 })
            .unwrap();
        assert!(g.norm() <= 1e-10, "norm = {}", g.norm());
    }

    #[test]
    fn duplicated_batch_doubles_sum_form_gradients() {
        let model = crate::training::init_model(5);
        let batch = vec![
            sample((1.0, 1.0, 0.0), (0.9, 0.1), 0.25),
            sample((0.2, 0.4, 0.6), (1.0 / 3.0, 2.0 / 3.0), 0.8),
        ];
        let mut doubled = batch.clone();
        doubled.extend(batch.iter().cloned());
        for kind in [LossKind::L1, LossKind::L2] {
            let cfg = LossConfig { kind, c: 35.0, d: 2.5 };
            let g1 = gradients(&model, &batch, &cfg).unwrap();
            let g2 = gradients(&model, &doubled, &cfg).unwrap();
            for (a, b) in g1.params().zip(g2.params()) {
                assert!((2.0 * a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..20 {
            let kind = match trial % 3 {
                0 => LossKind::L0,
                1 => LossKind::L1,
                _ => LossKind::L2,
            };
            let cfg = LossConfig { kind, c: 35.0, d: 2.5 };
            let model = crate::training::init_model(1000 + trial);

            let batch: Vec<TrainSample> = (0..8)
                .map(|_| {
                    let st = Stencil::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                    .unwrap();
                    let label = crate::weno::js_weights(&st, &crate::weno::KernelConfig::default());
                    TrainSample {
                        stencil: st,
                        label,
                        lambda: super::super::lambda_smoothness(&label, cfg.c),
                    }
                })
                .collect();

            let analytic = gradients(&model, &batch, &cfg).unwrap();
            let analytic: Vec<f64> = analytic.params().copied().collect();

            let step = 1e-6;
            let mut flat = model.flat();
            for (idx, &g) in analytic.iter().enumerate() {
                let orig = flat[idx];
                flat[idx] = orig + step;
                let up = loss_value(&model_with(&model, &flat), &batch, &cfg).unwrap();
                flat[idx] = orig - step;
                let dn = loss_value(&model_with(&model, &flat), &batch, &cfg).unwrap();
                flat[idx] = orig;
                let fd = (up - dn) / (2.0 * step);
                let err = if g.abs() < 1e-8 {
                    (fd - g).abs()
                } else {
                    ((fd - g) / g).abs()
                };
                assert!(
                    err < 1e-5,
                    "trial {trial} {:?} param {idx}: analytic {g:e} fd {fd:e}",
                    kind
                );
            }
        }
    }

    fn model_with(base: &SnnModel, flat: &[f64]) -> SnnModel {
        let mut m = base.clone();
        for (p, v) in m.params_mut().zip(flat) {
            *p = *v;
        }
        m
    }
}
