//! Training datasets: smooth stencils for the initialization stage and the
//! piecewise initial condition with JS labels for the second stage.

use crate::problems::eval_train_ic;
use crate::weno::{js_weights, KernelConfig, Stencil, WeightPair};

use super::{LossConfig, LossKind};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A labeled stencil; `lambda` is attached for the MSE loss only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainSample {
    pub stencil: Stencil,
    pub label: WeightPair,
    pub lambda: f64,
}

/// Smoothness indicator of a labeled stencil, built from the JS weight ratio.
///
/// Returns one exactly when the two weights sit at the linear ratio and
/// decays exponentially as the ratio departs from it. Zero label components
/// are floored at 1e-300, which drives the result to underflow to zero.
pub fn lambda_smoothness(label: &WeightPair, c: f64) -> f64 {
    let w0 = label.w0.max(1e-300);
    let w1 = label.w1.max(1e-300);
    let r = (2.0 * w0 / w1).max(w1 / (2.0 * w0));
    (-(r - 1.0) / c).exp()
}

/// Samples one smooth stencil: three consecutive values of a smooth function.
pub(crate) fn gen_smooth_stencil(rng: &mut ChaCha8Rng, family: u8, h: f64) -> Stencil {
    let x0: f64 = rng.gen_range(-1.0..1.0);
    let eval: Box<dyn Fn(f64) -> f64> = match family {
        0 => {
            let c = rng.gen_range(-2.0..2.0);
            Box::new(move |_| c)
        }
        1 => {
            let degree = rng.gen_range(1..=4usize);
            let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Box::new(move |x| coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c))
        }
        2 => {
            let a = rng.gen_range(0.5..2.0);
            let k = rng.gen_range(0.5..10.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            Box::new(move |x| a * (k * x + phase).sin())
        }
        _ => {
            let a = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let b = rng.gen_range(-2.0..2.0);
            Box::new(move |x| a * (b * x).exp())
        }
    };
    Stencil {
        f0: eval(x0),
        f1: eval(x0 + h),
        f2: eval(x0 + 2.0 * h),
    }
}

/// Stage-one dataset: stencils from constants, polynomials, trigonometric
/// and exponential functions, with spacing drawn log-uniformly from
/// [1e-3, 1e-1]. Every eighth sample is exactly constant.
pub fn gen_stage1_dataset(seed: u64, n_samples: usize) -> Vec<Stencil> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|i| {
            let family = match i % 8 {
                0 => 0,
                1 | 4 | 5 => 1,
                2 | 6 => 2,
                _ => 3,
            };
            let h = 10f64.powf(rng.gen_range(-3.0..-1.0));
            gen_smooth_stencil(&mut rng, family, h)
        })
        .collect()
}

/// Grid size of the stage-two dataset.
pub const STAGE2_CELLS: usize = 200;

/// Stage-two dataset: the piecewise initial condition sampled on 200 cells
/// of [-1, 1], split with the Lax-Friedrichs splitting of the unit-speed
/// advection flux, yielding 200 left-biased stencils and 200 reversed
/// right-biased stencils. Labels are the JS weights of each stencil.
pub fn gen_stage2_dataset(kernel: &KernelConfig, loss: &LossConfig) -> Vec<TrainSample> {
    let n = STAGE2_CELLS;
    let dx = 2.0 / n as f64;
    let u: Vec<f64> = (0..n)
        .map(|i| eval_train_ic(-1.0 + 0.5 * dx + i as f64 * dx))
        .collect();

    // f(u) = u, alpha = max|f'| = 1: f+ = u, f- = 0.
    let fp = &u;
    let fm = vec![0.0; n];

    let wrap = |i: isize| -> usize { i.rem_euclid(n as isize) as usize };
    let mut samples = Vec::with_capacity(2 * n);
    for i in 0..n as isize {
        let stencil = Stencil {
            f0: fp[wrap(i - 1)],
            f1: fp[wrap(i)],
            f2: fp[wrap(i + 1)],
        };
        samples.push(stencil);
    }
    for i in 0..n as isize {
        // reversed order mirrors the right-biased reconstruction stencil
        let stencil = Stencil {
            f0: fm[wrap(i + 2)],
            f1: fm[wrap(i + 1)],
            f2: fm[wrap(i)],
        };
        samples.push(stencil);
    }

    samples
        .into_iter()
        .map(|stencil| {
            let label = js_weights(&stencil, kernel);
            let lambda = if loss.kind == LossKind::L1 {
                lambda_smoothness(&label, loss.c)
            } else {
                0.0
            };
            TrainSample {
                stencil,
                label,
                lambda,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno::js_weights;

    #[test]
    fn stage1_is_deterministic_and_finite() {
        let a = gen_stage1_dataset(42, 512);
        let b = gen_stage1_dataset(42, 512);
        assert_eq!(a, b);
        for s in &a {
            assert!(s.f0.is_finite() && s.f1.is_finite() && s.f2.is_finite());
        }
        let constants = a
            .iter()
            .filter(|s| s.f0 == s.f1 && s.f1 == s.f2)
            .count();
        assert!(constants >= 512 / 8, "only {constants} constant stencils");
    }

    #[test]
    fn stage1_small_spacing_drives_js_toward_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = KernelConfig::default();
        let total = 10_000;
        let mut good = 0;
        for i in 0..total {
            let family = (i % 4) as u8;
            let s = gen_smooth_stencil(&mut rng, family, 1e-3);
            let w = js_weights(&s, &cfg);
            if (w.w0 - 1.0 / 3.0).abs() < 0.2 {
                good += 1;
            }
        }
        assert!(
            good as f64 >= 0.95 * total as f64,
            "{good}/{total} within 0.2 of the linear weight"
        );
    }

    #[test]
    fn stage2_count_and_label_consistency() {
        let kernel = KernelConfig::default();
        let loss = LossConfig::new(LossKind::L1);
        let data = gen_stage2_dataset(&kernel, &loss);
        assert_eq!(data.len(), 400);
        for s in &data {
            let w = js_weights(&s.stencil, &kernel);
            assert_eq!(w.w0.to_bits(), s.label.w0.to_bits());
            assert_eq!(w.w1.to_bits(), s.label.w1.to_bits());
            assert!((0.0..=1.0).contains(&s.lambda));
        }
    }

    #[test]
    fn stage2_plateau_and_jump_labels() {
        let kernel = KernelConfig::default();
        let data = gen_stage2_dataset(&kernel, &LossConfig::new(LossKind::L2));
        let n = STAGE2_CELLS;
        let dx = 2.0 / n as f64;
        let x = |i: usize| -1.0 + 0.5 * dx + i as f64 * dx;

        // a stencil drawn entirely from the constant plateau
        let i_plateau = (0..n)
            .find(|&i| x(i) > -0.35 + dx && x(i) < -0.25 - dx)
            .unwrap();
        let s = &data[i_plateau];
        assert_eq!(s.label.w0, 1.0 / 3.0);
        assert_eq!(s.label.w1, 2.0 / 3.0);

        // a stencil straddling the jump at x = -0.4
        let i_jump = (0..n).find(|&i| x(i) > -0.4).unwrap();
        let s = &data[i_jump];
        assert!(s.label.w0.min(s.label.w1) < 1e-3);

        // the reversed split-flux half is identically zero for advection
        for s in &data[n..] {
            assert_eq!((s.stencil.f0, s.stencil.f1, s.stencil.f2), (0.0, 0.0, 0.0));
            assert_eq!(s.label.w0, 1.0 / 3.0);
        }
    }

    #[test]
    fn lambda_examples() {
        let w = WeightPair::new(1.0 / 3.0, 2.0 / 3.0).unwrap();
        assert_eq!(lambda_smoothness(&w, 35.0), 1.0);

        let w = WeightPair::new(2e-12, 1.0 - 2e-12).unwrap();
        assert_eq!(lambda_smoothness(&w, 35.0), 0.0);

        let w = WeightPair::new(0.25, 0.75).unwrap();
        // r = 1.5; frozen from a 50-digit evaluation of exp(-0.5/35)
        let lam = lambda_smoothness(&w, 35.0);
        assert!((lam - 0.9858158423524046335).abs() < 1e-15);
    }

    #[test]
    fn lambda_is_strictly_decreasing_in_r() {
        // sweep r through the weight pair (2w0/w1 parametrization)
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let r = 1.0 + k as f64 * 0.5;
            // choose w1 so that w1/(2w0) = r with w0 + w1 = 1
            let w1 = 2.0 * r / (1.0 + 2.0 * r);
            let w = WeightPair::new(1.0 - w1, w1).unwrap();
            let lam = lambda_smoothness(&w, 35.0);
            assert!(lam < prev || (k == 0 && lam == 1.0));
            prev = lam;
        }
    }
}
