//! Shallow-network weighting function: normalized undivided-difference
//! features, one 16-neuron GELU hidden layer, and a softmax output pair.

pub mod io;

use crate::error::{Error, Result};
use crate::weno::{Stencil, WeightPair, WeightingFn};

/// Denominator floor of the feature normalization.
pub const DELTA_EPSILON: f64 = 1e-12;

/// Feature width, hidden width, and output width of the network.
pub const N_FEATURES: usize = 4;
pub const N_HIDDEN: usize = 16;
pub const N_OUTPUTS: usize = 2;

/// The four normalized undivided differences of a stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; N_FEATURES]);

/// Which training stage produced a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageTag {
    Init,
    Snn1,
    Snn2,
}

impl StageTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            StageTag::Init => "init",
            StageTag::Snn1 => "snn1",
            StageTag::Snn2 => "snn2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "init" => Ok(StageTag::Init),
            "snn1" => Ok(StageTag::Snn1),
            "snn2" => Ok(StageTag::Snn2),
            other => Err(Error::MalformedModel(format!("unknown stage tag '{other}'"))),
        }
    }
}

/// Provenance carried alongside the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelMeta {
    pub stage: StageTag,
    pub seed: u64,
    /// Loss hyperparameter: C for snn1, D for snn2, 0 for init.
    pub loss_param: f64,
}

/// Parameters of the weighting network.
///
/// `w0` maps the four features to the sixteen hidden units; `w1` maps the
/// hidden units to the two output logits. Rows are output units.
#[derive(Debug, Clone, PartialEq)]
pub struct SnnModel {
    pub w0: [[f64; N_FEATURES]; N_HIDDEN],
    pub b0: [f64; N_HIDDEN],
    pub w1: [[f64; N_HIDDEN]; N_OUTPUTS],
    pub b1: [f64; N_OUTPUTS],
    pub meta: ModelMeta,
}

impl SnnModel {
    /// All-zero parameters; forward output is (0.5, 0.5) everywhere.
    pub fn zeros(meta: ModelMeta) -> Self {
        SnnModel {
            w0: [[0.0; N_FEATURES]; N_HIDDEN],
            b0: [0.0; N_HIDDEN],
            w1: [[0.0; N_HIDDEN]; N_OUTPUTS],
            b1: [0.0; N_OUTPUTS],
            meta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = self.w0.iter().flatten().all(|v| v.is_finite())
            && self.b0.iter().all(|v| v.is_finite())
            && self.w1.iter().flatten().all(|v| v.is_finite())
            && self.b1.iter().all(|v| v.is_finite())
            && self.meta.loss_param.is_finite();
        if all_finite {
            Ok(())
        } else {
            Err(Error::InvalidInput("non-finite model parameter".into()))
        }
    }

    /// Flat view of all parameters in serialization order (w0, b0, w1, b1).
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(N_PARAMS);
        out.extend(self.w0.iter().flatten());
        out.extend(&self.b0);
        out.extend(self.w1.iter().flatten());
        out.extend(&self.b1);
        out
    }

    /// Mutable iterator over all parameters in serialization order.
    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w0
            .iter_mut()
            .flatten()
            .chain(self.b0.iter_mut())
            .chain(self.w1.iter_mut().flatten())
            .chain(self.b1.iter_mut())
    }
}

/// Total trainable parameter count.
pub const N_PARAMS: usize =
    N_HIDDEN * N_FEATURES + N_HIDDEN + N_OUTPUTS * N_HIDDEN + N_OUTPUTS;

/// Normalized undivided differences of the stencil.
///
/// The first two features carry the one-sided differences, the third the
/// wide difference, the fourth the second difference; all are divided by
/// `max(|f0-f1|, |f1-f2|, DELTA_EPSILON)`.
#[inline]
pub fn delta_features(s: &Stencil) -> FeatureVector {
    let t1 = (s.f0 - s.f1).abs();
    let t2 = (s.f1 - s.f2).abs();
    let t3 = (s.f0 - s.f2).abs();
    let t4 = (s.f0 - 2.0 * s.f1 + s.f2).abs();
    let m = t1.max(t2).max(DELTA_EPSILON);
    FeatureVector([t1 / m, t2 / m, t3 / m, t4 / m])
}

/// Gaussian error linear unit, x/2 * (1 + erf(x / sqrt 2)).
#[inline]
pub fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + libm::erf(x * std::f64::consts::FRAC_1_SQRT_2))
}

/// Derivative of `gelu`: Phi(x) + x phi(x) with the standard normal cdf/pdf.
#[inline]
pub fn gelu_prime(x: f64) -> f64 {
    let phi_cdf = 0.5 * (1.0 + libm::erf(x * std::f64::consts::FRAC_1_SQRT_2));
    let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    phi_cdf + x * pdf
}

/// Two-way softmax with max subtraction for overflow safety.
#[inline]
pub fn softmax2(z0: f64, z1: f64) -> WeightPair {
    let m = z0.max(z1);
    let e0 = (z0 - m).exp();
    let e1 = (z1 - m).exp();
    let s = e0 + e1;
    WeightPair {
        w0: e0 / s,
        w1: e1 / s,
    }
}

/// Hidden activations and output logits for a feature vector.
#[inline]
pub fn logits(x: &FeatureVector, m: &SnnModel) -> [f64; N_OUTPUTS] {
    let mut z = m.b1;
    for (j, row) in m.w0.iter().enumerate() {
        let mut pre = m.b0[j];
        for (i, w) in row.iter().enumerate() {
            pre += w * x.0[i];
        }
        let h = gelu(pre);
        for (k, zk) in z.iter_mut().enumerate() {
            *zk += m.w1[k][j] * h;
        }
    }
    z
}

/// The trained weighting function: features, hidden layer, softmax output.
#[inline]
pub fn forward(s: &Stencil, m: &SnnModel) -> WeightPair {
    let z = logits(&delta_features(s), m);
    softmax2(z[0], z[1])
}

impl WeightingFn for SnnModel {
    #[inline]
    fn weights(&self, s: &Stencil) -> WeightPair {
        forward(s, self)
    }
}

impl WeightingFn for &SnnModel {
    #[inline]
    fn weights(&self, s: &Stencil) -> WeightPair {
        forward(s, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno::Stencil;

    fn s(f0: f64, f1: f64, f2: f64) -> Stencil {
        Stencil::new(f0, f1, f2).unwrap()
    }

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let err = if expected == 0.0 {
            actual.abs()
        } else {
            ((actual - expected) / expected).abs()
        };
        assert!(
            err <= tol,
            "actual {actual:e} vs expected {expected:e} (rel err {err:e})"
        );
    }

    fn test_meta() -> ModelMeta {
        ModelMeta {
            stage: StageTag::Init,
            seed: 0,
            loss_param: 0.0,
        }
    }

    pub(super) fn random_model(seed: u64) -> SnnModel {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = SnnModel::zeros(ModelMeta {
            stage: StageTag::Init,
            seed,
            loss_param: 0.0,
        });
        for row in m.w0.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
        }
        for v in m.b0.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for row in m.w1.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
        }
        for v in m.b1.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        m
    }

    #[test]
    fn delta_feature_examples() {
        // Tiny-scale stencil where the epsilon floor dominates: the values
        // come out as exact binary quotients.
        let f = delta_features(&s(1e-20, 1e-20, 0.0));
        assert_eq!(f.0, [0.0, 1e-8, 1e-8, 1e-8]);
        for c in [-4.0, 0.0, 1.5] {
            assert_eq!(delta_features(&s(c, c, c)).0, [0.0; 4]);
        }
        assert_eq!(delta_features(&s(0.0, 1.0, 2.0)).0, [1.0, 1.0, 2.0, 0.0]);
    }

    #[test]
    fn delta_features_not_scale_invariant_at_tiny_scale() {
        let a = delta_features(&s(1e-20, 1e-20, 0.0));
        let b = delta_features(&s(2e-20, 2e-20, 0.0));
        assert_ne!(a.0, b.0);
    }

    #[test]
    fn gelu_examples() {
        assert_eq!(gelu(0.0), 0.0);
        // Frozen from a 50-digit erf evaluation.
        assert_rel(gelu(1.0), 0.84134474606854294859, 1e-15);
        assert_rel(gelu(-1.0), -0.15865525393145705141, 1e-15);
        assert_rel(gelu(0.5), 0.34573123063700655182, 1e-15);
        assert_rel(gelu(2.5), 2.4844758366855596621, 1e-15);
        let tail = gelu(-10.0);
        assert!(tail > -8e-23 && tail < 0.0, "gelu(-10) = {tail:e}");
    }

    #[test]
    fn erf_accuracy_against_frozen_table() {
        // (x, erf(x)) frozen from a 50-digit evaluation.
        let table = [
            (0.1, 0.1124629160182848922),
            (0.5, 0.52049987781304653768),
            (1.0, 0.84270079294971486934),
            (1.5, 0.96610514647531072707),
            (2.0, 0.99532226501895273416),
            (3.0, 0.99997790950300141456),
            (4.5, 0.99999999980338395585),
            (-0.7, -0.67780119383741847298),
            (-2.2, -0.99813715370201810856),
            (6.0, 0.99999999999999997848),
            (0.0078125, 0.0088152828951791887128),
        ];
        for (x, expected) in table {
            assert_rel(libm::erf(x), expected, 1e-15);
        }
    }

    #[test]
    fn softmax_examples() {
        let w = softmax2(0.0, 0.0);
        assert_eq!((w.w0, w.w1), (0.5, 0.5));
        let w = softmax2(2f64.ln(), 0.0);
        assert_rel(w.w0, 2.0 / 3.0, 1e-15);
        assert_rel(w.w1, 1.0 / 3.0, 1e-15);
        // shift invariance is exact thanks to max subtraction
        for c in [-700.0, -1.5, 3.0, 700.0] {
            let a = softmax2(0.3, -1.2);
            let b = softmax2(0.3 + c, -1.2 + c);
            assert_rel(b.w0, a.w0, 1e-14);
            assert_rel(b.w1, a.w1, 1e-14);
        }
        // extreme logits saturate without NaN
        let w = softmax2(1000.0, -1000.0);
        assert_eq!((w.w0, w.w1), (1.0, 0.0));
    }

    #[test]
    fn forward_zero_model_is_half_half() {
        let m = SnnModel::zeros(test_meta());
        for st in [s(1.0, 2.0, -3.0), s(0.0, 0.0, 0.0), s(1e9, -1e9, 5.0)] {
            let w = forward(&st, &m);
            assert_eq!((w.w0, w.w1), (0.5, 0.5));
        }
    }

    #[test]
    fn forward_validity_sweep() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let m = random_model(trial);
            for _ in 0..10_000 {
                let exp: i32 = rng.gen_range(-14..6);
                let scale = 10f64.powi(exp);
                let st = s(
                    scale * rng.gen_range(-1.0..1.0),
                    scale * rng.gen_range(-1.0..1.0),
                    scale * rng.gen_range(-1.0..1.0),
                );
                let w = forward(&st, &m);
                assert!(w.w0 >= 0.0 && w.w0 <= 1.0);
                assert!(w.w1 >= 0.0 && w.w1 <= 1.0);
                assert!((w.w0 + w.w1 - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn forward_translation_invariance_bit_exact() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = random_model(9);
        for _ in 0..10_000 {
            // dyadic grid keeps the translation exact in floating point
            let g = |r: &mut rand_chacha::ChaCha8Rng| {
                r.gen_range(-(1i64 << 23)..(1i64 << 23)) as f64 / (1u64 << 20) as f64
            };
            let (f0, f1, f2, d) = (g(&mut rng), g(&mut rng), g(&mut rng), g(&mut rng));
            let a = forward(&s(f0, f1, f2), &m);
            let b = forward(&s(f0 + d, f1 + d, f2 + d), &m);
            assert_eq!(a.w0.to_bits(), b.w0.to_bits());
            assert_eq!(a.w1.to_bits(), b.w1.to_bits());
        }
    }

    #[test]
    fn forward_scale_invariance_above_epsilon() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let m = random_model(21);
        for _ in 0..5_000 {
            let f0: f64 = rng.gen_range(-1.0..1.0);
            let f1: f64 = rng.gen_range(-1.0..1.0);
            let f2: f64 = rng.gen_range(-1.0..1.0);
            let st = s(f0, f1, f2);
            if (f0 - f1).abs().max((f1 - f2).abs()) < 1e-6 {
                continue;
            }
            // powers of two scale exactly
            for lam in [0.5, 2.0] {
                let a = delta_features(&st);
                let b = delta_features(&s(lam * f0, lam * f1, lam * f2));
                assert_eq!(a.0, b.0);
            }
            // generic scales agree to rounding noise
            let lam: f64 = rng.gen_range(0.5..2.0);
            let wa = forward(&st, &m);
            let wb = forward(&s(lam * f0, lam * f1, lam * f2), &m);
            assert!((wa.w0 - wb.w0).abs() <= 1e-12);
            assert!((wa.w1 - wb.w1).abs() <= 1e-12);
        }
    }
}
