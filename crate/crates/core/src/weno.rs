//! Third-order WENO weighting kernels (JS and Z) on three-point stencils.
//!
//! A stencil holds three consecutive split-flux values. The kernel computes
//! smoothness indicators from undivided differences, turns them into a pair
//! of nonlinear weights, and blends the two second-order candidate interface
//! values. The right-biased reconstruction reuses the same kernel by passing
//! the stencil in reversed order, so one code path serves both directions.

use crate::error::{Error, Result};

/// Linear weight of the left-shifted substencil.
pub const D0: f64 = 1.0 / 3.0;
/// Linear weight of the centered substencil.
pub const D1: f64 = 2.0 / 3.0;

/// Three consecutive split-flux values feeding one interface reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
}

impl Stencil {
    /// Builds a stencil, rejecting NaN and infinite entries.
    pub fn new(f0: f64, f1: f64, f2: f64) -> Result<Self> {
        if !(f0.is_finite() && f1.is_finite() && f2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite stencil ({f0}, {f1}, {f2})"
            )));
        }
        Ok(Stencil { f0, f1, f2 })
    }

    /// Stencil shifted by a constant, used by the translation-invariance tests.
    pub fn translated(&self, delta: f64) -> Result<Self> {
        Stencil::new(self.f0 + delta, self.f1 + delta, self.f2 + delta)
    }
}

/// Smoothness indicators of the two substencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessPair {
    pub beta0: f64,
    pub beta1: f64,
}

impl SmoothnessPair {
    /// Global indicator: absolute difference of the two substencil indicators.
    pub fn tau(&self) -> f64 {
        (self.beta0 - self.beta1).abs()
    }
}

/// A normalized pair of nonlinear weights: nonnegative, summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub w0: f64,
    pub w1: f64,
}

impl WeightPair {
    /// Builds a weight pair, enforcing nonnegativity and unit sum (1e-12).
    pub fn new(w0: f64, w1: f64) -> Result<Self> {
        if !(w0.is_finite() && w1.is_finite()) || w0 < 0.0 || w1 < 0.0 {
            return Err(Error::InvalidInput(format!("invalid weights ({w0}, {w1})")));
        }
        if ((w0 + w1) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "weights ({w0}, {w1}) do not sum to 1"
            )));
        }
        Ok(WeightPair { w0, w1 })
    }

    /// The linear weights (d0, d1).
    pub fn linear() -> Self {
        WeightPair { w0: D0, w1: D1 }
    }

    /// Normalizes a pair of unnormalized weight candidates by their sum.
    fn from_alphas(a0: f64, a1: f64) -> Self {
        let s = a0 + a1;
        WeightPair {
            w0: a0 / s,
            w1: a1 / s,
        }
    }
}

/// Regularization constants for the weighting kernels.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KernelConfig {
    /// Denominator offset of the JS kernel.
    pub epsilon_js: f64,
    /// Denominator offset of the Z kernel.
    pub epsilon_z: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            epsilon_js: 1e-6,
            epsilon_z: 1e-40,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon_js > 0.0 && self.epsilon_z > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "kernel epsilons must be strictly positive".into(),
            ))
        }
    }
}

/// Squared undivided differences of the two substencils, in stencil order.
#[inline]
pub fn smoothness_indicators(s: &Stencil) -> SmoothnessPair {
    let d0 = s.f0 - s.f1;
    let d1 = s.f1 - s.f2;
    SmoothnessPair {
        beta0: d0 * d0,
        beta1: d1 * d1,
    }
}

/// Classical JS weights: alpha_k = d_k / (beta_k + eps)^2, normalized.
#[inline]
pub fn js_weights(s: &Stencil, cfg: &KernelConfig) -> WeightPair {
    let b = smoothness_indicators(s);
    let q0 = b.beta0 + cfg.epsilon_js;
    let q1 = b.beta1 + cfg.epsilon_js;
    let a0 = D0 / (q0 * q0);
    let a1 = D1 / (q1 * q1);
    WeightPair::from_alphas(a0, a1)
}

/// Z-type weights: alpha_k = d_k (1 + tau / (beta_k + eps)), normalized.
#[inline]
pub fn z_weights(s: &Stencil, cfg: &KernelConfig) -> WeightPair {
    let b = smoothness_indicators(s);
    let tau = b.tau();
    let a0 = D0 * (1.0 + tau / (b.beta0 + cfg.epsilon_z));
    let a1 = D1 * (1.0 + tau / (b.beta1 + cfg.epsilon_z));
    WeightPair::from_alphas(a0, a1)
}

/// The two second-order candidate interface values of the stencil.
#[inline]
pub fn candidate_fluxes(s: &Stencil) -> (f64, f64) {
    (
        -0.5 * s.f0 + 1.5 * s.f1,
        0.5 * s.f1 + 0.5 * s.f2,
    )
}

/// Convex combination of the candidate fluxes under the given weights.
#[inline]
pub fn reconstruct(s: &Stencil, w: &WeightPair) -> f64 {
    let (c0, c1) = candidate_fluxes(s);
    w.w0 * c0 + w.w1 * c1
}

/// A weighting strategy mapping a stencil to its nonlinear weights.
///
/// Implemented by the classical kernels, by forced linear weights, and by the
/// trained network. All implementations are pure and thread-safe.
pub trait WeightingFn: Sync {
    fn weights(&self, s: &Stencil) -> WeightPair;
}

/// JS weighting with a fixed epsilon.
#[derive(Debug, Clone, Copy)]
pub struct JsWeighting(pub KernelConfig);

impl WeightingFn for JsWeighting {
    #[inline]
    fn weights(&self, s: &Stencil) -> WeightPair {
        js_weights(s, &self.0)
    }
}

/// Z weighting with a fixed epsilon.
#[derive(Debug, Clone, Copy)]
pub struct ZWeighting(pub KernelConfig);

impl WeightingFn for ZWeighting {
    #[inline]
    fn weights(&self, s: &Stencil) -> WeightPair {
        z_weights(s, &self.0)
    }
}

/// Forced linear weights; reduces the scheme to the third-order upwind one.
#[derive(Debug, Clone, Copy)]
pub struct LinearWeighting;

impl WeightingFn for LinearWeighting {
    #[inline]
    fn weights(&self, _s: &Stencil) -> WeightPair {
        WeightPair::linear()
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    /// Dyadic rationals make the translation exact in floating point, so the
    /// invariance can be asserted bit-for-bit.
    fn dyadic() -> impl Strategy<Value = f64> {
        (-(1i64 << 23)..(1i64 << 23)).prop_map(|i| i as f64 / (1u64 << 20) as f64)
    }

    proptest! {
        #[test]
        fn translation_invariance_bit_exact(
            f0 in dyadic(), f1 in dyadic(), f2 in dyadic(), delta in dyadic()
        ) {
            let cfg = KernelConfig::default();
            let a = Stencil::new(f0, f1, f2).unwrap();
            let b = a.translated(delta).unwrap();
            let (wa, wb) = (js_weights(&a, &cfg), js_weights(&b, &cfg));
            prop_assert_eq!(wa.w0.to_bits(), wb.w0.to_bits());
            prop_assert_eq!(wa.w1.to_bits(), wb.w1.to_bits());
            let (za, zb) = (z_weights(&a, &cfg), z_weights(&b, &cfg));
            prop_assert_eq!(za.w0.to_bits(), zb.w0.to_bits());
            prop_assert_eq!(za.w1.to_bits(), zb.w1.to_bits());
        }

        #[test]
        fn weights_valid_on_random_stencils(
            f0 in -1e6f64..1e6, f1 in -1e6f64..1e6, f2 in -1e6f64..1e6
        ) {
            let cfg = KernelConfig::default();
            let st = Stencil::new(f0, f1, f2).unwrap();
            for w in [js_weights(&st, &cfg), z_weights(&st, &cfg)] {
                prop_assert!(w.w0 >= 0.0 && w.w1 >= 0.0);
                prop_assert!((w.w0 + w.w1 - 1.0).abs() <= 1e-12);
            }
        }
    }
}
