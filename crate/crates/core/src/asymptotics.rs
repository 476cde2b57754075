//! Closed-form limit objects: the limit shape, the Mellin constant, the
//! centering of each part-size range and the growth of d(n).

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{count_d, ln_biguint};
use crate::partition::{half_log_3n, RangeThresholds};
use crate::quad::adaptive_simpson;
use crate::sampler::{inclusion_probability, log_inverse_parameter};
use crate::special::{dirichlet_eta, gamma, EULER_GAMMA};

/// A = √12/π, the scale of the limit shape.
#[allow(clippy::excessive_precision)]
pub const SHAPE_SCALE: f64 = 1.102_657_790_843_584_0;

/// log(π/2) − γ: the value of the Mellin function at 0.
pub fn mellin_constant() -> f64 {
    (PI / 2.0).ln() - EULER_GAMMA
}

/// Limit shape of the rescaled Young diagram of a random distinct-parts
/// partition, `L(t) = A log(2 / (1 + e^{−t/A}))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitShape {
    pub scale: f64,
}

impl Default for LimitShape {
    fn default() -> Self {
        Self { scale: SHAPE_SCALE }
    }
}

impl LimitShape {
    pub fn value(&self, t: f64) -> f64 {
        let a = self.scale;
        a * (LN_2 - (-t / a).exp().ln_1p())
    }

    /// L′(t) = e^{−t/A} / (1 + e^{−t/A}), which lies in (0, 1/2].
    pub fn derivative(&self, t: f64) -> f64 {
        1.0 / (1.0 + (t / self.scale).exp())
    }

    /// L(∞) = A log 2.
    pub fn asymptote(&self) -> f64 {
        self.scale * LN_2
    }
}

/// The Mellin-type function
/// `f(s) = ∫_0^1 (2e^{−t}/(1+e^{−t}) − 1) t^{s−1} dt + ∫_1^∞ 2e^{−t}/(1+e^{−t}) t^{s−1} dt`
/// by adaptive quadrature, for `s > −1`.
///
/// The second integral is cut at the first integer `T` where the integrand
/// drops below 1e−18; past `T` the integrand decays at least geometrically
/// with ratio e^{−1/2}, so the omitted tail is below 3e−18.
pub fn mellin_quadrature(s: f64) -> Result<f64> {
    if s.is_nan() || s <= -1.0 {
        return Err(Error::InvalidConfig(format!("Mellin integral needs s > -1, got {s}")));
    }
    const TOL: f64 = 1e-13;
    // 2e^{−t}/(1+e^{−t}) − 1 = −tanh(t/2), which vanishes like −t/2 at 0
    let reduced = |t: f64| if t == 0.0 { -0.5 } else { -(0.5 * t).tanh() / t };
    // u = t^{s+1} removes the t^s factor and any singularity at 0
    let p = 1.0 / (s + 1.0);
    let head = adaptive_simpson(|u| reduced(u.powf(p)), 0.0, 1.0, TOL)? * p;
    let tail_integrand = |t: f64| 2.0 / (t.exp() + 1.0) * t.powf(s - 1.0);
    let mut upper = 2.0;
    while tail_integrand(upper) >= 1e-18 || upper < 2.0 * (s - 1.0) {
        upper += 1.0;
    }
    let tail = adaptive_simpson(tail_integrand, 1.0, upper, TOL)?;
    Ok(head + tail)
}

/// Closed form `f(s) = −1/s + 2Γ(s)η(s)` for `s > 0`, where
/// `η(s) = ζ(s)(1 − 2^{1−s})` is evaluated as the accelerated alternating series.
pub fn mellin_closed_form(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::InvalidConfig(format!("closed form needs s > 0, got {s}")));
    }
    Ok(-1.0 / s + 2.0 * gamma(s) * dirichlet_eta(s))
}

/// Centerings of the three range sums; they add up to log √(3n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeMeans {
    /// log k_n + γ
    pub small: f64,
    /// log(K_n / k_n)
    pub medium: f64,
    /// log(√(3n) / K_n) − γ
    pub large: f64,
    /// log √(3n)
    pub total: f64,
}

pub const RANGE_MIN_N: u64 = 32;

pub fn range_means(n: u64) -> Result<RangeMeans> {
    if n < RANGE_MIN_N {
        return Err(Error::SizeTooSmall { n, min: RANGE_MIN_N });
    }
    let th = RangeThresholds::new(n)?;
    let ln_small = (th.small as f64).ln();
    let ln_large = (th.large as f64).ln();
    let total = half_log_3n(n);
    Ok(RangeMeans {
        small: ln_small + EULER_GAMMA,
        medium: ln_large - ln_small,
        large: total - ln_large - EULER_GAMMA,
        total,
    })
}

/// Mean and variance of `Σ_{k_n<k≤K_n} 2B_k/k` for independent
/// `B_k ~ Bernoulli(q^k/(1+q^k))` at the size-`n` Boltzmann parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliRangeStats {
    pub mean: f64,
    pub variance: f64,
}

pub fn bernoulli_range_stats(n: u64) -> Result<BernoulliRangeStats> {
    let th = RangeThresholds::new(n)?;
    let c = log_inverse_parameter(n)?;
    let (mut mean, mut variance) = (0.0, 0.0);
    for k in (th.small + 1..=th.large).rev() {
        let p = inclusion_probability(c, k);
        let kf = k as f64;
        mean += 2.0 * p / kf;
        variance += 4.0 * p * (1.0 - p) / (kf * kf);
    }
    Ok(BernoulliRangeStats { mean, variance })
}

/// `log d(n)` next to its leading-order growth `2√n / A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrowth {
    pub exact: f64,
    pub asymptotic: f64,
}

impl LogGrowth {
    /// (exact − asymptotic) / log n, expected to stay bounded.
    pub fn normalized_gap(&self, n: u64) -> f64 {
        (self.exact - self.asymptotic) / (n as f64).ln()
    }
}

pub fn log_d_growth(n: u64) -> Result<LogGrowth> {
    let d = count_d(n)?;
    Ok(LogGrowth { exact: ln_biguint(&d), asymptotic: 2.0 * (n as f64).sqrt() / SHAPE_SCALE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scale_constant() {
        assert_abs_diff_eq!(SHAPE_SCALE, 12f64.sqrt() / PI, epsilon = 1e-15);
    }

    #[test]
    fn limit_shape_values() {
        let l = LimitShape::default();
        assert_eq!(l.value(0.0), 0.0);
        assert_abs_diff_eq!(l.value(1.0), 0.390_321_865_4, epsilon = 1e-9);
        assert_abs_diff_eq!(l.value(1e3), 0.764_304_138_8, epsilon = 1e-9);
        assert_abs_diff_eq!(l.asymptote(), 0.764_304_138_8, epsilon = 1e-9);
        assert_eq!(l.derivative(0.0), 0.5);
        assert!(l.derivative(200.0) < 1e-70);
    }

    #[test]
    fn limit_shape_integral_form() {
        let l = LimitShape::default();
        for t in [0.3, 1.0, 2.5, 7.0] {
            let q = adaptive_simpson(|u| l.derivative(u), 0.0, t, 1e-13).unwrap();
            assert_abs_diff_eq!(q, l.value(t), epsilon = 1e-11);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let l = LimitShape::default();
        let h = 1e-4;
        let fd = (l.value(1.0 + h) - l.value(1.0 - h)) / (2.0 * h);
        // O(h²) with |L‴| < 1
        assert_abs_diff_eq!(fd, l.derivative(1.0), epsilon = 1e-8);
    }

    #[test]
    fn ode_form_and_bounded_curvature() {
        let l = LimitShape::default();
        let h = 1e-4;
        for i in 0..=2000 {
            let t = i as f64 * 0.01;
            let e = (-t / SHAPE_SCALE).exp();
            assert_abs_diff_eq!(l.derivative(t) * (1.0 + e), e, epsilon = 1e-12);
            let slope = (l.derivative(t + h) - l.derivative(t)).abs() / h;
            assert!(slope <= 1.0 / (4.0 * SHAPE_SCALE) + 1e-6);
        }
    }

    #[test]
    fn mellin_at_zero() {
        let f0 = mellin_quadrature(0.0).unwrap();
        assert_abs_diff_eq!(f0, mellin_constant(), epsilon = 1e-8);
        assert_abs_diff_eq!(mellin_constant(), -0.125_632_959_6, epsilon = 1e-9);
    }

    #[test]
    fn mellin_closed_form_values() {
        assert_abs_diff_eq!(mellin_closed_form(1.0).unwrap(), 2.0 * LN_2 - 1.0, epsilon = 1e-12);
        // −2 + 2√π η(1/2)
        let half = -2.0 + 2.0 * PI.sqrt() * 0.604_898_643_421_630_4;
        assert_abs_diff_eq!(mellin_closed_form(0.5).unwrap(), half, epsilon = 1e-12);
        assert_abs_diff_eq!(mellin_closed_form(1e-3).unwrap(), mellin_constant(), epsilon = 5e-3);
        assert!(mellin_closed_form(0.0).is_err());
        assert!(mellin_closed_form(-1.0).is_err());
    }

    #[test]
    fn mellin_routes_agree() {
        for s in [0.1, 0.25, 0.5, 1.0, 1.5] {
            let q = mellin_quadrature(s).unwrap();
            let c = mellin_closed_form(s).unwrap();
            assert!((q - c).abs() < 1e-6, "s = {s}: {q} vs {c}");
        }
        assert_abs_diff_eq!(mellin_quadrature(0.5).unwrap(), 0.144_309_859_9, epsilon = 1e-6);
    }

    #[test]
    fn mellin_negative_argument() {
        // continuity across s = 0 of the quadrature route
        let a = mellin_quadrature(-1e-6).unwrap();
        let b = mellin_quadrature(0.0).unwrap();
        assert!((a - b).abs() < 1e-5);
        assert!(mellin_quadrature(-0.5).unwrap().is_finite());
        assert!(mellin_quadrature(-1.0).is_err());
    }

    #[test]
    fn range_means_values() {
        let m = range_means(100_000).unwrap();
        assert_abs_diff_eq!(m.small + m.medium + m.large, m.total, epsilon = 1e-12);
        let m = range_means(2000).unwrap();
        assert_abs_diff_eq!(m.total, 4.349_757_374_105, epsilon = 1e-9);
        let m = range_means(100).unwrap();
        assert_abs_diff_eq!(m.small, 1.270_362_845_461_478, epsilon = 1e-12);
        assert!(matches!(range_means(31), Err(Error::SizeTooSmall { .. })));
    }

    #[test]
    fn bernoulli_range_at_one_million() {
        // frozen constants: C = 1 for the mean gap, C' = 1 for the variance
        let n = 1_000_000u64;
        let stats = bernoulli_range_stats(n).unwrap();
        let th = RangeThresholds::new(n).unwrap();
        let gap = (stats.mean - (th.large as f64 / th.small as f64).ln()).abs();
        assert!(gap <= (n as f64).powf(-1.0 / 6.0), "gap {gap}");
        assert!(stats.variance <= (n as f64).powf(-0.2), "variance {}", stats.variance);
    }

    #[test]
    fn bernoulli_range_empty() {
        let s = bernoulli_range_stats(1).unwrap();
        assert_eq!((s.mean, s.variance), (0.0, 0.0));
        let s = bernoulli_range_stats(31).unwrap();
        assert!(s.mean > 0.0);
    }

    #[test]
    fn log_growth() {
        let g = log_d_growth(100).unwrap();
        assert_abs_diff_eq!(g.exact, 444_793f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(g.asymptotic, 18.137_993_642, epsilon = 1e-8);
        assert_eq!(log_d_growth(0).unwrap().exact, 0.0);
        for n in [100u64, 400, 1600, 6400] {
            let g = log_d_growth(n).unwrap();
            assert!(g.normalized_gap(n).abs() <= 5.0);
        }
    }
}
