//! The random harmonic sum `H = Σ ε_k/k` with independent fair signs.
//!
//! The density and CDF are obtained by Fourier inversion of the truncated
//! characteristic function `Π_{k≤K} cos(t/k)`, multiplied by the Gaussian
//! factor `exp(−τt²/2)` with `τ = Σ_{k>K} 1/k²` standing in for the omitted
//! terms. Integrals over `t ∈ [0, T]` use composite Simpson with the panel
//! count doubled until the tabulated curve moves by less than 1e−8.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{simpson_tabulated, simpson_weights};
use crate::special::ZETA_2;
use crate::stats::AtomicLaw;
use crate::stream::parallel_draws;

/// Σ_{k≤K} 1/k².
pub fn variance_partial(terms: u64) -> f64 {
    (1..=terms).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum()
}

/// Σ_{k>K} 1/k², computed as π²/6 minus the partial sum.
pub fn variance_tail(terms: u64) -> f64 {
    ZETA_2 - variance_partial(terms)
}

/// E e^{itH_K} = Π_{k≤K} cos(t/k).
pub fn char_fn(t: f64, terms: u64) -> f64 {
    (1..=terms).map(|k| (t / k as f64).cos()).product()
}

/// Draws `Σ_{k≤K} ε_k/k`.
pub fn sample_h<R: RngCore + ?Sized>(terms: u64, rng: &mut R) -> f64 {
    HarmonicSampler::new(terms).draw(rng)
}

/// Repeated draws of the truncated sum `Σ_{k≤K} ε_k/k`; one random bit per sign.
#[derive(Debug, Clone)]
pub struct HarmonicSampler {
    // 1/k for k = K, K−1, …, 1 (smallest magnitudes first)
    reciprocals: Vec<f64>,
}

impl HarmonicSampler {
    pub fn new(terms: u64) -> Self {
        Self { reciprocals: (1..=terms).rev().map(|k| 1.0 / k as f64).collect() }
    }

    pub fn terms(&self) -> u64 {
        self.reciprocals.len() as u64
    }

    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut sum = 0.0;
        for chunk in self.reciprocals.chunks(64) {
            let mut bits = rng.next_u64();
            for &r in chunk {
                // flip the sign bit of 1/k with the next random bit
                sum += f64::from_bits(r.to_bits() ^ ((bits & 1) << 63));
                bits >>= 1;
            }
        }
        sum
    }
}

/// `count` Monte Carlo draws of `Σ_{k≤K} ε_k/k`, in draw order.
pub fn monte_carlo(terms: u64, count: usize, seed: u64, workers: Option<usize>) -> Result<Vec<f64>> {
    let sampler = HarmonicSampler::new(terms);
    parallel_draws(count, seed, workers, |rng| Ok(sampler.draw(rng)))
}

/// Exact law of `Σ_{k≤K} ε_k/k` over all `2^K` sign vectors.
///
/// Values are computed as integers over lcm(1..K), so equal sums merge
/// exactly. Supports `K ≤ 20`.
pub fn sign_sum_law(terms: u64) -> Result<AtomicLaw> {
    const MAX_TERMS: u64 = 20;
    if terms > MAX_TERMS {
        return Err(Error::SmallRangeTooLarge { k_n: terms, max: MAX_TERMS });
    }
    let scale = SignSumScale::new(terms);
    let mut atoms: Vec<(i64, u64)> = (0..1u64 << terms).map(|mask| (scale.numerator(mask), 1)).collect();
    atoms.sort_unstable();
    atoms.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    Ok(AtomicLaw::from_counts(atoms.into_iter().map(|(num, c)| (scale.value(num), c)).collect()))
}

/// Exact integer representation of `Σ_{k≤K} ±1/k` as `numerator / lcm(1..K)`.
#[derive(Debug, Clone)]
pub struct SignSumScale {
    lcm: i64,
    // lcm / k for k = 1..=K
    weights: Vec<i64>,
}

impl SignSumScale {
    pub fn new(terms: u64) -> Self {
        assert!(terms <= 20, "lcm(1..K) must fit in 64 bits");
        let lcm = (1..=terms as i64).fold(1i64, num_integer::lcm);
        Self { lcm, weights: (1..=terms as i64).map(|k| lcm / k).collect() }
    }

    /// Bit `k−1` of `mask` set means `ε_k = +1`.
    pub fn numerator(&self, mask: u64) -> i64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, &w)| if mask >> i & 1 == 1 { w } else { -w })
            .sum()
    }

    pub fn value(&self, numerator: i64) -> f64 {
        numerator as f64 / self.lcm as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HModelConfig {
    /// Number K of exact cosine factors.
    pub cf_terms: u64,
    /// Variance τ of the Gaussian standing in for `Σ_{k>K} ε_k/k`.
    pub tail_variance: f64,
    /// Upper limit T of the inversion integrals.
    pub integration_limit: f64,
    /// Spacing of the output grid.
    pub grid_step: f64,
    /// The grid covers `[−half_width, half_width]`.
    pub half_width: f64,
}

impl Default for HModelConfig {
    fn default() -> Self {
        Self::with_terms(200)
    }
}

impl HModelConfig {
    pub fn with_terms(cf_terms: u64) -> Self {
        Self {
            cf_terms,
            tail_variance: variance_tail(cf_terms),
            integration_limit: 60.0,
            grid_step: 0.005,
            half_width: 6.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.cf_terms == 0 {
            return bad("cf_terms must be at least 1".into());
        }
        if self.tail_variance.is_nan() || self.tail_variance < 0.0 {
            return bad(format!("tail variance must be nonnegative, got {}", self.tail_variance));
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.integration_limit) || !positive(self.grid_step) || !positive(self.half_width) {
            return bad("integration limit, grid step and half width must be positive".into());
        }
        Ok(())
    }

    fn grid_points(&self) -> usize {
        let intervals = (2.0 * self.half_width / self.grid_step).round() as usize;
        // even so that Simpson applies to the tabulated curve
        intervals + intervals % 2 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Density,
    Cdf,
}

/// Ordinates on the uniform grid `start + i·step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub kind: CurveKind,
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl DistributionCurve {
    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.x(i), v))
    }

    /// Linear interpolation; outside the grid a density is 0 and a CDF is 0 or 1.
    pub fn eval(&self, x: f64) -> f64 {
        let last = self.values.len() - 1;
        if x < self.start {
            return 0.0;
        }
        if x > self.end() {
            return match self.kind {
                CurveKind::Density => 0.0,
                CurveKind::Cdf => 1.0,
            };
        }
        let pos = (x - self.start) / self.step;
        let i = (pos.floor() as usize).min(last - 1);
        let frac = pos - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    /// Simpson integral over the whole grid.
    pub fn integral(&self) -> f64 {
        simpson_tabulated(&self.values, self.step)
    }
}

/// The inversion integrals at a fixed Simpson resolution.
#[derive(Debug, Clone)]
pub struct HarmonicModel {
    config: HModelConfig,
    nodes: Vec<f64>,
    // Simpson weight × char_fn × Gaussian factor / π at each node
    weighted: Vec<f64>,
}

impl HarmonicModel {
    pub fn with_panels(config: HModelConfig, panels: usize) -> Result<Self> {
        config.validate()?;
        let h = config.integration_limit / panels as f64;
        let weights = simpson_weights(panels, h);
        let nodes: Vec<f64> = (0..=panels).map(|i| i as f64 * h).collect();
        let weighted = nodes
            .par_iter()
            .zip(weights.par_iter())
            .map(|(&t, &w)| {
                w * char_fn(t, config.cf_terms) * (-0.5 * config.tail_variance * t * t).exp()
                    / std::f64::consts::PI
            })
            .collect();
        Ok(Self { config, nodes, weighted })
    }

    pub fn config(&self) -> &HModelConfig {
        &self.config
    }

    pub fn panels(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `g(x) = (1/π) ∫_0^T cos(xt) φ(t) e^{−τt²/2} dt`.
    pub fn density_at(&self, x: f64) -> f64 {
        self.nodes.iter().zip(&self.weighted).map(|(&t, &w)| w * (x * t).cos()).sum()
    }

    /// `F(x) = 1/2 + (1/π) ∫_0^T sin(xt)/t φ(t) e^{−τt²/2} dt`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.5;
        }
        let integral: f64 = self
            .nodes
            .iter()
            .zip(&self.weighted)
            .map(|(&t, &w)| if t == 0.0 { w * x } else { w * (x * t).sin() / t })
            .sum();
        0.5 + integral
    }

    fn tabulate(&self, kind: CurveKind) -> DistributionCurve {
        let points = self.config.grid_points();
        let start = -self.config.half_width;
        let step = 2.0 * self.config.half_width / (points - 1) as f64;
        let values = (0..points)
            .into_par_iter()
            .map(|i| {
                let x = start + i as f64 * step;
                match kind {
                    CurveKind::Density => self.density_at(x),
                    CurveKind::Cdf => self.cdf_at(x),
                }
            })
            .collect();
        DistributionCurve { kind, start, step, values }
    }
}

const INITIAL_PANELS: usize = 1024;
const MAX_DOUBLINGS: u32 = 8;
const REFINEMENT_TOL: f64 = 1e-8;

fn refined_curve(config: &HModelConfig, kind: CurveKind) -> Result<DistributionCurve> {
    let mut panels = INITIAL_PANELS;
    let mut previous = HarmonicModel::with_panels(*config, panels)?.tabulate(kind);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let current = HarmonicModel::with_panels(*config, panels)?.tabulate(kind);
        let change = previous
            .values
            .iter()
            .zip(&current.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < REFINEMENT_TOL {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NonConvergence(format!(
        "Simpson refinement for the {kind:?} did not settle below {REFINEMENT_TOL:e} by {panels} panels"
    )))
}

/// Density of H on the configured grid.
pub fn density(config: &HModelConfig) -> Result<DistributionCurve> {
    refined_curve(config, CurveKind::Density)
}

/// CDF of H on the configured grid.
pub fn cdf(config: &HModelConfig) -> Result<DistributionCurve> {
    refined_curve(config, CurveKind::Cdf)
}
