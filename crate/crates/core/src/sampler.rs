//! Boltzmann sampling of distinct-parts partitions.
//!
//! In free mode every part size `k` is included independently with
//! probability `p_k = q^k/(1+q^k)`, where `q = exp(−π/√(12n))`. The law of
//! a free sample conditioned on its weight being `n` is uniform over the
//! distinct-parts partitions of `n`; exact mode realizes that conditioning.
//!
//! Exact mode draws the large parts (`k > cutoff`) freely and accepts them
//! with probability proportional to the free-model probability that the
//! small parts (`k ≤ cutoff`) weigh exactly the remainder, then draws the
//! small parts from their exact conditional law. With `cutoff = 0` this is
//! plain rejection on the total weight.
//!
//! The comparison model in the medium-range argument is sometimes written
//! with Bernoulli parameter `1 + q^k`, which is not a probability; the
//! surrounding mean and variance computations use `q^k/(1+q^k)`, and that is
//! what is implemented here.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::asymptotics::SHAPE_SCALE;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::stream::parallel_draws;

/// `−log q = π/√(12n)`.
pub fn log_inverse_parameter(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(PI / (12.0 * n as f64).sqrt())
}

/// The Boltzmann parameter `q = exp(−π/√(12n))` tuned for size `n`.
pub fn boltzmann_parameter(n: u64) -> Result<f64> {
    Ok((-log_inverse_parameter(n)?).exp())
}

/// `q^k/(1+q^k)` written as `1/(1+e^{ck})` with `c = −log q`.
pub fn inclusion_probability(c: f64, k: u64) -> f64 {
    1.0 / (1.0 + (c * k as f64).exp())
}

/// Mean weight `Σ k q^k/(1+q^k)` of a free sample.
pub fn expected_weight(q: f64) -> f64 {
    sum_terms(q, |k, p| k * p)
}

/// Weight variance `Σ k² q^k/(1+q^k)²` of a free sample.
pub fn weight_variance(q: f64) -> f64 {
    sum_terms(q, |k, p| k * k * p * (1.0 - p))
}

fn sum_terms(q: f64, term: impl Fn(f64, f64) -> f64) -> f64 {
    assert!(q > 0.0 && q < 1.0, "q must lie in (0, 1), got {q}");
    let c = -q.ln();
    let mut sum = 0.0;
    let mut k = 1u64;
    loop {
        let t = term(k as f64, inclusion_probability(c, k));
        sum += t;
        // terms are eventually decreasing; stop once past the peak and negligible
        if t <= 1e-16 * sum && k as f64 * c > 2.0 {
            break;
        }
        k += 1;
    }
    sum
}

/// Free Boltzmann draws, or draws conditioned on weight exactly `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Free,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Free => "free",
            Mode::Exact => "exact",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Mode::Free),
            "exact" => Ok(Mode::Exact),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?} (expected free or exact)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: u64,
    pub mode: Mode,
    /// Bound on the expected number of part sizes dropped by truncating
    /// the infinite product.
    pub truncation_tail: f64,
    /// Maximum attempts per exact-mode sample.
    pub rejection_budget: u64,
    pub seed: u64,
    /// Largest part size completed exactly in exact mode; `None` picks one
    /// from `n`. `Some(0)` is plain rejection.
    pub completion_cutoff: Option<u64>,
}

impl SamplerConfig {
    pub const DEFAULT_TRUNCATION_TAIL: f64 = 1e-12;
    pub const DEFAULT_REJECTION_BUDGET: u64 = 10_000_000;

    pub fn new(n: u64, mode: Mode, seed: u64) -> Self {
        Self {
            n,
            mode,
            truncation_tail: Self::DEFAULT_TRUNCATION_TAIL,
            rejection_budget: Self::DEFAULT_REJECTION_BUDGET,
            seed,
            completion_cutoff: None,
        }
    }

    pub fn free(n: u64, seed: u64) -> Self {
        Self::new(n, Mode::Free, seed)
    }

    pub fn exact(n: u64, seed: u64) -> Self {
        Self::new(n, Mode::Exact, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ZeroSize);
        }
        if !(self.truncation_tail > 0.0 && self.truncation_tail < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "truncation tail must lie in (0, 1), got {}",
                self.truncation_tail
            )));
        }
        if self.rejection_budget == 0 {
            return Err(Error::InvalidConfig("rejection budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// Partitions drawn under one [`SamplerConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub partitions: Vec<Partition>,
    pub config: SamplerConfig,
    /// Total attempts across the batch (equals the batch size in free mode).
    pub attempts_used: u64,
}

/// Upper bound on the completion table size, in f64 entries.
const MAX_COMPLETION_ENTRIES: u64 = 1 << 24;

/// A prepared sampler: truncation point, Bernoulli thresholds and, in exact
/// mode, the completion table.
#[derive(Debug, Clone)]
pub struct BoltzmannSampler {
    config: SamplerConfig,
    q: f64,
    max_part: u64,
    // thresholds[k] = p_k · 2^64; index 0 unused
    thresholds: Vec<u64>,
    completion: Option<Completion>,
}

impl BoltzmannSampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.validate()?;
        let c = log_inverse_parameter(config.n)?;
        let q = (-c).exp();
        let max_part = truncation_point(c, config.truncation_tail);
        let scale = 2f64.powi(64);
        let thresholds = std::iter::once(0)
            .chain((1..=max_part).map(|k| (inclusion_probability(c, k) * scale) as u64))
            .collect();
        let completion = match config.mode {
            Mode::Free => None,
            Mode::Exact => {
                let cutoff = config.completion_cutoff.unwrap_or_else(|| auto_cutoff(config.n));
                Some(Completion::new(config.n, cutoff.min(max_part), c)?)
            }
        };
        Ok(Self { config, q, max_part, thresholds, completion })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Largest part size the truncated sampler can produce.
    pub fn max_part(&self) -> u64 {
        self.max_part
    }

    /// Part sizes completed exactly in exact mode (0 in free mode).
    pub fn completion_cutoff(&self) -> u64 {
        self.completion.as_ref().map_or(0, |c| c.cutoff)
    }

    fn include<R: RngCore + ?Sized>(&self, k: u64, rng: &mut R) -> bool {
        rng.next_u64() < self.thresholds[k as usize]
    }

    /// One free Boltzmann draw.
    pub fn sample_free<R: RngCore + ?Sized>(&self, rng: &mut R) -> Partition {
        let mut parts = Vec::new();
        for k in (1..=self.max_part).rev() {
            if self.include(k, rng) {
                parts.push(k as u32);
            }
        }
        Partition::from_decreasing_unchecked(parts)
    }

    /// One draw of weight exactly `n`, uniform over distinct-parts partitions
    /// of `n`. Returns the partition and the number of attempts used.
    pub fn sample_exact<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<(Partition, u64)> {
        let completion = self
            .completion
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("sampler was not prepared for exact mode".into()))?;
        let n = self.config.n;
        let mut parts = Vec::new();
        for attempt in 1..=self.config.rejection_budget {
            parts.clear();
            let mut weight = 0u64;
            for k in (completion.cutoff + 1..=self.max_part).rev() {
                if self.include(k, rng) {
                    parts.push(k as u32);
                    weight += k;
                }
            }
            if weight > n {
                continue;
            }
            let remainder = n - weight;
            let u = unit_f64(rng);
            if u * completion.peak >= completion.weight_law(remainder, completion.cutoff) {
                continue;
            }
            if completion.fill(remainder, &mut parts, rng) {
                return Ok((Partition::from_decreasing_unchecked(parts), attempt));
            }
        }
        Err(Error::BudgetExhausted { n, attempts: self.config.rejection_budget })
    }

    /// One draw in the configured mode.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<(Partition, u64)> {
        match self.config.mode {
            Mode::Free => Ok((self.sample_free(rng), 1)),
            Mode::Exact => self.sample_exact(rng),
        }
    }

    /// `count` draws using the crate's chunked streams.
    pub fn sample_batch(&self, count: usize, workers: Option<usize>) -> Result<SampleBatch> {
        let draws = parallel_draws(count, self.config.seed, workers, |rng| self.sample(rng))?;
        let attempts_used = draws.iter().map(|(_, a)| a).sum();
        let partitions = draws.into_iter().map(|(p, _)| p).collect();
        Ok(SampleBatch { partitions, config: self.config, attempts_used })
    }
}

/// Convenience wrapper: one free draw under `cfg`.
pub fn sample_free<R: RngCore + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> Result<Partition> {
    Ok(BoltzmannSampler::new(SamplerConfig { mode: Mode::Free, ..*cfg })?.sample_free(rng))
}

/// Convenience wrapper: one exact-size draw under `cfg`.
pub fn sample_exact<R: RngCore + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> Result<Partition> {
    let sampler = BoltzmannSampler::new(SamplerConfig { mode: Mode::Exact, ..*cfg })?;
    Ok(sampler.sample_exact(rng)?.0)
}

/// `count` draws under `cfg`.
pub fn sample_batch(cfg: &SamplerConfig, count: usize, workers: Option<usize>) -> Result<SampleBatch> {
    BoltzmannSampler::new(*cfg)?.sample_batch(count, workers)
}

fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Smallest `K` with `Σ_{k>K} p_k < tail`.
fn truncation_point(c: f64, tail: f64) -> u64 {
    // Σ_{k>K} q^k/(1+q^k) ≤ q^{K+1}/(1−q) gives a safe starting point
    let one_minus_q = -(-c).exp_m1();
    let mut k = ((tail * one_minus_q).ln() / -c).ceil().max(1.0) as u64;
    // exact tail beyond the bound, then walk down while it stays below `tail`
    let mut omitted: f64 = {
        let mut s = 0.0;
        let mut j = k + 1;
        loop {
            let p = inclusion_probability(c, j);
            s += p;
            if p < 1e-30 {
                break s;
            }
            j += 1;
        }
    };
    while k > 1 {
        let with_k = omitted + inclusion_probability(c, k);
        if with_k >= tail {
            break;
        }
        omitted = with_k;
        k -= 1;
    }
    k
}

fn auto_cutoff(n: u64) -> u64 {
    let ideal = (3.0 * SHAPE_SCALE * (n as f64).sqrt()).ceil() as u64;
    let by_memory = MAX_COMPLETION_ENTRIES / (n + 1);
    ideal.min(n).min(by_memory.saturating_sub(1))
}

/// `P(weight of the free parts ≤ j equals m)` for `m ≤ n`, `j ≤ cutoff`.
#[derive(Debug, Clone)]
struct Completion {
    n: u64,
    cutoff: u64,
    // law[j * (n + 1) + m]
    law: Vec<f64>,
    probs: Vec<f64>,
    peak: f64,
}

impl Completion {
    fn new(n: u64, cutoff: u64, c: f64) -> Result<Self> {
        let entries = (cutoff + 1).saturating_mul(n + 1);
        if entries > MAX_COMPLETION_ENTRIES {
            return Err(Error::InvalidConfig(format!(
                "completion cutoff {cutoff} needs {entries} table entries (max {MAX_COMPLETION_ENTRIES})"
            )));
        }
        let width = (n + 1) as usize;
        let mut law = vec![0.0; entries as usize];
        law[0] = 1.0;
        let probs: Vec<f64> =
            std::iter::once(0.0).chain((1..=cutoff).map(|k| inclusion_probability(c, k))).collect();
        for j in 1..=cutoff as usize {
            let p = probs[j];
            let (prev, cur) = law.split_at_mut(j * width);
            let prev = &prev[(j - 1) * width..];
            for m in 0..width {
                let mut v = (1.0 - p) * prev[m];
                if m >= j {
                    v += p * prev[m - j];
                }
                cur[m] = v;
            }
        }
        let top = &law[cutoff as usize * width..];
        let peak = top.iter().copied().fold(0.0, f64::max);
        Ok(Self { n, cutoff, law, probs, peak })
    }

    fn weight_law(&self, m: u64, j: u64) -> f64 {
        self.law[(j * (self.n + 1) + m) as usize]
    }

    /// Appends the small parts of a uniform completion of weight `remainder`.
    /// Returns false only if rounding left the walk stranded.
    fn fill<R: RngCore + ?Sized>(&self, mut remainder: u64, parts: &mut Vec<u32>, rng: &mut R) -> bool {
        for j in (1..=self.cutoff).rev() {
            if remainder == 0 {
                break;
            }
            if remainder < j {
                continue;
            }
            let total = self.weight_law(remainder, j);
            let with_j = self.probs[j as usize] * self.weight_law(remainder - j, j - 1);
            if unit_f64(rng) * total < with_j {
                parts.push(j as u32);
                remainder -= j;
            }
        }
        remainder == 0
    }
}
