//! Empirical samples and goodness-of-fit distances.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exact::ExactDistribution;
use crate::harmonic::{CurveKind, DistributionCurve};
use crate::sampler::Mode;

/// A sorted batch of statistic values with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    pub n: u64,
    pub mode: Mode,
    pub seed: u64,
}

impl EmpiricalSample {
    /// Sorts `values`; NaNs are rejected.
    pub fn new(mut values: Vec<f64>, n: u64, mode: Mode, seed: u64) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidConfig("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, n, mode, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// M, the number of draws.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Population variance (divides by M).
    pub fn variance(&self) -> f64 {
        moments(&self.values).1
    }

    pub fn ks_distance(&self, reference: &impl ReferenceCdf) -> f64 {
        ks_distance_sorted(&self.values, reference)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    moments(values).0
}

/// Mean and population variance, by Welford's update.
pub fn moments(values: &[f64]) -> (f64, f64) {
    let mut m = 0.0;
    let mut s = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let d = x - m;
        m += d / (i + 1) as f64;
        s += d * (x - m);
    }
    if values.is_empty() {
        (0.0, 0.0)
    } else {
        (m, s / values.len() as f64)
    }
}

/// A right-continuous reference CDF.
pub trait ReferenceCdf {
    fn cdf(&self, x: f64) -> f64;

    /// `F(x−)`; equals `cdf` unless `x` is an atom.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }

    /// Atoms of the reference law, sorted ascending.
    fn jump_points(&self) -> &[f64] {
        &[]
    }
}

impl ReferenceCdf for DistributionCurve {
    fn cdf(&self, x: f64) -> f64 {
        assert_eq!(self.kind, CurveKind::Cdf, "KS needs a CDF curve");
        self.eval(x)
    }
}

/// A finite discrete law with exact cumulative counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicLaw {
    values: Vec<f64>,
    cumulative: Vec<u64>,
    total: u64,
}

impl AtomicLaw {
    /// `(value, count)` pairs; equal values are merged.
    pub fn from_counts(mut atoms: Vec<(f64, u64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut cumulative: Vec<u64> = Vec::with_capacity(atoms.len());
        let mut running = 0u64;
        for (v, c) in atoms {
            running += c;
            if values.last() == Some(&v) {
                *cumulative.last_mut().expect("non-empty") = running;
            } else {
                values.push(v);
                cumulative.push(running);
            }
        }
        Self { values, cumulative, total: running }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Probability of the `i`-th atom.
    pub fn probability(&self, i: usize) -> f64 {
        let below = if i == 0 { 0 } else { self.cumulative[i - 1] };
        (self.cumulative[i] - below) as f64 / self.total as f64
    }

    fn count_at_most(&self, x: f64) -> u64 {
        let idx = self.values.partition_point(|&v| v <= x);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }

    fn count_below(&self, x: f64) -> u64 {
        let idx = self.values.partition_point(|&v| v < x);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

impl ReferenceCdf for AtomicLaw {
    fn cdf(&self, x: f64) -> f64 {
        self.count_at_most(x) as f64 / self.total as f64
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.count_below(x) as f64 / self.total as f64
    }

    fn jump_points(&self) -> &[f64] {
        &self.values
    }
}

impl From<&ExactDistribution> for AtomicLaw {
    fn from(d: &ExactDistribution) -> Self {
        AtomicLaw::from_counts(d.atoms.iter().map(|a| (a.value, a.count)).collect())
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `sample` and
/// `reference`, evaluating both one-sided limits at every jump of either.
pub fn ks_distance(sample: &[f64], reference: &impl ReferenceCdf) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_distance_sorted(&sorted, reference)
}

/// As [`ks_distance`] for a sample already sorted ascending.
pub fn ks_distance_sorted(sorted: &[f64], reference: &impl ReferenceCdf) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let m = sorted.len() as f64;
    let jumps = reference.jump_points();
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < sorted.len() || j < jumps.len() {
        let x = match (sorted.get(i), jumps.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let below = i;
        while i < sorted.len() && sorted[i] <= x {
            i += 1;
        }
        while j < jumps.len() && jumps[j] <= x {
            j += 1;
        }
        let left = below as f64 / m;
        let right = i as f64 / m;
        d = d.max((left - reference.cdf_left(x)).abs()).max((right - reference.cdf(x)).abs());
    }
    d.min(1.0)
}

/// Pearson chi-square statistic of `counts` against equal cell probabilities.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Total-variation distance between observed frequencies and the uniform law.
pub fn total_variation_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let p = 1.0 / counts.len() as f64;
    0.5 * counts.iter().map(|&c| (c as f64 / total as f64 - p).abs()).sum::<f64>()
}

/// Upper `alpha` quantile of the chi-square law with `df` degrees of freedom.
pub fn chi_square_critical(df: u64, alpha: f64) -> Result<f64> {
    let law = ChiSquared::new(df as f64).map_err(|e| Error::InvalidConfig(format!("chi-square: {e}")))?;
    Ok(law.inverse_cdf(1.0 - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Uniform01;
    impl ReferenceCdf for Uniform01 {
        fn cdf(&self, x: f64) -> f64 {
            x.clamp(0.0, 1.0)
        }
    }

    #[test]
    fn ks_step_against_median() {
        let law = AtomicLaw::from_counts(vec![(-1.0, 1), (1.0, 1)]);
        assert_eq!(ks_distance(&[0.0], &law), 0.5);
        let curve = DistributionCurve { kind: CurveKind::Cdf, start: -1.0, step: 1.0, values: vec![0.0, 0.5, 1.0] };
        assert_eq!(ks_distance(&[0.0], &curve), 0.5);
    }

    #[test]
    fn ks_disjoint_supports() {
        let law = AtomicLaw::from_counts(vec![(10.0, 3), (11.0, 1)]);
        assert_eq!(ks_distance(&[0.0, 1.0, 2.0], &law), 1.0);
        assert_eq!(ks_distance(&[0.0, 1.0], &Uniform01), 0.5);
        assert_eq!(ks_distance(&[5.0, 6.0], &Uniform01), 1.0);
    }

    #[test]
    fn ks_self_test_is_zero() {
        let xs = [0.1, 0.4, 0.4, 0.9];
        let law = AtomicLaw::from_counts(xs.iter().map(|&x| (x, 1)).collect());
        assert_eq!(ks_distance(&xs, &law), 0.0);
    }

    #[test]
    fn ks_continuous_matches_textbook_formula() {
        let xs = [0.05, 0.2, 0.21, 0.7, 0.95];
        let m = xs.len() as f64;
        let textbook = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / m - x).max(x - i as f64 / m))
            .fold(0.0, f64::max);
        assert!((ks_distance(&xs, &Uniform01) - textbook).abs() < 1e-15);
    }

    #[test]
    fn atomic_law_merges_and_accumulates() {
        let law = AtomicLaw::from_counts(vec![(2.0, 1), (1.0, 2), (2.0, 1)]);
        assert_eq!(law.values(), &[1.0, 2.0]);
        assert_eq!(law.cdf(1.0), 0.5);
        assert_eq!(law.cdf_left(1.0), 0.0);
        assert_eq!(law.cdf(1.5), 0.5);
        assert_eq!(law.probability(1), 0.5);
    }

    #[test]
    fn chi_square_helpers() {
        assert_eq!(chi_square_uniform(&[10, 10, 10]), 0.0);
        assert_eq!(chi_square_uniform(&[20, 0]), 20.0);
        assert_eq!(total_variation_uniform(&[1, 0]), 0.5);
        assert_eq!(total_variation_uniform(&[7]), 0.0);
        let crit = chi_square_critical(63, 1e-3).unwrap();
        assert!((crit - 103.442).abs() < 0.01, "{crit}");
    }

    #[test]
    fn moments_and_sample() {
        let (m, v) = moments(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert_eq!(v, 1.25);
        let s = EmpiricalSample::new(vec![3.0, 1.0, 2.0], 10, Mode::Free, 0).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert!(EmpiricalSample::new(vec![f64::NAN], 1, Mode::Free, 0).is_err());
    }
}
