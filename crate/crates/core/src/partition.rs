//! Distinct-parts partitions and the reciprocal-parts statistic.
//!
//! A [`Partition`] stores its parts in strictly decreasing order together
//! with the cached weight. The multiplicity view `X_k ∈ {0, 1}` is exposed
//! through [`Partition::multiplicity`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, PartitionDefect, Result};

/// A partition of `weight` into strictly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
    weight: u64,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates a list of parts.
    ///
    /// Parts must be positive and strictly decreasing; repeated values are
    /// reported as [`PartitionDefect::Repeated`] rather than as an ordering
    /// problem.
    pub fn from_parts(parts: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(parts.len());
        let mut weight = 0u64;
        for (index, &value) in parts.iter().enumerate() {
            if value < 1 {
                return Err(Error::InvalidPartition(PartitionDefect::NonPositive { index, value }));
            }
            if index > 0 {
                let prev = parts[index - 1];
                if value == prev {
                    return Err(Error::InvalidPartition(PartitionDefect::Repeated { value }));
                }
                if value > prev {
                    // a value seen earlier in the list is a repeat, not just disorder
                    if parts[..index].contains(&value) {
                        return Err(Error::InvalidPartition(PartitionDefect::Repeated { value }));
                    }
                    return Err(Error::InvalidPartition(PartitionDefect::OutOfOrder { index }));
                }
            }
            let part = u32::try_from(value)
                .map_err(|_| Error::InvalidPartition(PartitionDefect::TooLarge { value }))?;
            weight += u64::from(part);
            out.push(part);
        }
        Ok(Self { parts: out, weight })
    }

    /// Builds a partition from parts already known to be strictly
    /// decreasing and positive. Checked in debug builds only.
    pub(crate) fn from_decreasing_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] > w[1]));
        debug_assert!(parts.last().is_none_or(|&p| p >= 1));
        let weight = parts.iter().map(|&p| u64::from(p)).sum();
        Self { parts, weight }
    }

    /// Parts from largest to smallest.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// Number of parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, or 0 for the empty partition.
    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `X_k`: 1 if `k` is a part, 0 otherwise.
    pub fn multiplicity(&self, k: u64) -> u8 {
        let Ok(k) = u32::try_from(k) else { return 0 };
        // parts are decreasing, so search with reversed ordering
        u8::from(self.parts.binary_search_by(|p| k.cmp(p)).is_ok())
    }

    /// Dense multiplicity vector indexed by part size, `X_0..=X_{λ_1}`.
    pub fn multiplicities(&self) -> Vec<u8> {
        let mut x = vec![0u8; self.largest() as usize + 1];
        for &p in &self.parts {
            x[p as usize] = 1;
        }
        x
    }

    /// S(λ) = Σ 1/λ_j, accumulated from the largest part down with
    /// Neumaier-compensated summation.
    pub fn reciprocal_sum(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for &p in &self.parts {
            acc.add(1.0 / f64::from(p));
        }
        acc.value()
    }

    /// S(λ) as an exact rational.
    pub fn reciprocal_sum_exact(&self) -> BigRational {
        let mut s = BigRational::zero();
        for &p in &self.parts {
            s += BigRational::new(BigInt::from(1), BigInt::from(p));
        }
        s
    }

    /// `2 S(λ) − log √(3n)`.
    ///
    /// Callers pass the realized weight for free Boltzmann samples and the
    /// target size for exact-size samples.
    pub fn centered_statistic(&self, n: u64) -> Result<f64> {
        centered(self.reciprocal_sum(), n)
    }

    /// φ_λ(t): the number of parts of size at most `t`.
    pub fn shape_function(&self, t: f64) -> usize {
        if t.is_nan() || t < 1.0 {
            return 0;
        }
        // parts ≤ t form a suffix of the decreasing list
        self.parts.len() - self.parts.partition_point(|&p| f64::from(p) > t)
    }

    /// Reciprocal sums over the small `[1, k_n]`, medium `(k_n, K_n]` and
    /// large `(K_n, n]` part ranges.
    pub fn range_sums(&self, n: u64) -> Result<RangeSums> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        let largest = self.largest();
        if u64::from(largest) > n {
            return Err(Error::PartExceedsSize { part: largest, n });
        }
        let th = RangeThresholds::new(n)?;
        let (mut small, mut medium, mut large) =
            (CompensatedSum::default(), CompensatedSum::default(), CompensatedSum::default());
        for &p in &self.parts {
            let r = 1.0 / f64::from(p);
            let p = u64::from(p);
            if p <= th.small {
                small.add(r);
            } else if p <= th.large {
                medium.add(r);
            } else {
                large.add(r);
            }
        }
        Ok(RangeSums { small: small.value(), medium: medium.value(), large: large.value() })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// `2s − log √(3n)` for an already computed reciprocal sum `s`.
pub fn centered(s: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(2.0 * s - half_log_3n(n))
}

/// log √(3n).
pub fn half_log_3n(n: u64) -> f64 {
    0.5 * (3.0 * n as f64).ln()
}

/// Per-range reciprocal sums returned by [`Partition::range_sums`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSums {
    pub small: f64,
    pub medium: f64,
    pub large: f64,
}

impl RangeSums {
    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        acc.add(self.large);
        acc.add(self.medium);
        acc.add(self.small);
        acc.value()
    }
}

/// The range split points `k_n = ⌊n^{1/5}⌋` and `K_n = ⌊n^{1/3}⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeThresholds {
    /// k_n
    pub small: u64,
    /// K_n
    pub large: u64,
}

impl RangeThresholds {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Self { small: integer_root(n, 5), large: integer_root(n, 3) })
    }
}

/// ⌊n^{1/k}⌋ computed exactly.
pub fn integer_root(n: u64, k: u32) -> u64 {
    assert!(k >= 1, "root index must be positive");
    if n < 2 || k == 1 {
        return n;
    }
    let fits = |r: u64| r.checked_pow(k).is_some_and(|v| v <= n);
    let mut r = (n as f64).powf(1.0 / f64::from(k)) as u64;
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(parts: &[i64]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(p(&[]).weight(), 0);
        assert_eq!(p(&[3, 2, 1]).weight(), 6);
        assert_eq!(p(&[3, 2, 1]).len(), 3);
    }

    #[test]
    fn rejects_repeated_parts() {
        let err = Partition::from_parts(&[2, 2, 1]).unwrap_err();
        assert!(err.to_string().contains("repeated part"), "{err}");
        let err = Partition::from_parts(&[3, 1, 3]).unwrap_err();
        assert!(err.to_string().contains("repeated part"), "{err}");
    }

    #[test]
    fn rejects_nonpositive_and_disorder() {
        assert!(matches!(
            Partition::from_parts(&[3, 0]),
            Err(Error::InvalidPartition(PartitionDefect::NonPositive { index: 1, value: 0 }))
        ));
        assert!(matches!(
            Partition::from_parts(&[-1]),
            Err(Error::InvalidPartition(PartitionDefect::NonPositive { .. }))
        ));
        assert!(matches!(
            Partition::from_parts(&[1, 2]),
            Err(Error::InvalidPartition(PartitionDefect::OutOfOrder { index: 1 }))
        ));
    }

    #[test]
    fn reciprocal_sums() {
        assert_eq!(p(&[]).reciprocal_sum(), 0.0);
        assert_eq!(p(&[1]).reciprocal_sum(), 1.0);
        assert_abs_diff_eq!(p(&[3, 2, 1]).reciprocal_sum(), 11.0 / 6.0, epsilon = 1e-15);
        assert_eq!(
            p(&[3, 2, 1]).reciprocal_sum_exact(),
            BigRational::new(BigInt::from(11), BigInt::from(6))
        );
    }

    #[test]
    fn centered_values() {
        assert_abs_diff_eq!(p(&[2, 1]).centered_statistic(3).unwrap(), 1.901_387_711_331_7, epsilon = 1e-12);
        assert_abs_diff_eq!(p(&[1]).centered_statistic(1).unwrap(), 1.450_693_855_665_9, epsilon = 1e-12);
        assert_abs_diff_eq!(p(&[]).centered_statistic(1).unwrap(), -0.549_306_144_334_1, epsilon = 1e-12);
        assert!(matches!(p(&[1]).centered_statistic(0), Err(Error::ZeroSize)));
    }

    #[test]
    fn shape_function_steps() {
        let lam = p(&[5, 3, 1]);
        assert_eq!(lam.shape_function(0.0), 0);
        assert_eq!(lam.shape_function(0.999), 0);
        assert_eq!(lam.shape_function(1.0), 1);
        assert_eq!(lam.shape_function(3.0), 2);
        assert_eq!(lam.shape_function(4.5), 2);
        assert_eq!(lam.shape_function(100.0), 3);
    }

    #[test]
    fn multiplicities() {
        let lam = p(&[5, 3, 1]);
        assert_eq!(lam.multiplicities(), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(lam.multiplicity(3), 1);
        assert_eq!(lam.multiplicity(4), 0);
        assert_eq!(lam.multiplicity(u64::MAX), 0);
    }

    #[test]
    fn range_split_at_100() {
        let th = RangeThresholds::new(100).unwrap();
        assert_eq!((th.small, th.large), (2, 4));
        let r = p(&[90, 6, 3, 1]).range_sums(100).unwrap();
        assert_abs_diff_eq!(r.small, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.medium, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.large, 1.0 / 6.0 + 1.0 / 90.0, epsilon = 1e-15);
    }

    #[test]
    fn range_edge_cases() {
        let r = p(&[]).range_sums(10).unwrap();
        assert_eq!((r.small, r.medium, r.large), (0.0, 0.0, 0.0));
        let r = p(&[1]).range_sums(1).unwrap();
        assert_eq!((r.small, r.medium, r.large), (1.0, 0.0, 0.0));
        assert!(matches!(p(&[11]).range_sums(10), Err(Error::PartExceedsSize { part: 11, n: 10 })));
    }

    #[test]
    fn integer_roots_at_perfect_powers() {
        assert_eq!(integer_root(32, 5), 2);
        assert_eq!(integer_root(31, 5), 1);
        assert_eq!(integer_root(243, 5), 3);
        assert_eq!(integer_root(242, 5), 2);
        assert_eq!(integer_root(1_000_000, 3), 100);
        assert_eq!(integer_root(999_999, 3), 99);
        assert_eq!(integer_root(100_000, 5), 10);
        assert_eq!(integer_root(99_999, 5), 9);
        assert_eq!(integer_root(u64::MAX, 3), 2_642_245);
        for n in 1..5000u64 {
            let r = integer_root(n, 3);
            assert!(r.pow(3) <= n && (r + 1).pow(3) > n);
        }
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let acc: CompensatedSum = xs.into_iter().collect();
        assert_eq!(acc.value(), 2.0);
    }
}
