//! Exact counting, enumeration and unranking of distinct-parts partitions.
//!
//! Everything here is brute-force ground truth for small sizes: the
//! Monte Carlo experiments are checked against these tables.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{centered, Partition};

/// Default cap for [`count_d`].
pub const COUNT_CAP: u64 = 20_000;
/// Cap for [`enumerate`] and [`exact_statistic_distribution`].
pub const ENUMERATION_CAP: u64 = 80;
/// Cap for the two-dimensional [`CountTable`].
pub const TABLE_CAP: u64 = 1_000;

/// d(n), the number of partitions of `n` into distinct parts.
pub fn count_d(n: u64) -> Result<BigUint> {
    count_d_with_cap(n, COUNT_CAP)
}

pub fn count_d_with_cap(n: u64, cap: u64) -> Result<BigUint> {
    if n > cap {
        return Err(Error::CapExceeded { what: "count_d", n, cap });
    }
    Ok(distinct_parts_series(n as usize).pop().expect("series has n + 1 terms"))
}

/// Coefficients of Π_{k≥1} (1 + q^k) up to and including q^order.
pub fn distinct_parts_series(order: usize) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::zero(); order + 1];
    coeffs[0] = BigUint::one();
    for k in 1..=order {
        // multiply by (1 + q^k), high degrees first so each factor is used once
        for m in (k..=order).rev() {
            let (lo, hi) = coeffs.split_at_mut(m);
            hi[0] += &lo[m - k];
        }
    }
    coeffs
}

/// Natural log of a big integer (−∞ for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value converts");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `c[m][j]`: the number of distinct-parts partitions of `m` with every
/// part at most `j`.
///
/// Built once by the recurrence `c[m][j] = c[m][j−1] + c[m−j][j−1]`;
/// read-only afterwards.
#[derive(Debug, Clone)]
pub struct CountTable {
    max: u64,
    // row m holds j = 0..=m; c[m][j] = c[m][m] for j > m
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn new(max: u64) -> Result<Self> {
        if max > TABLE_CAP {
            return Err(Error::CapExceeded { what: "count table", n: max, cap: TABLE_CAP });
        }
        let size = max as usize;
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(size + 1);
        for m in 0..=size {
            let mut row = Vec::with_capacity(m + 1);
            row.push(if m == 0 { BigUint::one() } else { BigUint::zero() });
            for j in 1..=m {
                let without: &BigUint = &row[j - 1];
                let rest = m - j;
                let with = &rows[rest][(j - 1).min(rest)];
                let value = without + with;
                row.push(value);
            }
            rows.push(row);
        }
        Ok(Self { max, rows })
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    /// `c[m][j]`.
    pub fn count(&self, m: u64, j: u64) -> &BigUint {
        assert!(m <= self.max, "m = {m} outside table of size {}", self.max);
        let row = &self.rows[m as usize];
        &row[j.min(m) as usize]
    }

    /// d(n) = c[n][n].
    pub fn d(&self, n: u64) -> &BigUint {
        self.count(n, n)
    }

    /// The `rank`-th partition of `n` in the order produced by [`enumerate`].
    ///
    /// Walks the recurrence from the largest admissible part down: partitions
    /// that use part `j` come before those that do not.
    pub fn unrank(&self, n: u64, rank: &BigUint) -> Result<Partition> {
        if n > self.max {
            return Err(Error::CapExceeded { what: "unrank", n, cap: self.max });
        }
        let total = self.d(n);
        if rank >= total {
            return Err(Error::RankOutOfRange {
                n,
                rank: rank.to_string(),
                count: total.to_string(),
            });
        }
        let mut rank = rank.clone();
        let mut parts = Vec::new();
        let (mut m, mut j) = (n, n);
        while m > 0 {
            // invariant: 1 <= j <= m and rank < c[m][j]
            let with_j = self.count(m - j, j - 1);
            if rank < *with_j {
                parts.push(j as u32);
                m -= j;
            } else {
                rank -= with_j;
            }
            j = (j - 1).min(m);
        }
        Ok(Partition::from_decreasing_unchecked(parts))
    }

    /// A uniformly random partition of `n`, drawn by unranking a uniform rank.
    pub fn sample_uniform<R: RngCore + ?Sized>(&self, n: u64, rng: &mut R) -> Result<Partition> {
        if n > self.max {
            return Err(Error::CapExceeded { what: "unrank", n, cap: self.max });
        }
        let rank = uniform_below(self.d(n), rng);
        self.unrank(n, &rank)
    }
}

/// Uniform integer in `[0, bound)` by rejection on random bits.
fn uniform_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let excess = words as u64 * 32 - bits;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top >>= excess;
        }
        let candidate = BigUint::new(digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// All distinct-parts partitions of `n`, lexicographically decreasing
/// (`[4]` before `[3, 1]`).
pub fn enumerate(n: u64) -> Result<Enumerate> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "enumerate", n, cap: ENUMERATION_CAP });
    }
    Ok(Enumerate { n, next: Some(if n == 0 { Vec::new() } else { vec![n as u32] }) })
}

/// Iterator returned by [`enumerate`].
#[derive(Debug, Clone)]
pub struct Enumerate {
    n: u64,
    next: Option<Vec<u32>>,
}

impl Enumerate {
    /// Lexicographic successor: lower the rightmost part that can be lowered,
    /// then refill greedily with the largest admissible parts.
    fn successor(&self, parts: &[u32]) -> Option<Vec<u32>> {
        let mut prefix_sum: u64 = parts.iter().map(|&p| u64::from(p)).sum();
        for i in (0..parts.len()).rev() {
            prefix_sum -= u64::from(parts[i]);
            let v = u64::from(parts[i]) - 1;
            if v == 0 {
                continue;
            }
            let remainder = self.n - prefix_sum - v;
            if remainder > v * (v - 1) / 2 {
                continue;
            }
            let mut out = parts[..i].to_vec();
            out.push(v as u32);
            let (mut r, mut bound) = (remainder, v - 1);
            while r > 0 {
                let c = r.min(bound);
                out.push(c as u32);
                r -= c;
                bound = c - 1;
            }
            return Some(out);
        }
        None
    }
}

impl Iterator for Enumerate {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = self.successor(&current);
        Some(Partition::from_decreasing_unchecked(current))
    }
}

/// One atom of an [`ExactDistribution`].
#[derive(Debug, Clone, Serialize)]
pub struct ExactAtom {
    /// Value of the centered statistic `2S − log √(3n)`.
    pub value: f64,
    /// S as an exact rational, the key used for merging ties.
    #[serde(serialize_with = "serialize_rational")]
    pub reciprocal_sum: BigRational,
    /// Number of partitions of `n` at this atom.
    pub count: u64,
}

fn serialize_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Law of `2S − log √(3n)` under the uniform measure on partitions of `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ExactDistribution {
    pub n: u64,
    /// d(n); every atom's probability is `count / total`.
    pub total: u64,
    /// Atoms in increasing order of value.
    pub atoms: Vec<ExactAtom>,
}

impl ExactDistribution {
    pub fn probability(&self, atom: &ExactAtom) -> f64 {
        atom.count as f64 / self.total as f64
    }

    /// Sum of atom probabilities as an exact rational (always 1).
    pub fn total_probability(&self) -> BigRational {
        let num: BigUint = self.atoms.iter().map(|a| BigUint::from(a.count)).sum();
        BigRational::new(num.into(), BigUint::from(self.total).into())
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        let below: u64 = self.atoms.iter().take_while(|a| a.value <= x).map(|a| a.count).sum();
        below as f64 / self.total as f64
    }
}

/// Exact law of the centered statistic over all partitions of `n`.
pub fn exact_statistic_distribution(n: u64) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let mut merged: BTreeMap<BigRational, (f64, u64)> = BTreeMap::new();
    let mut total = 0u64;
    for p in enumerate(n)? {
        total += 1;
        let s = p.reciprocal_sum_exact();
        let value = centered(p.reciprocal_sum(), n)?;
        merged.entry(s).or_insert((value, 0)).1 += 1;
    }
    let atoms = merged
        .into_iter()
        .map(|(reciprocal_sum, (value, count))| ExactAtom { value, reciprocal_sum, count })
        .collect();
    Ok(ExactDistribution { n, total, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parts_of(it: impl Iterator<Item = Partition>) -> Vec<Vec<u32>> {
        it.map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_d(0).unwrap(), BigUint::from(1u32));
        assert_eq!(count_d(5).unwrap(), BigUint::from(3u32));
        assert_eq!(count_d(10).unwrap(), BigUint::from(10u32));
        assert_eq!(count_d(100).unwrap(), BigUint::from(444_793u32));
        assert!(matches!(count_d(COUNT_CAP + 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(parts_of(enumerate(4).unwrap()), vec![vec![4], vec![3, 1]]);
        assert_eq!(parts_of(enumerate(1).unwrap()), vec![vec![1]]);
        assert_eq!(parts_of(enumerate(2).unwrap()), vec![vec![2]]);
        assert_eq!(parts_of(enumerate(0).unwrap()), vec![Vec::<u32>::new()]);
        assert_eq!(
            parts_of(enumerate(7).unwrap()),
            vec![vec![7], vec![6, 1], vec![5, 2], vec![4, 3], vec![4, 2, 1]]
        );
        assert!(matches!(enumerate(81), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_is_strictly_decreasing_lex() {
        let all = parts_of(enumerate(30).unwrap());
        assert!(all.windows(2).all(|w| w[0] > w[1]));
        assert!(all.iter().all(|p| p.iter().map(|&x| x as u64).sum::<u64>() == 30));
    }

    #[test]
    fn table_recurrence() {
        let t = CountTable::new(60).unwrap();
        for m in 0..=60 {
            assert_eq!(t.count(0, m), &BigUint::one());
            assert_eq!(t.d(m), &count_d(m).unwrap());
        }
    }

    #[test]
    fn unrank_examples() {
        let t = CountTable::new(10).unwrap();
        let a = t.unrank(4, &BigUint::from(0u32)).unwrap();
        let b = t.unrank(4, &BigUint::from(1u32)).unwrap();
        assert_eq!(a.parts(), &[4]);
        assert_eq!(b.parts(), &[3, 1]);
        assert_eq!(t.unrank(1, &BigUint::zero()).unwrap().parts(), &[1]);
        assert!(matches!(t.unrank(4, &BigUint::from(2u32)), Err(Error::RankOutOfRange { .. })));
        assert_eq!(t.unrank(0, &BigUint::zero()).unwrap(), Partition::empty());
    }

    #[test]
    fn unrank_matches_enumeration_order() {
        let t = CountTable::new(40).unwrap();
        for n in 0..=40u64 {
            let listed = parts_of(enumerate(n).unwrap());
            let d = t.d(n).to_u64().unwrap();
            let unranked: Vec<Vec<u32>> =
                (0..d).map(|r| t.unrank(n, &BigUint::from(r)).unwrap().parts().to_vec()).collect();
            assert_eq!(listed, unranked, "n = {n}");
        }
    }

    #[test]
    fn uniform_rank_sampling_stays_in_range() {
        let t = CountTable::new(200).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let p = t.sample_uniform(200, &mut rng).unwrap();
            assert_eq!(p.weight(), 200);
        }
    }

    #[test]
    fn exact_distribution_small_cases() {
        let d1 = exact_statistic_distribution(1).unwrap();
        assert_eq!(d1.atoms.len(), 1);
        assert!((d1.atoms[0].value - (2.0 - 0.5 * 3f64.ln())).abs() < 1e-12);

        let d3 = exact_statistic_distribution(3).unwrap();
        let ss: Vec<String> = d3.atoms.iter().map(|a| a.reciprocal_sum.to_string()).collect();
        assert_eq!(ss, vec!["1/3", "3/2"]);
        assert!(d3.atoms.iter().all(|a| a.count == 1) && d3.total == 2);

        let d4 = exact_statistic_distribution(4).unwrap();
        let c = 0.5 * 12f64.ln();
        assert!((d4.atoms[0].value - (0.5 - c)).abs() < 1e-12);
        assert!((d4.atoms[1].value - (8.0 / 3.0 - c)).abs() < 1e-12);
        assert_eq!(d4.total_probability(), BigRational::one());
    }

    #[test]
    fn ties_are_merged_exactly() {
        // e.g. 1/6 + 1/3 = 1/2, so [6, 3, ...] and [2, ...] style coincidences occur
        let mut found = false;
        for n in 10..=40 {
            let dist = exact_statistic_distribution(n).unwrap();
            assert_eq!(dist.total_probability(), BigRational::one());
            let d = count_d(n).unwrap().to_u64().unwrap();
            assert_eq!(dist.total, d);
            if (dist.atoms.len() as u64) < d {
                found = true;
            }
            for w in dist.atoms.windows(2) {
                assert!(w[0].reciprocal_sum < w[1].reciprocal_sum);
            }
        }
        assert!(found, "expected at least one coincidence of reciprocal sums");
    }

    #[test]
    fn log_of_big_counts() {
        let d = count_d(100).unwrap();
        assert!((ln_biguint(&d) - 444_793f64.ln()).abs() < 1e-12);
        let big = BigUint::one() << 3000u32;
        assert!((ln_biguint(&big) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
