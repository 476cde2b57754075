//! Statistical checks of the samplers against exact laws.

use std::collections::HashMap;

use distinct_parts::exact::{enumerate, CountTable};
use distinct_parts::experiments::{theorem_experiment, RunOptions};
use distinct_parts::sampler::{inclusion_probability, log_inverse_parameter};
use distinct_parts::stats::total_variation_uniform;
use distinct_parts::{BoltzmannSampler, Mode, SamplerConfig};

/// |observed − p| within five binomial standard errors.
fn assert_frequency(hits: usize, trials: usize, p: f64, what: &str) {
    let f = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((f - p).abs() <= 5.0 * se, "{what}: frequency {f} vs {p} (se {se})");
}

#[test]
fn free_inclusion_marginals() {
    let n = 1000;
    let m = 100_000;
    let batch = BoltzmannSampler::new(SamplerConfig::free(n, 11)).unwrap().sample_batch(m, None).unwrap();
    let c = log_inverse_parameter(n).unwrap();
    for k in [1u64, 10, 50] {
        let hits = batch.partitions.iter().filter(|p| p.multiplicity(k) == 1).count();
        assert_frequency(hits, m, inclusion_probability(c, k), &format!("P(X_{k} = 1)"));
    }
}

#[test]
fn free_weight_is_near_target() {
    let n = 5000;
    let batch = BoltzmannSampler::new(SamplerConfig::free(n, 5)).unwrap().sample_batch(4000, None).unwrap();
    let mean = batch.partitions.iter().map(|p| p.weight() as f64).sum::<f64>() / 4000.0;
    // E|λ| = n + O(√n) at this parameter
    assert!((mean / n as f64 - 1.0).abs() < 0.02, "mean weight {mean}");
    assert_eq!(batch.attempts_used, 4000);
}

#[test]
fn exact_mode_is_uniform_for_small_n() {
    for n in [1u64, 2, 5, 9, 14, 20] {
        let all: Vec<Vec<u32>> = enumerate(n).unwrap().map(|p| p.parts().to_vec()).collect();
        let index: HashMap<&[u32], usize> = all.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let m = 2000 * all.len();
        let batch =
            BoltzmannSampler::new(SamplerConfig::exact(n, 100 + n)).unwrap().sample_batch(m, None).unwrap();
        let mut counts = vec![0u64; all.len()];
        for p in &batch.partitions {
            assert_eq!(p.weight(), n);
            counts[index[p.parts()]] += 1;
        }
        let tv = total_variation_uniform(&counts);
        assert!(tv <= 0.05, "n = {n}: TV {tv}");
    }
}

#[test]
fn completion_and_plain_rejection_agree() {
    // cutoff 0 is plain rejection; both must realize the same uniform law
    let n = 12;
    let d = enumerate(n).unwrap().count();
    for cutoff in [Some(0), Some(3), None] {
        let cfg = SamplerConfig { completion_cutoff: cutoff, ..SamplerConfig::exact(n, 77) };
        let batch = BoltzmannSampler::new(cfg).unwrap().sample_batch(1000 * d, None).unwrap();
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for p in &batch.partitions {
            *counts.entry(p.parts().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), d, "cutoff {cutoff:?}");
        let tv = total_variation_uniform(&counts.into_values().collect::<Vec<_>>());
        assert!(tv <= 0.05, "cutoff {cutoff:?}: TV {tv}");
    }
}

#[test]
fn small_part_indicators_are_nearly_independent_fair_coins() {
    let n = 4000;
    let m = 40_000;
    let batch = BoltzmannSampler::new(SamplerConfig::exact(n, 3)).unwrap().sample_batch(m, None).unwrap();
    let mut cells = [0usize; 16];
    for p in &batch.partitions {
        let idx = (1..=4u64).fold(0usize, |acc, k| acc | (usize::from(p.multiplicity(k)) << (k - 1)));
        cells[idx] += 1;
    }
    for (i, &c) in cells.iter().enumerate() {
        let f = c as f64 / m as f64;
        assert!((f - 1.0 / 16.0).abs() <= 0.02, "cell {i:04b}: {f}");
    }
}

#[test]
fn unrank_sampler_is_uniform() {
    let n = 15;
    let table = CountTable::new(n).unwrap();
    let all: Vec<Vec<u32>> = enumerate(n).unwrap().map(|p| p.parts().to_vec()).collect();
    let index: HashMap<&[u32], usize> = all.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let draws = distinct_parts::stream::parallel_draws(all.len() * 2000, 8, None, |rng| table.sample_uniform(n, rng))
        .unwrap();
    let mut counts = vec![0u64; all.len()];
    for p in &draws {
        counts[index[p.parts()]] += 1;
    }
    assert!(total_variation_uniform(&counts) <= 0.05);
}

#[test]
fn batches_do_not_depend_on_worker_count() {
    for mode in [Mode::Free, Mode::Exact] {
        let sampler = BoltzmannSampler::new(SamplerConfig::new(300, mode, 21)).unwrap();
        let a = sampler.sample_batch(500, Some(1)).unwrap();
        let b = sampler.sample_batch(500, Some(4)).unwrap();
        assert_eq!(a, b, "{mode}");
    }
}

#[test]
fn theorem_convergence_trend() {
    // paired seeds: the fit at n = 20000 is no worse than at n = 200, up to noise
    for seed in [1u64, 2, 3] {
        let ks = |n| {
            theorem_experiment(RunOptions::new(n, 5000, seed, Mode::Free)).unwrap().report.metric("ks").unwrap()
        };
        let (small, large) = (ks(200), ks(20_000));
        assert!(small >= large - 0.02, "seed {seed}: KS(200) = {small}, KS(20000) = {large}");
    }
}

#[test]
fn theorem_single_sample_report_is_well_formed() {
    let run = theorem_experiment(RunOptions::new(100, 1, 0, Mode::Exact)).unwrap();
    let ks = run.report.metric("ks").unwrap();
    assert!((0.0..=1.0).contains(&ks));
    assert_eq!(run.table.rows.len(), 1);
}
