//! Free Boltzmann draws next to exact-size draws at the same parameter.

use distinct_parts::sampler::{expected_weight, weight_variance};
use distinct_parts::stream::stream_rng;
use distinct_parts::{BoltzmannSampler, SamplerConfig};

fn main() -> distinct_parts::Result<()> {
    let n = 500;
    let free = BoltzmannSampler::new(SamplerConfig::free(n, 7))?;
    let q = free.q();
    println!("n = {n}: q = {q:.6}, truncated at part {}", free.max_part());
    println!("E|λ| = {:.1}, sd = {:.1}", expected_weight(q), weight_variance(q).sqrt());

    let mut rng = stream_rng(7, 0);
    for _ in 0..3 {
        let p = free.sample_free(&mut rng);
        println!("free  |λ| = {:4}  {} parts, S = {:.4}", p.weight(), p.len(), p.reciprocal_sum());
    }

    let exact = BoltzmannSampler::new(SamplerConfig::exact(n, 7))?;
    let batch = exact.sample_batch(1000, None)?;
    println!(
        "exact: 1000 draws of weight {n} in {} attempts (small parts up to {} completed exactly)",
        batch.attempts_used,
        exact.completion_cutoff()
    );
    println!("first: {}", batch.partitions[0]);
    Ok(())
}
