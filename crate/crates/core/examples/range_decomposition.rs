//! Splitting 2S − log √(3n) over small, medium and large parts.

use distinct_parts::asymptotics::{bernoulli_range_stats, range_means};
use distinct_parts::experiments::{range_deviations, range_experiment, RunOptions};
use distinct_parts::stream::stream_rng;
use distinct_parts::{BoltzmannSampler, Mode, RangeThresholds, SamplerConfig};

fn main() -> distinct_parts::Result<()> {
    let n = 100_000;
    let th = RangeThresholds::new(n)?;
    let means = range_means(n)?;
    println!("k_n = {}, K_n = {}", th.small, th.large);
    println!("centerings: small {:.4}, medium {:.4}, large {:.4}, total {:.4}", means.small, means.medium, means.large, means.total);

    let sampler = BoltzmannSampler::new(SamplerConfig::free(n, 3))?;
    let p = sampler.sample_free(&mut stream_rng(3, 0));
    let d = range_deviations(&p, p.weight())?;
    println!("one draw (|λ| = {}): {d:?}", p.weight());

    let model = bernoulli_range_stats(n)?;
    println!("medium range: Bernoulli sd {:.3} against band {:.3}", model.variance.sqrt(), (n as f64).powf(-1.0 / 11.0));

    let run = range_experiment(RunOptions::new(n, 1000, 42, Mode::Free))?;
    println!("{}", run.report.to_json()?);
    Ok(())
}
