//! Density and CDF of H = Σ ε_k/k by Fourier inversion, against Monte Carlo.

use distinct_parts::harmonic::{self, HModelConfig, HarmonicModel};
use distinct_parts::stats::ks_distance;

fn main() -> distinct_parts::Result<()> {
    let config = HModelConfig::default();
    let density = harmonic::density(&config)?;
    let cdf = harmonic::cdf(&config)?;
    println!("integral of g over [-6, 6] = {:.12}", density.integral());
    for x in [0.0, 0.5, 1.0, 2.0, 3.0] {
        println!("g({x}) = {:.8}   F({x}) = {:.8}", density.eval(x), cdf.eval(x));
    }

    // pointwise evaluation at a fixed resolution
    let model = HarmonicModel::with_panels(config, 8192)?;
    println!("g(0) at 8192 panels = {:.10}", model.density_at(0.0));

    let draws = harmonic::monte_carlo(2000, 200_000, 1, None)?;
    println!("KS(200000 draws, F) = {:.5}", ks_distance(&draws, &cdf));
    Ok(())
}
