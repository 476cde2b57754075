//! Small parts against the exact law of Σ_{k≤k_n} ε_k/k.

use distinct_parts::experiments::{small_parts_experiment, RunOptions};
use distinct_parts::harmonic::sign_sum_law;
use distinct_parts::Mode;

fn main() -> distinct_parts::Result<()> {
    let law = sign_sum_law(5)?;
    println!("{} atoms for k_n = 5", law.values().len());
    for (i, v) in law.values().iter().enumerate().take(6) {
        println!("  {v:+.6}  p = {}", law.probability(i));
    }

    for (n, mode) in [(32, Mode::Exact), (4000, Mode::Exact), (4000, Mode::Free)] {
        let r = small_parts_experiment(RunOptions::new(n, 100_000, 42, mode))?.report;
        println!(
            "n = {n:4} {mode:5}: KS = {:.4} (log k_n + γ centering: {:.4})",
            r.metric("ks").unwrap(),
            r.metric("ks_log_gamma").unwrap()
        );
    }
    Ok(())
}
