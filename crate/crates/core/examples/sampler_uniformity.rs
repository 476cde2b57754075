//! Exact-size sampling against the uniform law on all partitions of 20.

use distinct_parts::experiments::{sampler_uniformity_experiment, RunOptions};
use distinct_parts::Mode;

fn main() -> distinct_parts::Result<()> {
    let run = sampler_uniformity_experiment(RunOptions::new(20, 64_000, 42, Mode::Exact))?;
    let r = &run.report;
    println!(
        "chi-square {:.2}, TV {:.4} (unranking control: TV {:.4}) -> {}",
        r.metric("chi_square").unwrap(),
        r.metric("tv").unwrap(),
        r.metric("tv_control").unwrap(),
        if r.pass { "pass" } else { "fail" }
    );
    for row in run.table.rows.iter().take(5) {
        println!("  {}", row.join("  "));
    }
    Ok(())
}
