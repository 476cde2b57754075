//! The centered statistic 2S − log √(3|λ|) against the law of H, with the
//! histogram written as SVG.
//!
//! cargo run --release --example theorem_histogram -- figure1.svg

use distinct_parts::experiments::{theorem_experiment, RunOptions};
use distinct_parts::Mode;

fn main() -> distinct_parts::Result<()> {
    let run = theorem_experiment(RunOptions::new(2000, 10_000, 42, Mode::Free))?;
    println!("{}", run.report.to_json()?);
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, run.svg()?.expect("theorem has a figure"))?;
        eprintln!("wrote {path}");
    }
    Ok(())
}
