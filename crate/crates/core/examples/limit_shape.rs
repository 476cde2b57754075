//! Rescaled Young diagrams against L(t) = A log(2 / (1 + e^{−t/A})).
//!
//! cargo run --release --example limit_shape -- figure2.svg

use distinct_parts::asymptotics::LimitShape;
use distinct_parts::experiments::{limit_shape_experiment, RunOptions};
use distinct_parts::Mode;

fn main() -> distinct_parts::Result<()> {
    let shape = LimitShape::default();
    for t in [0.5, 1.0, 2.0, 4.0] {
        println!("L({t}) = {:.6}", shape.value(t));
    }
    println!("L(inf) = {:.6}", shape.asymptote());

    for n in [500, 1000, 5000] {
        let run = limit_shape_experiment(RunOptions::new(n, 100, 42, Mode::Free), 0.1)?;
        let r = &run.report;
        println!(
            "n = {n:5}: mean sup deviation {:.4}, {:.0}% within n^(-1/4+0.1) = {:.3}",
            r.metric("mean_deviation").unwrap(),
            100.0 * r.metric("fraction_within").unwrap(),
            r.metric("bound").unwrap()
        );
        if n == 1000 {
            if let Some(path) = std::env::args().nth(1) {
                std::fs::write(&path, run.svg()?.expect("shape has a figure"))?;
            }
        }
    }
    Ok(())
}
