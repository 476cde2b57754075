//! Exact counting, enumeration, unranking and the exact law of 2S − log √(3n).
//!
//! cargo run --example exact_oracle -- 12

use distinct_parts::exact::{count_d, enumerate, exact_statistic_distribution, CountTable};
use num_bigint::BigUint;

fn main() -> distinct_parts::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(12, |a| a.parse().expect("n must be an integer"));

    println!("d({n}) = {}", count_d(n)?);
    for p in enumerate(n)? {
        println!("  {p}  S = {}", p.reciprocal_sum_exact());
    }

    let table = CountTable::new(n)?;
    println!("rank 0 -> {}", table.unrank(n, &BigUint::from(0u32))?);

    let law = exact_statistic_distribution(n)?;
    println!("{} atoms of 2S - log sqrt(3n):", law.atoms.len());
    for a in &law.atoms {
        println!("  {:>10.6}  {}/{}", a.value, a.count, law.total);
    }

    println!("d(1000) = {}", count_d(1000)?);
    Ok(())
}
