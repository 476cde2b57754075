//! Command-line front end: one subcommand per experiment or oracle.
//!
//! Exit status: 0 when the run passes, 1 when an experiment misses its
//! thresholds, 2 on usage errors, 3 when the rejection budget runs out.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use distinct_parts::exact::{count_d, exact_statistic_distribution};
use distinct_parts::experiments::{self, ExperimentRun, RunOptions, SampleTable};
use distinct_parts::harmonic::HModelConfig;
use distinct_parts::{Error, Mode};

#[derive(Parser)]
#[command(name = "dparts", version, about = "Reciprocal sums of random partitions into distinct parts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw partitions and dump them.
    Sample(Common),
    /// Count partitions of n exactly, optionally with the law of 2S − log √(3n).
    Exact {
        #[arg(long)]
        n: u64,
        /// Include the full distribution of the centered statistic.
        #[arg(long)]
        distribution: bool,
        #[command(flatten)]
        out: Outputs,
    },
    /// KS distance between the centered statistic and H.
    Theorem(Common),
    /// Concentration of the medium and large part-size ranges.
    Ranges(Common),
    /// Small parts against the exact sign-sum law.
    Smallparts(Common),
    /// Rescaled Young diagrams against the limit shape.
    Shape {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Density and CDF of H by Fourier inversion, checked by Monte Carlo.
    Density {
        #[command(flatten)]
        common: Common,
        /// Cosine factors kept exactly in the characteristic function.
        #[arg(long, default_value_t = 200)]
        terms: u64,
        /// Dump the CDF instead of the density to --csv.
        #[arg(long)]
        cdf: bool,
    },
    /// Chi-square uniformity of exact-size sampling (n ≤ 24).
    Uniformity(Common),
    /// The deterministic constants and the Mellin cross-check.
    Constants {
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Args)]
struct Outputs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write per-sample rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a figure as SVG, where the subcommand has one.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    n: Option<u64>,
    /// Number of samples M.
    #[arg(long)]
    count: Option<usize>,
    /// Random seed; chosen from the clock and recorded when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Exact-mode attempts allowed per draw (default 10^7).
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    out: Outputs,
}

impl Common {
    fn options(&self, default_n: u64, default_count: usize, default_mode: Mode) -> RunOptions {
        let seed = self.seed.unwrap_or_else(|| {
            let seed = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64);
            eprintln!("seed {seed} (auto)");
            seed
        });
        RunOptions::new(
            self.n.unwrap_or(default_n),
            self.count.unwrap_or(default_count),
            seed,
            self.mode.unwrap_or(default_mode),
        )
        .with_workers(self.workers)
        .with_rejection_budget(self.budget)
    }
}

#[derive(Serialize)]
struct ExactSummary {
    n: u64,
    count: String,
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (run, out) = match &cli.command {
        Command::Sample(c) => (experiments::sample_experiment(c.options(100, 10, Mode::Free))?, &c.out),
        Command::Theorem(c) => (experiments::theorem_experiment(c.options(2000, 10_000, Mode::Free))?, &c.out),
        Command::Ranges(c) => (experiments::range_experiment(c.options(100_000, 1000, Mode::Free))?, &c.out),
        Command::Smallparts(c) => {
            (experiments::small_parts_experiment(c.options(4000, 100_000, Mode::Exact))?, &c.out)
        }
        Command::Shape { common, delta } => {
            (experiments::limit_shape_experiment(common.options(1000, 100, Mode::Free), *delta)?, &common.out)
        }
        Command::Uniformity(c) => {
            (experiments::sampler_uniformity_experiment(c.options(20, 64_000, Mode::Exact))?, &c.out)
        }
        Command::Density { common, terms, cdf } => {
            if *terms == 0 {
                return Err(Error::InvalidConfig("--terms must be at least 1".into()));
            }
            let opts = common.options(0, 1_000_000, Mode::Free);
            let mut run =
                experiments::harmonic_model_experiment(&HModelConfig::with_terms(*terms), opts.count, opts.seed, opts.workers)?;
            run.table = keep_columns(&run.table, if *cdf { "cdf" } else { "density" });
            (run, &common.out)
        }
        Command::Constants { out } => (experiments::constants_experiment()?, out),
        Command::Exact { n, distribution, out } => return exact(*n, *distribution, out),
    };
    emit(&run, out)?;
    let r = &run.report;
    eprintln!("{}: {} ({:.2} s)", r.name, if r.pass { "pass" } else { "FAIL" }, r.seconds);
    for m in r.failures() {
        eprintln!("  {m} = {} violates {:?}", r.metrics.get(m).copied().unwrap_or(f64::NAN), r.thresholds[m]);
    }
    Ok(r.pass)
}

fn keep_columns(table: &SampleTable, column: &str) -> SampleTable {
    let idx = table.headers.iter().position(|h| h == column).expect("column exists");
    SampleTable {
        headers: vec![table.headers[0].clone(), column.to_owned()],
        rows: table.rows.iter().map(|r| vec![r[0].clone(), r[idx].clone()]).collect(),
    }
}

fn emit(run: &ExperimentRun, out: &Outputs) -> Result<(), Error> {
    match &out.json {
        Some(path) => run.report.write_json(path)?,
        None => println!("{}", run.report.to_json()?),
    }
    if let Some(path) = &out.csv {
        run.table.write_csv_file(path)?;
    }
    if let Some(path) = &out.svg {
        match run.svg()? {
            Some(svg) => std::fs::write(path, svg)?,
            None => return Err(Error::InvalidConfig(format!("{} has no figure", run.report.name))),
        }
    }
    Ok(())
}

fn exact(n: u64, distribution: bool, out: &Outputs) -> Result<bool, Error> {
    if out.svg.is_some() {
        return Err(Error::InvalidConfig("exact has no figure".into()));
    }
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let summary = ExactSummary { n, count: count_d(n)?.to_string() };
    let json = serde_json::to_string_pretty(&summary)?;
    match &out.json {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    if distribution || out.csv.is_some() {
        let d = exact_statistic_distribution(n)?;
        let mut table = SampleTable {
            headers: ["value", "probability_numerator", "probability_denominator"].map(String::from).to_vec(),
            rows: Vec::new(),
        };
        for atom in &d.atoms {
            let g = num_integer::gcd(atom.count, d.total);
            table.rows.push(vec![atom.value.to_string(), (atom.count / g).to_string(), (d.total / g).to_string()]);
        }
        match &out.csv {
            Some(path) => table.write_csv_file(path)?,
            None => table.write_csv(std::io::stdout())?,
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExhausted { .. } => 3,
                Error::NonConvergence(_) => 1,
                _ => 2,
            })
        }
    }
}
