//! Reciprocal sums of random partitions into distinct parts.
//!
//! For a uniform random partition λ of n into distinct parts, the sum
//! `S(λ) = Σ 1/λ_j` satisfies `2S − ½ln(3n) → H` in distribution, where
//! `H = Σ ε_k/k` is the random harmonic sum with independent fair signs.
//!
//! The crate provides exact counting and enumeration ([`exact`]), a
//! Boltzmann sampler with exact-size rejection ([`sampler`]), the density
//! and CDF of `H` ([`harmonic`]), the deterministic constants around the
//! limit ([`asymptotics`]) and a reproducible experiment harness
//! ([`experiments`]).

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod harmonic;
pub mod partition;
pub mod plot;
pub mod quad;
pub mod sampler;
pub mod special;
pub mod stats;
pub mod stream;

pub use error::{Error, PartitionDefect, Result};
pub use partition::{Partition, RangeSums, RangeThresholds};
pub use sampler::{BoltzmannSampler, Mode, SampleBatch, SamplerConfig};
