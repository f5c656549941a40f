//! Population-based evolutionary operators and algorithm templates.

pub mod algorithm;
pub mod fastga;
pub mod replacement;
pub mod selection;
pub mod variation;

pub use algorithm::{initialize, Breed, EvolutionaryAlgorithm, VariationPipeline};
pub use fastga::FastGa;
pub use replacement::{replace, Replacement};
pub use selection::{select_many, select_one, Selection};
pub use variation::{
    apply_crossover, apply_mutation, mutate_bitflip_k, mutate_bitflip_rate, xover_kpoint,
    xover_uniform, BitflipK, BitflipRate, KPointCrossover, MonOp, Mutation, QuadOp,
    UniformCrossover, VariationResult,
};

use crate::rng::RngStream;

/// A run stops after this many consecutive generations that evaluated
/// nothing: with zero variation rates every child is an unchanged copy and
/// the budget would never be spent.
pub const MAX_IDLE_GENERATIONS: usize = 100;
use crate::solution::BitString;

/// Uniformly random bitstring of length `n`.
pub fn random_bits(n: usize, rng: &mut RngStream) -> BitString {
    (0..n).map(|_| rng.coin(0.5)).collect()
}
