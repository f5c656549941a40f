//! The generic evolutionary loop.

use crate::checkpoint::Checkpoint;
use crate::continuator::Continuator;
use crate::error::{Error, Result};
use crate::eval::{evaluate_population_unlimited, parallel_evaluate, EvalCounter};
use crate::rng::RngStream;
use crate::solution::{Population, Solution};

use super::replacement::{replace, Replacement};
use super::selection::{select_many, Selection};
use super::variation::{apply_crossover, Mutation, QuadOp};
use super::MAX_IDLE_GENERATIONS;

/// Produces offspring from a set of parents. This is the "variation" stage of
/// the loop; implicit operators (crossover, mutation) and explicit ones
/// (estimate a model, then sample it) both fit here.
pub trait Breed<G> {
    fn breed(
        &mut self,
        parents: &[Solution<G>],
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, G>,
    ) -> Result<Population<G>>;
}

/// Classic pipeline: parents are copied in order (cycling if needed),
/// consecutive pairs cross over with probability `crossover_rate`, then each
/// child mutates with probability `mutation_rate`.
pub struct VariationPipeline<G> {
    pub crossover: Option<(Box<dyn QuadOp<G>>, f64)>,
    pub mutation: Option<(Box<dyn Mutation<G>>, f64)>,
    pub offspring: usize,
}

impl<G: Clone> Breed<G> for VariationPipeline<G> {
    fn breed(
        &mut self,
        parents: &[Solution<G>],
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, G>,
    ) -> Result<Population<G>> {
        if parents.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let mut children: Population<G> = (0..self.offspring)
            .map(|i| parents[i % parents.len()].clone())
            .collect();
        if let Some((op, rate)) = &mut self.crossover {
            for pair in children.chunks_mut(2) {
                if let [a, b] = pair {
                    if rng.coin(*rate) {
                        apply_crossover(op.as_mut(), a, b, rng)?;
                    }
                }
            }
        }
        if let Some((op, rate)) = &mut self.mutation {
            for child in &mut children {
                if rng.coin(*rate) {
                    op.mutate(child, rng, evals)?;
                }
            }
        }
        Ok(children)
    }
}

/// Slots of the generic loop: initialize and evaluate, then repeat
/// select, breed, evaluate, replace, checkpoint and continue-check.
pub struct EvolutionaryAlgorithm<G> {
    pub pop_size: usize,
    /// Parent selection and how many parents to draw; `None` hands the whole
    /// population to the breeder.
    pub selection: Option<(Selection, usize)>,
    pub breeder: Box<dyn Breed<G>>,
    pub replacement: Replacement,
    pub continuator: Continuator,
    pub workers: usize,
}

/// Build an initial population of `size` invalid solutions.
pub fn initialize<G>(
    size: usize,
    rng: &mut RngStream,
    init: &mut dyn FnMut(&mut RngStream) -> G,
) -> Population<G> {
    (0..size).map(|_| Solution::new(init(rng))).collect()
}

impl<G: Clone + Send + Sync> EvolutionaryAlgorithm<G> {
    /// Initialize a population with `init` and run to completion.
    pub fn run(
        &mut self,
        init: &mut dyn FnMut(&mut RngStream) -> G,
        evals: &mut EvalCounter<'_, G>,
        rng: &mut RngStream,
        checkpoint: Option<&mut Checkpoint<G>>,
    ) -> Result<Population<G>> {
        let pop = initialize(self.pop_size, rng, init);
        self.run_from(pop, evals, rng, checkpoint)
    }

    /// Run from a given population. Invalid members are evaluated first,
    /// regardless of the counter's limit.
    pub fn run_from(
        &mut self,
        mut pop: Population<G>,
        evals: &mut EvalCounter<'_, G>,
        rng: &mut RngStream,
        mut checkpoint: Option<&mut Checkpoint<G>>,
    ) -> Result<Population<G>> {
        evaluate_population_unlimited(&mut pop, evals)?;
        if let Some(cp) = checkpoint.as_deref_mut() {
            cp.call(&pop, evals);
        }
        let dir = evals.direction();
        let mut idle = 0;
        while self.continuator.should_continue(&pop, evals)
            && !evals.exhausted()
            && idle < MAX_IDLE_GENERATIONS
        {
            let before = evals.count() + evals.incremental_count();
            let parents: Population<G> = match &self.selection {
                Some((sel, count)) => select_many(sel, &pop, *count, dir, rng)?
                    .into_iter()
                    .map(|i| pop[i].clone())
                    .collect(),
                None => pop.clone(),
            };
            let mut offspring = match self.breeder.breed(&parents, rng, evals) {
                Err(Error::BudgetExhausted { .. }) => break,
                other => other?,
            };
            match parallel_evaluate(&mut offspring, evals, self.workers) {
                Err(Error::BudgetExhausted { .. }) => break,
                other => other?,
            };
            pop = replace(self.replacement, pop, offspring, self.pop_size, dir)?;
            idle = if evals.count() + evals.incremental_count() == before {
                idle + 1
            } else {
                0
            };
            if let Some(cp) = checkpoint.as_deref_mut() {
                cp.call(&pop, evals);
            }
        }
        Ok(pop)
    }
}
