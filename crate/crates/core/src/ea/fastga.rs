//! The FastGA template: a steady layout of crossover-or-copy followed by an
//! independent mutation coin, with every step a pluggable slot.

use crate::checkpoint::Checkpoint;
use crate::continuator::Continuator;
use crate::error::{Error, Result};
use crate::eval::{evaluate_population_unlimited, parallel_evaluate, EvalCounter};
use crate::rng::RngStream;
use crate::solution::{Direction, Population};

use super::replacement::{replace, Replacement};
use super::selection::{select_one, Selection};
use super::variation::{apply_crossover, Mutation, QuadOp};
use super::MAX_IDLE_GENERATIONS;

pub struct FastGa<G> {
    pub pop_size: usize,
    pub offspring_size: usize,
    pub crossover_rate: f64,
    pub crossover_selection: Selection,
    pub crossover: Box<dyn QuadOp<G>>,
    pub mutation_rate: f64,
    pub mutation_selection: Selection,
    pub mutation: Box<dyn Mutation<G>>,
    pub replacement: Replacement,
    pub continuator: Continuator,
    pub workers: usize,
}

impl<G: Clone + Send + Sync> FastGa<G> {
    /// Build `offspring_size` children from `pop`.
    ///
    /// Each child: with probability `crossover_rate`, two parents drawn by the
    /// crossover selection are crossed and the first result is kept;
    /// otherwise one parent drawn by the mutation selection is copied. Then,
    /// with probability `mutation_rate`, the child is mutated. Unchanged
    /// copies keep their parent's fitness.
    pub fn breed(
        &mut self,
        pop: &Population<G>,
        dir: Direction,
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, G>,
    ) -> Result<Population<G>> {
        let mut offspring = Vec::with_capacity(self.offspring_size);
        for _ in 0..self.offspring_size {
            let mut child = if rng.coin(self.crossover_rate) {
                let i = select_one(&self.crossover_selection, pop, dir, rng)?;
                let j = select_one(&self.crossover_selection, pop, dir, rng)?;
                let mut a = pop[i].clone();
                let mut b = pop[j].clone();
                apply_crossover(self.crossover.as_mut(), &mut a, &mut b, rng)?;
                a
            } else {
                let k = select_one(&self.mutation_selection, pop, dir, rng)?;
                pop[k].clone()
            };
            if rng.coin(self.mutation_rate) {
                self.mutation.mutate(&mut child, rng, evals)?;
            }
            offspring.push(child);
        }
        Ok(offspring)
    }

    /// Evaluate `pop` (ignoring the counter's limit), then iterate
    /// generations until the continuator or the evaluation budget stops.
    pub fn run(
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
            let mut offspring = match self.breed(&pop, dir, rng, evals) {
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

    /// Short description of the configured operators.
    pub fn describe(&self) -> String {
        format!(
            "FastGA(mu={}, lambda={}, pc={}, xsel={}, xover={}, pm={}, msel={}, mut={}, repl={})",
            self.pop_size,
            self.offspring_size,
            self.crossover_rate,
            self.crossover_selection.name(),
            self.crossover.name(),
            self.mutation_rate,
            self.mutation_selection.name(),
            self.mutation.name(),
            self.replacement.name()
        )
    }
}
