//! Survivor selection: merging parents and offspring into the next population.

use crate::error::{Error, Result};
use crate::solution::{best_index, fitnesses, Direction, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replacement {
    /// Offspring replace the parents wholesale.
    Generational,
    /// Best `mu` of parents and offspring.
    Plus,
    /// Best `mu` of offspring. With weak elitism the worst survivor gives way
    /// to the best parent when that parent strictly beats every offspring.
    Comma { weak_elitism: bool },
}

impl Replacement {
    pub fn name(&self) -> &'static str {
        match self {
            Replacement::Generational => "generational",
            Replacement::Plus => "plus",
            Replacement::Comma {
                weak_elitism: false,
            } => "comma",
            Replacement::Comma { weak_elitism: true } => "comma-weak-elitist",
        }
    }
}

/// Indices of `pool` sorted best first; ties keep pool order.
fn ranked(pool_fitness: &[f64], dir: Direction) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pool_fitness.len()).collect();
    order.sort_by(|&a, &b| dir.cmp(pool_fitness[a], pool_fitness[b]));
    order
}

/// Merge `parents` and `offspring` into a population of exactly `mu`
/// members. All members must be evaluated. Survivors come out best first,
/// ties resolved in favour of offspring and then lower index.
pub fn replace<G: Clone>(
    strategy: Replacement,
    parents: Population<G>,
    offspring: Population<G>,
    mu: usize,
    dir: Direction,
) -> Result<Population<G>> {
    match strategy {
        Replacement::Generational => {
            if offspring.len() != mu {
                return Err(Error::InsufficientOffspring {
                    needed: mu,
                    got: offspring.len(),
                });
            }
            fitnesses(&offspring)?;
            Ok(offspring)
        }
        Replacement::Plus => {
            let total = parents.len() + offspring.len();
            if total < mu {
                return Err(Error::InsufficientOffspring {
                    needed: mu - parents.len(),
                    got: offspring.len(),
                });
            }
            let mut pool = offspring;
            pool.extend(parents);
            truncate(pool, mu, dir)
        }
        Replacement::Comma { weak_elitism } => {
            if offspring.len() < mu {
                return Err(Error::InsufficientOffspring {
                    needed: mu,
                    got: offspring.len(),
                });
            }
            let best_offspring = offspring[best_index(&offspring, dir)?].value();
            let mut survivors = truncate(offspring, mu, dir)?;
            if weak_elitism && !parents.is_empty() && mu > 0 {
                let pb = best_index(&parents, dir)?;
                let parent_best = parents[pb].value().unwrap_or(f64::NAN);
                if best_offspring.is_some_and(|o| dir.better(parent_best, o)) {
                    let last = survivors.len() - 1;
                    survivors[last] = parents[pb].clone();
                }
            }
            Ok(survivors)
        }
    }
}

fn truncate<G>(pool: Population<G>, mu: usize, dir: Direction) -> Result<Population<G>> {
    let fs = fitnesses(&pool)?;
    let order = ranked(&fs, dir);
    let mut slots: Vec<Option<_>> = pool.into_iter().map(Some).collect();
    Ok(order
        .into_iter()
        .take(mu)
        .map(|i| slots[i].take().expect("index used once"))
        .collect())
}
