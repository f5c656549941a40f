use std::sync::Mutex;

use crate::ea::variation::{apply_crossover, apply_mutation_any, MonOp, QuadOp};
use crate::error::{Error, ObjectiveError, Result};
use crate::par;
use crate::rng::RngStream;
use crate::solution::{BitString, Direction, Population, Solution};

use super::{nondominated_sort, rank_and_crowding, ObjectiveVector};

/// A problem with several objectives, each with its own direction.
pub trait MultiObjective<G: ?Sized>: Send + Sync {
    fn directions(&self) -> Vec<Direction>;
    fn evaluate(&self, g: &G) -> Result<Vec<f64>, ObjectiveError>;

    fn objective_vector(&self, g: &G) -> Result<ObjectiveVector, ObjectiveError> {
        Ok(ObjectiveVector {
            values: self.evaluate(g)?,
            directions: self.directions(),
        })
    }
}

/// Maximize the number of ones and the number of zeros at the same time.
/// Every bit string lies on the Pareto front.
#[derive(Debug, Clone, Copy)]
pub struct OneMaxZeroMax {
    pub n: usize,
}

impl MultiObjective<BitString> for OneMaxZeroMax {
    fn directions(&self) -> Vec<Direction> {
        vec![Direction::Maximize, Direction::Maximize]
    }

    fn evaluate(&self, g: &BitString) -> Result<Vec<f64>, ObjectiveError> {
        if g.len() != self.n {
            return Err(ObjectiveError::Dimension {
                expected: self.n,
                got: g.len(),
            });
        }
        let ones = g.iter().filter(|b| **b).count();
        Ok(vec![ones as f64, (self.n - ones) as f64])
    }
}

/// Indices of the `mu` survivors: whole fronts in rank order, the last one
/// cut by descending crowding distance (ties by index).
pub fn nsga2_survivors(points: &[ObjectiveVector], mu: usize) -> Result<Vec<usize>> {
    let fronts = nondominated_sort(points)?;
    let mut chosen = Vec::with_capacity(mu);
    for front in &fronts.fronts {
        if chosen.len() + front.len() <= mu {
            chosen.extend_from_slice(front);
            continue;
        }
        let refs: Vec<&ObjectiveVector> = front.iter().map(|&i| &points[i]).collect();
        let d = super::crowding_distance(&refs);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
        chosen.extend(order.into_iter().take(mu - chosen.len()).map(|k| front[k]));
        break;
    }
    Ok(chosen)
}

/// One NSGA-II configuration: binary tournament on (rank, crowding),
/// crossover and mutation, then elitist survivor selection over parents and
/// offspring.
pub struct Nsga2<G> {
    pub mu: usize,
    pub crossover: Option<(Box<dyn QuadOp<G>>, f64)>,
    pub mutation: Option<(Box<dyn MonOp<G>>, f64)>,
    pub workers: usize,
}

impl<G: Clone + Send + Sync> Nsga2<G> {
    /// Evaluate every invalid member, in parallel when `workers > 1`.
    /// Returns the number of evaluations performed.
    pub fn evaluate(
        &self,
        problem: &dyn MultiObjective<G>,
        pop: &mut Population<G, ObjectiveVector>,
    ) -> Result<usize> {
        let todo: Vec<usize> = (0..pop.len()).filter(|&i| !pop[i].is_valid()).collect();
        let genos: Vec<&G> = todo.iter().map(|&i| &pop[i].genotype).collect();
        let first_error = Mutex::new(None::<(usize, ObjectiveError)>);
        let blocks = par::map_blocks(genos.len(), self.workers.max(1), |range| {
            range
                .map(|k| match problem.objective_vector(genos[k]) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        let mut slot = first_error.lock().expect("poisoned");
                        if slot.as_ref().is_none_or(|(j, _)| k < *j) {
                            *slot = Some((k, e));
                        }
                        None
                    }
                })
                .collect::<Vec<_>>()
        });
        if let Some((k, source)) = first_error.into_inner().expect("poisoned") {
            return Err(Error::Evaluation {
                index: todo[k],
                source,
            });
        }
        for (k, v) in blocks.into_iter().flatten().enumerate() {
            pop[todo[k]].set_fitness(v.expect("errors handled above"));
        }
        Ok(todo.len())
    }

    /// Produce the next population from an evaluated one.
    pub fn generation(
        &mut self,
        problem: &dyn MultiObjective<G>,
        pop: &Population<G, ObjectiveVector>,
        rng: &mut RngStream,
    ) -> Result<Population<G, ObjectiveVector>> {
        if pop.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let points = objectives(pop)?;
        let (rank, crowd) = rank_and_crowding(&points)?;
        let better =
            |a: usize, b: usize| rank[a] < rank[b] || (rank[a] == rank[b] && crowd[a] > crowd[b]);
        let tournament = |rng: &mut RngStream| {
            let a = rng.below(pop.len());
            let b = rng.below(pop.len());
            if better(b, a) {
                b
            } else {
                a
            }
        };
        let mut offspring: Population<G, ObjectiveVector> = Vec::with_capacity(self.mu + 1);
        while offspring.len() < self.mu {
            let mut a = pop[tournament(rng)].clone();
            let mut b = pop[tournament(rng)].clone();
            if let Some((op, rate)) = &mut self.crossover {
                if rng.coin(*rate) {
                    apply_crossover(op.as_mut(), &mut a, &mut b, rng)?;
                }
            }
            for child in [&mut a, &mut b] {
                if let Some((op, rate)) = &mut self.mutation {
                    if rng.coin(*rate) {
                        apply_mutation_any(op.as_mut(), child, rng)?;
                    }
                }
            }
            offspring.push(a);
            offspring.push(b);
        }
        offspring.truncate(self.mu);
        self.evaluate(problem, &mut offspring)?;

        let mut merged: Population<G, ObjectiveVector> = pop.clone();
        merged.extend(offspring);
        let points = objectives(&merged)?;
        let keep = nsga2_survivors(&points, self.mu)?;
        Ok(keep.into_iter().map(|i| merged[i].clone()).collect())
    }

    /// Evaluate `pop` and run `generations` generations.
    pub fn run(
        &mut self,
        problem: &dyn MultiObjective<G>,
        mut pop: Population<G, ObjectiveVector>,
        generations: usize,
        rng: &mut RngStream,
    ) -> Result<Population<G, ObjectiveVector>> {
        self.evaluate(problem, &mut pop)?;
        for _ in 0..generations {
            pop = self.generation(problem, &pop, rng)?;
        }
        Ok(pop)
    }
}

/// Objective vectors of an evaluated population.
pub fn objectives<G>(pop: &[Solution<G, ObjectiveVector>]) -> Result<Vec<ObjectiveVector>> {
    pop.iter()
        .enumerate()
        .map(|(i, s)| s.fitness().cloned().ok_or(Error::Unevaluated(i)))
        .collect()
}

/// Objective vectors of front 0.
pub fn first_front<G>(pop: &[Solution<G, ObjectiveVector>]) -> Result<Vec<ObjectiveVector>> {
    let points = objectives(pop)?;
    let fronts = nondominated_sort(&points)?;
    Ok(fronts
        .fronts
        .first()
        .map(|f| f.iter().map(|&i| points[i].clone()).collect())
        .unwrap_or_default())
}
