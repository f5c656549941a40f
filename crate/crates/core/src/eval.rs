//! Objective functions, evaluation counting, and population evaluation.

use crate::error::{Error, ObjectiveError, Result};
use crate::par;
use crate::solution::{Direction, Solution};

/// A scalar objective over genotypes of type `G`.
///
/// Implementations must be pure: the same genotype always yields the same
/// fitness.
pub trait Objective<G: ?Sized>: Send + Sync {
    fn direction(&self) -> Direction;

    fn evaluate(&self, x: &G) -> Result<f64, ObjectiveError>;

    /// Genotype length expected by the objective.
    fn dimension(&self) -> usize;

    /// Best attainable fitness, when known.
    fn optimum(&self) -> Option<f64> {
        None
    }
}

impl<G: ?Sized, O: Objective<G> + ?Sized> Objective<G> for &O {
    fn direction(&self) -> Direction {
        (**self).direction()
    }
    fn evaluate(&self, x: &G) -> Result<f64, ObjectiveError> {
        (**self).evaluate(x)
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn optimum(&self) -> Option<f64> {
        (**self).optimum()
    }
}

/// One point of a best-so-far trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Full evaluations performed when the value was observed.
    pub evaluations: u64,
    pub raw: f64,
    pub best: f64,
}

/// Wraps an objective and counts every full invocation.
///
/// The counter also keeps the best-so-far fitness and the list of improving
/// evaluations, which is all the benchmarking loggers need. An optional limit
/// makes [`EvalCounter::evaluate`] refuse calls once the budget is spent.
pub struct EvalCounter<'a, G: ?Sized> {
    objective: &'a dyn Objective<G>,
    count: u64,
    incremental: u64,
    best: Option<f64>,
    last_raw: Option<f64>,
    limit: Option<u64>,
    trace: Vec<TracePoint>,
}

impl<'a, G: ?Sized> EvalCounter<'a, G> {
    pub fn new(objective: &'a dyn Objective<G>) -> Self {
        Self {
            objective,
            count: 0,
            incremental: 0,
            best: None,
            last_raw: None,
            limit: None,
            trace: Vec::new(),
        }
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn set_limit(&mut self, limit: Option<u64>) {
        self.limit = limit;
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn objective(&self) -> &'a dyn Objective<G> {
        self.objective
    }

    pub fn direction(&self) -> Direction {
        self.objective.direction()
    }

    /// Number of full objective invocations.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Number of incremental (move) evaluations, counted apart from `count`.
    pub fn incremental_count(&self) -> u64 {
        self.incremental
    }

    pub fn best_so_far(&self) -> Option<f64> {
        self.best
    }

    /// Raw value of the most recent full evaluation.
    pub fn last_raw(&self) -> Option<f64> {
        self.last_raw
    }

    /// Improving evaluations, in order.
    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    /// Evaluations left before the limit, if any.
    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l.saturating_sub(self.count))
    }

    pub fn exhausted(&self) -> bool {
        self.remaining() == Some(0)
    }

    pub fn reset(&mut self) {
        self.count = 0;
        self.incremental = 0;
        self.best = None;
        self.last_raw = None;
        self.trace.clear();
    }

    pub fn evaluate(&mut self, x: &G) -> Result<f64> {
        if self.exhausted() {
            return Err(Error::BudgetExhausted {
                evaluations: self.count,
            });
        }
        self.evaluate_unlimited(x)
    }

    fn evaluate_unlimited(&mut self, x: &G) -> Result<f64> {
        let f = self.objective.evaluate(x)?;
        self.record(f);
        Ok(f)
    }

    /// Account for one full evaluation computed elsewhere (e.g. on a worker).
    pub(crate) fn record(&mut self, f: f64) {
        self.count += 1;
        self.last_raw = Some(f);
        self.observe(f);
    }

    /// Account for an incremental evaluation. It updates best-so-far but not
    /// the full-evaluation count.
    pub fn record_incremental(&mut self, f: f64) {
        self.incremental += 1;
        self.observe(f);
    }

    /// Account for `count` incremental evaluations whose best value was `best`.
    pub fn record_incremental_batch(&mut self, count: u64, best: f64) {
        if count == 0 {
            return;
        }
        self.incremental += count;
        self.observe(best);
    }

    fn observe(&mut self, f: f64) {
        let dir = self.objective.direction();
        let improved = match self.best {
            None => true,
            Some(b) => dir.better(f, b),
        };
        if improved {
            self.best = Some(f);
            self.trace.push(TracePoint {
                evaluations: self.count,
                raw: f,
                best: f,
            });
        }
    }
}

/// Evaluate every invalid member of `pop`, in index order.
///
/// Returns the number of objective calls made. Valid members are skipped. If
/// the counter's limit is hit midway, the members evaluated so far keep their
/// fitness and [`Error::BudgetExhausted`] is returned.
pub fn evaluate_population<G>(
    pop: &mut [Solution<G>],
    evals: &mut EvalCounter<'_, G>,
) -> Result<usize> {
    evaluate_inner(pop, evals, true)
}

/// Same as [`evaluate_population`] but ignores the counter's limit. Used for
/// initial populations, which are always evaluated in full.
pub fn evaluate_population_unlimited<G>(
    pop: &mut [Solution<G>],
    evals: &mut EvalCounter<'_, G>,
) -> Result<usize> {
    evaluate_inner(pop, evals, false)
}

fn evaluate_inner<G>(
    pop: &mut [Solution<G>],
    evals: &mut EvalCounter<'_, G>,
    limited: bool,
) -> Result<usize> {
    let mut done = 0;
    for (index, s) in pop.iter_mut().enumerate() {
        if s.is_valid() {
            continue;
        }
        let f = if limited {
            evals.evaluate(&s.genotype)
        } else {
            evals.evaluate_unlimited(&s.genotype)
        }
        .map_err(|e| match e {
            Error::Objective(source) => Error::Evaluation { index, source },
            other => other,
        })?;
        s.set_fitness(f);
        done += 1;
    }
    Ok(done)
}

/// Master-worker evaluation of the invalid members of `pop`.
///
/// Invalid members are split into contiguous blocks by index, one per worker;
/// results come back by index and are folded into the counter in index order,
/// so fitnesses, counts and the best-so-far trace are identical for every
/// worker count.
pub fn parallel_evaluate<G: Sync>(
    pop: &mut [Solution<G>],
    evals: &mut EvalCounter<'_, G>,
    workers: usize,
) -> Result<usize> {
    if workers <= 1 {
        return evaluate_population(pop, evals);
    }
    let mut todo: Vec<usize> = (0..pop.len()).filter(|&i| !pop[i].is_valid()).collect();
    let mut truncated = false;
    if let Some(rem) = evals.remaining() {
        if (todo.len() as u64) > rem {
            todo.truncate(rem as usize);
            truncated = true;
        }
    }

    let objective = evals.objective();
    let shared: &[Solution<G>] = pop;
    let results: Vec<Vec<Result<f64, ObjectiveError>>> =
        par::map_blocks(todo.len(), workers, |block| {
            todo[block]
                .iter()
                .map(|&i| objective.evaluate(&shared[i].genotype))
                .collect()
        });

    let mut done = 0;
    for (&index, res) in todo.iter().zip(results.into_iter().flatten()) {
        let f = res.map_err(|source| Error::Evaluation { index, source })?;
        evals.record(f);
        pop[index].set_fitness(f);
        done += 1;
    }
    if truncated {
        return Err(Error::BudgetExhausted {
            evaluations: evals.count(),
        });
    }
    Ok(done)
}
