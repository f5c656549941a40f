use std::time::{Duration, Instant};

use crate::continuator::Continuator;
use crate::ea::{random_bits, BitflipRate, FastGa, Replacement, Selection, UniformCrossover};
use crate::error::{Error, ObjectiveError, Result};
use crate::eval::{EvalCounter, Objective};
use crate::problems::OneMax;
use crate::rng::RngStream;
use crate::solution::{Direction, Solution};

/// Wraps an objective and sleeps for `delay` on every evaluation.
/// Stands in for an expensive simulation when measuring parallel scaling.
#[derive(Debug, Clone)]
pub struct Delayed<O> {
    pub inner: O,
    pub delay: Duration,
}

impl<G, O: Objective<G>> Objective<G> for Delayed<O> {
    fn direction(&self) -> Direction {
        self.inner.direction()
    }

    fn evaluate(&self, g: &G) -> Result<f64, ObjectiveError> {
        std::thread::sleep(self.delay);
        self.inner.evaluate(g)
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn optimum(&self) -> Option<f64> {
        self.inner.optimum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    pub evaluations: u64,
    pub seconds: f64,
    pub per_second: f64,
}

impl Throughput {
    pub fn new(evaluations: u64, seconds: f64) -> Self {
        Self {
            evaluations,
            seconds,
            per_second: evaluations as f64 / seconds,
        }
    }
}

/// Time a (mu+lambda) GA on OneMax for `evaluations` evaluations: binary
/// tournament, uniform crossover at rate 0.5, bitflip 1/n, plus replacement.
/// The run does not stop at the optimum.
pub fn ga_throughput(
    n: usize,
    mu: usize,
    lambda: usize,
    evaluations: u64,
    seed: u64,
) -> Result<Throughput> {
    if mu == 0 || lambda == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "n, mu and lambda must be positive".into(),
        ));
    }
    let problem = OneMax { n };
    let mut rng = RngStream::new(seed);
    let mut ga = FastGa {
        pop_size: mu,
        offspring_size: lambda,
        crossover_rate: 0.5,
        crossover_selection: Selection::Tournament(2),
        crossover: Box::new(UniformCrossover::new(0.5)?),
        mutation_rate: 1.0,
        mutation_selection: Selection::Tournament(2),
        mutation: Box::new(BitflipRate::per_length(1.0)?),
        replacement: Replacement::Plus,
        continuator: Continuator::Forever,
        workers: 1,
    };
    let pop = (0..mu)
        .map(|_| Solution::new(random_bits(n, &mut rng)))
        .collect();
    let start = Instant::now();
    let mut evals = EvalCounter::new(&problem).with_limit(evaluations);
    ga.run(pop, &mut evals, &mut rng, None)?;
    Ok(Throughput::new(
        evals.count(),
        start.elapsed().as_secs_f64(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_consistent() {
        let t = ga_throughput(20, 10, 10, 2_000, 1).unwrap();
        assert_eq!(t.evaluations, 2_000);
        assert_eq!(t.per_second, t.evaluations as f64 / t.seconds);
        assert!(ga_throughput(20, 0, 10, 10, 1).is_err());
    }
}
