//! Stopping criteria. A continuator answers "keep going?" and is checked once
//! per iteration, after replacement.

use crate::eval::EvalCounter;
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq)]
pub enum Continuator {
    /// Stop once `count >= N`.
    MaxEvaluations(u64),
    /// Stop once the best-so-far reaches the target (in the problem's direction).
    Target(f64),
    /// Continue while every member says continue.
    All(Vec<Continuator>),
    /// Never stop on its own.
    Forever,
}

impl Continuator {
    pub fn should_continue<G, P>(&self, _pop: &[Solution<G>], evals: &EvalCounter<'_, P>) -> bool
    where
        P: ?Sized,
    {
        match self {
            Continuator::MaxEvaluations(n) => evals.count() < *n,
            Continuator::Target(t) => match evals.best_so_far() {
                Some(b) => !(b == *t || evals.direction().better(b, *t)),
                None => true,
            },
            Continuator::All(cs) => cs.iter().all(|c| c.should_continue(_pop, evals)),
            Continuator::Forever => true,
        }
    }

    /// `self` and `other` must both allow continuation.
    pub fn and(self, other: Continuator) -> Continuator {
        match self {
            Continuator::All(mut cs) => {
                cs.push(other);
                Continuator::All(cs)
            }
            c => Continuator::All(vec![c, other]),
        }
    }

    pub fn max_evaluations(&self) -> Option<u64> {
        match self {
            Continuator::MaxEvaluations(n) => Some(*n),
            Continuator::All(cs) => cs.iter().filter_map(Continuator::max_evaluations).min(),
            _ => None,
        }
    }
}
