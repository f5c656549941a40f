//! Parent selection. Every strategy returns indices into the input
//! population, so a selected solution is always a member of it.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::solution::{fitnesses, Direction, Solution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    /// `k` uniform draws with replacement, best one wins.
    Tournament(usize),
    /// Fitness-proportional. Minimized fitness is inverted (`1/f`).
    Roulette,
    Best,
    Random,
    /// Linear ranking with selection pressure in `[1, 2]`.
    RankLinear(f64),
}

impl Selection {
    pub fn name(&self) -> String {
        match self {
            Selection::Tournament(k) => format!("tournament({k})"),
            Selection::Roulette => "roulette".into(),
            Selection::Best => "best".into(),
            Selection::Random => "random".into(),
            Selection::RankLinear(s) => format!("rank-linear({s})"),
        }
    }
}

fn value_at<G>(pop: &[Solution<G>], i: usize) -> Result<f64> {
    pop[i].value().ok_or(Error::Unevaluated(i))
}

pub fn select_one<G>(
    strategy: &Selection,
    pop: &[Solution<G>],
    dir: Direction,
    rng: &mut RngStream,
) -> Result<usize> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    match *strategy {
        Selection::Tournament(k) => {
            if k == 0 {
                return Err(Error::InvalidArgument(
                    "tournament size must be at least 1".into(),
                ));
            }
            let mut best = rng.below(pop.len());
            let mut best_f = value_at(pop, best)?;
            for _ in 1..k {
                let i = rng.below(pop.len());
                let f = value_at(pop, i)?;
                if dir.better(f, best_f) || (f == best_f && i < best) {
                    best = i;
                    best_f = f;
                }
            }
            Ok(best)
        }
        Selection::Random => Ok(rng.below(pop.len())),
        Selection::Best => crate::solution::best_index(pop, dir),
        Selection::Roulette => {
            let fs = fitnesses(pop)?;
            let weights: Vec<f64> = match dir {
                Direction::Maximize => fs,
                Direction::Minimize => fs
                    .iter()
                    .map(|&f| if f > 0.0 { 1.0 / f } else { -1.0 })
                    .collect(),
            };
            if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
                return Err(Error::NonPositiveFitness);
            }
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                return Err(Error::NonPositiveFitness);
            }
            let mut target = rng.uniform() * total;
            for (i, w) in weights.iter().enumerate() {
                if target < *w {
                    return Ok(i);
                }
                target -= w;
            }
            // Rounding left us past the end: take the last positive weight.
            Ok(weights.iter().rposition(|&w| w > 0.0).unwrap_or(0))
        }
        Selection::RankLinear(pressure) => {
            if !(1.0..=2.0).contains(&pressure) {
                return Err(Error::InvalidArgument(format!(
                    "rank pressure {pressure} outside [1, 2]"
                )));
            }
            let fs = fitnesses(pop)?;
            let mu = fs.len();
            if mu == 1 {
                return Ok(0);
            }
            // Worst first; among equals the higher index ranks lower.
            let mut order: Vec<usize> = (0..mu).collect();
            order.sort_by(|&a, &b| dir.cmp(fs[b], fs[a]).then(b.cmp(&a)));
            let m = mu as f64;
            let mut target = rng.uniform();
            for (rank, &i) in order.iter().enumerate() {
                let p =
                    (2.0 - pressure) / m + 2.0 * rank as f64 * (pressure - 1.0) / (m * (m - 1.0));
                if target < p {
                    return Ok(i);
                }
                target -= p;
            }
            Ok(order[mu - 1])
        }
    }
}

/// `count` independent draws of [`select_one`], with replacement.
pub fn select_many<G>(
    strategy: &Selection,
    pop: &[Solution<G>],
    count: usize,
    dir: Direction,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    (0..count)
        .map(|_| select_one(strategy, pop, dir, rng))
        .collect()
}
