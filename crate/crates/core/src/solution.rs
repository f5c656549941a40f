//! Solutions, populations, and the fitness comparison relation.

use std::cmp::Ordering;

/// Optimization direction. Operators never compare raw fitness values
/// directly; they go through [`Direction::better`] and friends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Strictly better.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    /// Ordering where `Less` means `a` is better than `b`.
    pub fn cmp(self, a: f64, b: f64) -> Ordering {
        match self {
            Direction::Maximize => b.total_cmp(&a),
            Direction::Minimize => a.total_cmp(&b),
        }
    }

    /// The better of two values, preferring `a` on ties.
    pub fn best(self, a: f64, b: f64) -> f64 {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }

    /// Map a value so that larger is always better.
    pub fn to_max(self, v: f64) -> f64 {
        match self {
            Direction::Maximize => v,
            Direction::Minimize => -v,
        }
    }

    /// Map a value so that smaller is always better.
    pub fn to_min(self, v: f64) -> f64 {
        -self.to_max(v)
    }
}

pub type BitString = Vec<bool>;
pub type RealVector = Vec<f64>;

/// A genotype with an optional fitness. A present fitness always matches the
/// current genotype; mutators that change the genotype call [`invalidate`].
///
/// [`invalidate`]: Solution::invalidate
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<G, F = f64> {
    pub genotype: G,
    fitness: Option<F>,
}

impl<G, F> Solution<G, F> {
    pub fn new(genotype: G) -> Self {
        Self {
            genotype,
            fitness: None,
        }
    }

    pub fn evaluated(genotype: G, fitness: F) -> Self {
        Self {
            genotype,
            fitness: Some(fitness),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.fitness.is_some()
    }

    pub fn fitness(&self) -> Option<&F> {
        self.fitness.as_ref()
    }

    pub fn set_fitness(&mut self, f: F) {
        self.fitness = Some(f);
    }

    pub fn invalidate(&mut self) {
        self.fitness = None;
    }
}

impl<G> Solution<G, f64> {
    /// Scalar fitness, if valid.
    pub fn value(&self) -> Option<f64> {
        self.fitness
    }
}

/// Ordered collection of solutions. Evaluation never reorders it and
/// duplicates are allowed.
pub type Population<G, F = f64> = Vec<Solution<G, F>>;

/// Collect the scalar fitness of every member, failing on the first invalid one.
pub fn fitnesses<G>(pop: &[Solution<G>]) -> crate::Result<Vec<f64>> {
    pop.iter()
        .enumerate()
        .map(|(i, s)| s.value().ok_or(crate::Error::Unevaluated(i)))
        .collect()
}

/// Index of the best member; ties go to the lower index.
pub fn best_index<G>(pop: &[Solution<G>], dir: Direction) -> crate::Result<usize> {
    let fs = fitnesses(pop)?;
    if fs.is_empty() {
        return Err(crate::Error::EmptyPopulation);
    }
    let mut best = 0;
    for (i, &f) in fs.iter().enumerate().skip(1) {
        if dir.better(f, fs[best]) {
            best = i;
        }
    }
    Ok(best)
}
