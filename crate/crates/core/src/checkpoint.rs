//! Per-iteration hooks: statistics monitors and parameter updaters.

use std::cell::Cell;
use std::rc::Rc;

use crate::eval::EvalCounter;
use crate::solution::Solution;

/// Observes the population once per checkpoint call and appends one record.
pub trait Monitor<G> {
    fn name(&self) -> &str;
    fn observe(&mut self, pop: &[Solution<G>], evals: &EvalCounter<'_, G>);
    fn records(&self) -> &[f64];
}

/// Best fitness in the current population.
#[derive(Debug, Default)]
pub struct BestFitness {
    records: Vec<f64>,
}

/// Mean fitness over valid members.
#[derive(Debug, Default)]
pub struct MeanFitness {
    records: Vec<f64>,
}

/// Full evaluation count.
#[derive(Debug, Default)]
pub struct EvaluationCount {
    records: Vec<f64>,
}

impl<G> Monitor<G> for BestFitness {
    fn name(&self) -> &str {
        "best"
    }
    fn observe(&mut self, pop: &[Solution<G>], evals: &EvalCounter<'_, G>) {
        let dir = evals.direction();
        let best = pop
            .iter()
            .filter_map(Solution::value)
            .reduce(|a, b| dir.best(a, b))
            .unwrap_or(f64::NAN);
        self.records.push(best);
    }
    fn records(&self) -> &[f64] {
        &self.records
    }
}

impl<G> Monitor<G> for MeanFitness {
    fn name(&self) -> &str {
        "mean"
    }
    fn observe(&mut self, pop: &[Solution<G>], _evals: &EvalCounter<'_, G>) {
        let vals: Vec<f64> = pop.iter().filter_map(Solution::value).collect();
        let mean = if vals.is_empty() {
            f64::NAN
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        };
        self.records.push(mean);
    }
    fn records(&self) -> &[f64] {
        &self.records
    }
}

impl<G> Monitor<G> for EvaluationCount {
    fn name(&self) -> &str {
        "evaluations"
    }
    fn observe(&mut self, _pop: &[Solution<G>], evals: &EvalCounter<'_, G>) {
        self.records.push(evals.count() as f64);
    }
    fn records(&self) -> &[f64] {
        &self.records
    }
}

/// Updater: rewrites a shared parameter every iteration and records the new value.
pub struct Updater {
    name: String,
    value: Rc<Cell<f64>>,
    update: Box<dyn FnMut(f64) -> f64>,
    records: Vec<f64>,
}

impl Updater {
    pub fn new(
        name: impl Into<String>,
        value: Rc<Cell<f64>>,
        update: impl FnMut(f64) -> f64 + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            update: Box::new(update),
            records: Vec::new(),
        }
    }
}

impl<G> Monitor<G> for Updater {
    fn name(&self) -> &str {
        &self.name
    }
    fn observe(&mut self, _pop: &[Solution<G>], _evals: &EvalCounter<'_, G>) {
        let next = (self.update)(self.value.get());
        self.value.set(next);
        self.records.push(next);
    }
    fn records(&self) -> &[f64] {
        &self.records
    }
}

/// Ordered list of monitors, called in registration order.
pub struct Checkpoint<G> {
    monitors: Vec<Box<dyn Monitor<G>>>,
    calls: usize,
}

impl<G> Default for Checkpoint<G> {
    fn default() -> Self {
        Self {
            monitors: Vec::new(),
            calls: 0,
        }
    }
}

impl<G> Checkpoint<G> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a monitor; returns its position.
    pub fn add(&mut self, m: impl Monitor<G> + 'static) -> usize {
        self.monitors.push(Box::new(m));
        self.monitors.len() - 1
    }

    pub fn monitor(&self, i: usize) -> &dyn Monitor<G> {
        self.monitors[i].as_ref()
    }

    pub fn len(&self) -> usize {
        self.monitors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monitors.is_empty()
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn call(&mut self, pop: &[Solution<G>], evals: &EvalCounter<'_, G>) {
        self.calls += 1;
        for m in &mut self.monitors {
            m.observe(pop, evals);
        }
    }
}
