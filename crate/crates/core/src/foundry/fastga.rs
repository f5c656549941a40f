use std::sync::Arc;

use crate::continuator::Continuator;
use crate::ea::{
    random_bits, BitflipK, BitflipRate, FastGa, KPointCrossover, Mutation, QuadOp, Replacement,
    Selection, UniformCrossover,
};
use crate::error::{Error, Result};
use crate::eval::{EvalCounter, Objective, TracePoint};
use crate::mo::{Improvement, LocalSearchVariation};
use crate::problems::IncrementalObjective;
use crate::rng::RngStream;
use crate::solution::{BitString, Population, Solution};

use super::slot::{design_space_size, OperatorSlot, Slot};
use super::EncodedAlgorithm;

/// Size of the design space of [`FastGaFoundry::shipped`]:
/// 5 crossover rates x 5 crossover selectors x 10 crossovers x 5 mutation
/// rates x 5 mutation selectors x 7 mutations x 3 replacements x 3 offspring
/// sizes x 5 population sizes.
pub const SHIPPED_DESIGN_SPACE: u128 = 1_968_750;

/// Result of a foundry run.
#[derive(Debug, Clone)]
pub struct FoundryOutcome {
    pub population: Population<BitString>,
    pub evaluations: u64,
    pub best: Option<f64>,
    /// Improving evaluations, in order.
    pub trace: Vec<TracePoint>,
    /// Raw value of the last evaluation.
    pub last_raw: Option<f64>,
    pub starts: usize,
}

/// The FastGA template with every operator and parameter exposed as a slot.
pub struct FastGaFoundry {
    pub crossover_rates: Slot<f64>,
    pub crossover_selectors: Slot<Selection>,
    pub crossovers: Slot<Box<dyn QuadOp<BitString>>>,
    pub mutation_rates: Slot<f64>,
    pub mutation_selectors: Slot<Selection>,
    pub mutations: Slot<Box<dyn Mutation<BitString>>>,
    pub replacements: Slot<Replacement>,
    pub offspring_sizes: Slot<usize>,
    pub pop_sizes: Slot<usize>,
    pub budget: u64,
    pub max_restarts: usize,
    pub workers: usize,
    problem: Option<Arc<dyn IncrementalObjective>>,
    selected: Option<EncodedAlgorithm>,
}

impl Default for FastGaFoundry {
    fn default() -> Self {
        Self::new()
    }
}

impl FastGaFoundry {
    /// All slots empty, budget 0, one start, sequential evaluation.
    pub fn new() -> Self {
        Self {
            crossover_rates: Slot::new("crossover-rate", 0, true),
            crossover_selectors: Slot::new("crossover-selector", 1, false),
            crossovers: Slot::new("crossover", 2, false),
            mutation_rates: Slot::new("mutation-rate", 3, true),
            mutation_selectors: Slot::new("mutation-selector", 4, false),
            mutations: Slot::new("mutation", 5, false),
            replacements: Slot::new("replacement", 6, false),
            offspring_sizes: Slot::new("offspring-size", 7, true),
            pop_sizes: Slot::new("pop-size", 8, true),
            budget: 0,
            max_restarts: 1,
            workers: 1,
            problem: None,
            selected: None,
        }
    }

    /// The stock foundry, see [`SHIPPED_DESIGN_SPACE`].
    pub fn shipped() -> Self {
        let mut f = Self::new();
        f.populate_shipped().expect("slots are not frozen yet");
        f.freeze();
        f
    }

    fn populate_shipped(&mut self) -> Result<()> {
        for i in 0..5 {
            let r = i as f64 * 0.2;
            self.crossover_rates.add_value(format!("{r:.1}"), r)?;
            self.mutation_rates.add_value(format!("{r:.1}"), r)?;
        }
        for sel in [
            Selection::Random,
            Selection::Tournament(2),
            Selection::Tournament(4),
            Selection::Tournament(8),
            Selection::RankLinear(2.0),
        ] {
            self.crossover_selectors.add_value(sel.name(), sel)?;
            self.mutation_selectors.add_value(sel.name(), sel)?;
        }
        for i in 0..5 {
            let bias = 0.1 + 0.2 * i as f64;
            let k = 2 * i + 1;
            self.crossovers
                .add(format!("uniform({bias:.1})"), move |_| {
                    Box::new(UniformCrossover::new(bias).expect("bias in (0,1)"))
                        as Box<dyn QuadOp<BitString>>
                })?;
            self.crossovers.add(format!("{k}-point"), move |_| {
                Box::new(KPointCrossover { k }) as Box<dyn QuadOp<BitString>>
            })?;
        }
        for c in [0.5, 1.0, 2.0] {
            self.mutations.add(format!("bitflip({c}/n)"), move |_| {
                Box::new(BitflipRate::per_length(c).expect("positive rate"))
                    as Box<dyn Mutation<BitString>>
            })?;
        }
        for k in 1..=3 {
            self.mutations.add(format!("flip-{k}"), move |_| {
                Box::new(BitflipK { k }) as Box<dyn Mutation<BitString>>
            })?;
        }
        self.mutations.add("first-improvement-step", |p| {
            Box::new(LocalSearchVariation::new(
                Arc::clone(p),
                Improvement::First,
                Some(1),
            )) as Box<dyn Mutation<BitString>>
        })?;
        for r in [
            Replacement::Plus,
            Replacement::Comma {
                weak_elitism: false,
            },
            Replacement::Comma { weak_elitism: true },
        ] {
            self.replacements.add_value(r.name(), r)?;
        }
        for n in [50, 100, 200] {
            self.offspring_sizes.add_value(n.to_string(), n)?;
        }
        for n in [1, 5, 10, 20, 50] {
            self.pop_sizes.add_value(n.to_string(), n)?;
        }
        Ok(())
    }

    pub fn with_problem(mut self, problem: Arc<dyn IncrementalObjective>) -> Self {
        self.bind(problem);
        self
    }

    /// Attach the problem to solve. Cached operators are dropped since some
    /// of them hold the previous problem.
    pub fn bind(&mut self, problem: Arc<dyn IncrementalObjective>) {
        self.crossovers.clear_cache();
        self.mutations.clear_cache();
        self.problem = Some(problem);
    }

    pub fn problem(&self) -> Option<&Arc<dyn IncrementalObjective>> {
        self.problem.as_ref()
    }

    pub fn slots(&self) -> [&dyn OperatorSlot; 9] {
        [
            &self.crossover_rates,
            &self.crossover_selectors,
            &self.crossovers,
            &self.mutation_rates,
            &self.mutation_selectors,
            &self.mutations,
            &self.replacements,
            &self.offspring_sizes,
            &self.pop_sizes,
        ]
    }

    /// Number of slots, i.e. the length of an encoding.
    pub fn size(&self) -> usize {
        self.slots().len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.slots().iter().map(|s| s.size()).collect()
    }

    pub fn design_space_size(&self) -> u128 {
        design_space_size(&self.slots())
    }

    pub fn freeze(&mut self) {
        self.crossover_rates.freeze();
        self.crossover_selectors.freeze();
        self.crossovers.freeze();
        self.mutation_rates.freeze();
        self.mutation_selectors.freeze();
        self.mutations.freeze();
        self.replacements.freeze();
        self.offspring_sizes.freeze();
        self.pop_sizes.freeze();
    }

    pub fn selected(&self) -> Option<&EncodedAlgorithm> {
        self.selected.as_ref()
    }

    fn bound(&self) -> Result<Arc<dyn IncrementalObjective>> {
        self.problem
            .clone()
            .ok_or_else(|| Error::InvalidArgument("no problem bound to the foundry".into()))
    }

    /// Validate `e` and build (or reuse) the chosen operators.
    pub fn select(&mut self, e: &EncodedAlgorithm) -> Result<()> {
        let names: Vec<String> = self.slots().iter().map(|s| s.name().to_string()).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        e.validate(&self.sizes(), &names)?;
        let p = self.bound()?;
        let i = &e.0;
        self.crossover_rates.prepare(i[0], &p)?;
        self.crossover_selectors.prepare(i[1], &p)?;
        self.crossovers.prepare(i[2], &p)?;
        self.mutation_rates.prepare(i[3], &p)?;
        self.mutation_selectors.prepare(i[4], &p)?;
        self.mutations.prepare(i[5], &p)?;
        self.replacements.prepare(i[6], &p)?;
        self.offspring_sizes.prepare(i[7], &p)?;
        self.pop_sizes.prepare(i[8], &p)?;
        self.selected = Some(e.clone());
        Ok(())
    }

    /// Labels of the selected alternatives, one per slot.
    pub fn selected_labels(&self) -> Result<Vec<String>> {
        let e = self.selected.as_ref().ok_or(Error::NotSelected)?;
        Ok(self
            .slots()
            .iter()
            .zip(&e.0)
            .map(|(s, &i)| s.labels()[i].clone())
            .collect())
    }

    /// Assemble the selected FastGA. Operators move out of the cache until
    /// handed back with [`reclaim`](Self::reclaim).
    pub fn instantiate(&mut self) -> Result<FastGa<BitString>> {
        let e = self.selected.clone().ok_or(Error::NotSelected)?;
        let p = self.bound()?;
        let i = &e.0;
        let continuator = match p.optimum() {
            Some(o) => Continuator::Target(o),
            None => Continuator::Forever,
        };
        Ok(FastGa {
            pop_size: take_copy(&mut self.pop_sizes, i[8], &p)?,
            offspring_size: take_copy(&mut self.offspring_sizes, i[7], &p)?,
            crossover_rate: take_copy(&mut self.crossover_rates, i[0], &p)?,
            crossover_selection: take_copy(&mut self.crossover_selectors, i[1], &p)?,
            crossover: self.crossovers.take(i[2], &p)?,
            mutation_rate: take_copy(&mut self.mutation_rates, i[3], &p)?,
            mutation_selection: take_copy(&mut self.mutation_selectors, i[4], &p)?,
            mutation: self.mutations.take(i[5], &p)?,
            replacement: take_copy(&mut self.replacements, i[6], &p)?,
            continuator,
            workers: self.workers,
        })
    }

    /// Return the operators of an instantiated algorithm to the cache.
    pub fn reclaim(&mut self, ga: FastGa<BitString>) {
        if let Some(e) = &self.selected {
            self.crossovers.put(e.0[2], ga.crossover);
            self.mutations.put(e.0[5], ga.mutation);
        }
    }

    /// Random initial population sized by the selected pop-size slot.
    pub fn initial_population(&mut self, rng: &mut RngStream) -> Result<Population<BitString>> {
        let e = self.selected.clone().ok_or(Error::NotSelected)?;
        let p = self.bound()?;
        let mu = take_copy(&mut self.pop_sizes, e.0[8], &p)?;
        let n = p.dimension();
        Ok((0..mu)
            .map(|_| Solution::new(random_bits(n, rng)))
            .collect())
    }

    /// Run the selected algorithm from `pop` under the foundry's budget.
    ///
    /// A start ends when the target is reached, the budget is spent or the
    /// algorithm stops by itself; in the last case a new random population is
    /// drawn while fewer than `max_restarts` starts have happened.
    pub fn run(
        &mut self,
        mut pop: Population<BitString>,
        rng: &mut RngStream,
    ) -> Result<FoundryOutcome> {
        let problem = self.bound()?;
        let mut ga = self.instantiate()?;
        let objective: &dyn Objective<BitString> = &*problem;
        let mut evals = EvalCounter::new(objective).with_limit(self.budget);
        let mut starts = 0;
        let result = loop {
            starts += 1;
            let end = match ga.run(pop, &mut evals, rng, None) {
                Ok(p) => p,
                Err(e) => break Err(e),
            };
            let reached = !ga.continuator.should_continue(&end, &evals);
            if reached || evals.exhausted() || starts >= self.max_restarts.max(1) {
                break Ok(end);
            }
            let n = problem.dimension();
            pop = (0..ga.pop_size)
                .map(|_| Solution::new(random_bits(n, rng)))
                .collect();
        };
        self.reclaim(ga);
        let pop = result?;
        Ok(FoundryOutcome {
            population: pop,
            evaluations: evals.count(),
            best: evals.best_so_far(),
            trace: evals.trace().to_vec(),
            last_raw: evals.last_raw(),
            starts,
        })
    }
}

fn take_copy<T: Copy>(
    slot: &mut Slot<T>,
    i: usize,
    p: &Arc<dyn IncrementalObjective>,
) -> Result<T> {
    let v = slot.take(i, p)?;
    slot.put(i, v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::OneMax;

    fn foundry(n: usize, budget: u64) -> FastGaFoundry {
        let mut f = FastGaFoundry::shipped().with_problem(Arc::new(OneMax { n }));
        f.budget = budget;
        f
    }

    #[test]
    fn shipped_counts() {
        let f = FastGaFoundry::shipped();
        assert_eq!(f.sizes(), vec![5, 5, 10, 5, 5, 7, 3, 3, 5]);
        assert_eq!(f.design_space_size(), SHIPPED_DESIGN_SPACE);
        assert_eq!(f.crossover_rates.index(), 0);
        assert_eq!(
            f.crossovers.size() * f.crossover_rates.size() * f.mutation_rates.size(),
            250
        );
        assert_eq!(FastGaFoundry::new().design_space_size(), 0);
    }

    #[test]
    fn shipped_labels() {
        let f = FastGaFoundry::shipped();
        assert_eq!(
            f.crossovers.labels(),
            vec![
                "uniform(0.1)",
                "1-point",
                "uniform(0.3)",
                "3-point",
                "uniform(0.5)",
                "5-point",
                "uniform(0.7)",
                "7-point",
                "uniform(0.9)",
                "9-point"
            ]
        );
    }

    #[test]
    fn select_reports_bad_slot() {
        let mut f = foundry(10, 100);
        let mut e = EncodedAlgorithm::zeros(9);
        e.0[2] = 10;
        match f.select(&e) {
            Err(Error::SlotIndex {
                slot,
                index: 10,
                size: 10,
            }) => assert_eq!(slot, "crossover"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            f.select(&EncodedAlgorithm::zeros(3)),
            Err(Error::EncodingLength { .. })
        ));
        let mut rng = RngStream::new(0);
        assert!(matches!(
            f.run(Vec::new(), &mut rng),
            Err(Error::NotSelected)
        ));
    }

    #[test]
    fn reselect_uses_cache() {
        let mut f = foundry(10, 200);
        let e = EncodedAlgorithm(vec![1, 1, 2, 1, 0, 5, 0, 0, 1]);
        f.select(&e).unwrap();
        let mut rng = RngStream::new(1);
        let pop = f.initial_population(&mut rng).unwrap();
        f.run(pop, &mut rng).unwrap();
        let built = (f.crossovers.constructions(), f.mutations.constructions());
        f.select(&e).unwrap();
        let pop = f.initial_population(&mut rng).unwrap();
        f.run(pop, &mut rng).unwrap();
        assert_eq!(
            (f.crossovers.constructions(), f.mutations.constructions()),
            built
        );
        assert_eq!(f.selected_labels().unwrap()[2], "uniform(0.3)");
    }

    #[test]
    fn zero_budget_returns_evaluated_initial_population() {
        let mut f = foundry(12, 0);
        f.select(&EncodedAlgorithm(vec![2, 1, 0, 2, 1, 0, 0, 0, 2]))
            .unwrap();
        let mut rng = RngStream::new(5);
        let pop = f.initial_population(&mut rng).unwrap();
        let genos: Vec<_> = pop.iter().map(|s| s.genotype.clone()).collect();
        let out = f.run(pop, &mut rng).unwrap();
        assert_eq!(out.starts, 1);
        assert_eq!(out.evaluations, 10);
        assert!(out.population.iter().all(Solution::is_valid));
        assert_eq!(
            out.population
                .iter()
                .map(|s| s.genotype.clone())
                .collect::<Vec<_>>(),
            genos
        );
    }

    #[test]
    fn matches_hand_assembled() {
        let e = EncodedAlgorithm(vec![3, 1, 3, 2, 2, 1, 1, 0, 2]);
        let problem = OneMax { n: 30 };
        let mut f = foundry(30, 500);
        f.select(&e).unwrap();
        let mut rng = RngStream::new(9);
        let pop = f.initial_population(&mut rng).unwrap();
        let from_foundry = f.run(pop, &mut rng).unwrap();

        let mut ga = FastGa {
            pop_size: 10,
            offspring_size: 50,
            crossover_rate: 0.6,
            crossover_selection: Selection::Tournament(2),
            crossover: Box::new(KPointCrossover { k: 3 }),
            mutation_rate: 0.4,
            mutation_selection: Selection::Tournament(4),
            mutation: Box::new(BitflipRate::per_length(1.0).unwrap()),
            replacement: Replacement::Comma {
                weak_elitism: false,
            },
            continuator: Continuator::Target(30.0),
            workers: 1,
        };
        let mut rng = RngStream::new(9);
        let pop: Population<BitString> = (0..10)
            .map(|_| Solution::new(random_bits(30, &mut rng)))
            .collect();
        let mut evals = EvalCounter::new(&problem).with_limit(500);
        let by_hand = ga.run(pop, &mut evals, &mut rng, None).unwrap();
        assert_eq!(from_foundry.population, by_hand);
        assert_eq!(from_foundry.evaluations, evals.count());
    }
}
