//! Single-solution local search over explicit neighborhoods, and fitness
//! landscape statistics.
//!
//! Every move is scored with [`IncrementalObjective::flip_eval`]; full
//! evaluations only happen when a start solution arrives unevaluated.

pub mod landscape;

use std::sync::Arc;

use crate::ea::variation::{Mutation, VariationResult};
use crate::error::{Error, Result};
use crate::eval::EvalCounter;
use crate::problems::IncrementalObjective;
use crate::rng::RngStream;
use crate::solution::{BitString, Solution};

pub use landscape::{
    adaptive_walk_from, adaptive_walk_length, autocorrelation, density_of_states,
    fitness_distance_correlation, random_walk, AdaptiveWalks, DensityOfStates, WalkTrace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveOrder {
    /// Index-ascending.
    Ascending,
    /// A fresh permutation drawn from the stream at every scan.
    Shuffled,
}

/// One-bit-flip neighborhood. A move is the index of the bit to flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneFlip {
    pub order: MoveOrder,
}

impl Default for OneFlip {
    fn default() -> Self {
        Self {
            order: MoveOrder::Ascending,
        }
    }
}

impl OneFlip {
    pub fn moves(&self, n: usize, rng: &mut RngStream) -> Vec<usize> {
        let mut m: Vec<usize> = (0..n).collect();
        if self.order == MoveOrder::Shuffled {
            use rand::seq::SliceRandom;
            m.shuffle(rng);
        }
        m
    }

    pub fn apply(x: &mut BitString, mv: usize) {
        x[mv] = !x[mv];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Improvement {
    First,
    Best,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClimbOutcome {
    pub solution: Solution<BitString>,
    /// Moves applied.
    pub steps: u64,
    /// Full neighborhood scans started.
    pub scans: u64,
    /// Incremental evaluations performed.
    pub move_evaluations: u64,
    /// `true` when the last scan found no improving move.
    pub local_optimum: bool,
}

fn start_fitness<P: IncrementalObjective + ?Sized>(
    problem: &P,
    s: &Solution<BitString>,
) -> Result<f64> {
    match s.value() {
        Some(f) => Ok(f),
        None => Ok(problem.evaluate(&s.genotype)?),
    }
}

/// Hill climbing with first or best improvement.
///
/// Stops at a local optimum (a full scan with no strictly improving move) or
/// after `max_steps` moves. Best improvement takes the first of equally good
/// moves in scan order. The start solution should be valid; if it is not it
/// is evaluated directly on `problem`.
pub fn hill_climb<P: IncrementalObjective + ?Sized>(
    problem: &P,
    start: Solution<BitString>,
    nb: &OneFlip,
    mode: Improvement,
    max_steps: Option<u64>,
    rng: &mut RngStream,
) -> Result<ClimbOutcome> {
    let dir = problem.direction();
    let mut fitness = start_fitness(problem, &start)?;
    let mut x = start.genotype;
    let n = x.len();
    let (mut steps, mut scans, mut move_evals) = (0u64, 0u64, 0u64);
    let mut local_optimum = false;
    while max_steps.is_none_or(|m| steps < m) {
        scans += 1;
        let mut chosen: Option<(usize, f64)> = None;
        for mv in nb.moves(n, rng) {
            let f = problem.flip_eval(&x, fitness, mv)?;
            move_evals += 1;
            let reference = chosen.map_or(fitness, |(_, cf)| cf);
            if dir.better(f, reference) {
                chosen = Some((mv, f));
                if mode == Improvement::First {
                    break;
                }
            }
        }
        match chosen {
            Some((mv, f)) => {
                OneFlip::apply(&mut x, mv);
                fitness = f;
                steps += 1;
            }
            None => {
                local_optimum = true;
                break;
            }
        }
    }
    Ok(ClimbOutcome {
        solution: Solution::evaluated(x, fitness),
        steps,
        scans,
        move_evaluations: move_evals,
        local_optimum,
    })
}

/// Geometric cooling schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingSchedule {
    pub initial_temperature: f64,
    pub alpha: f64,
    pub steps_per_temperature: u64,
    pub final_temperature: f64,
}

impl CoolingSchedule {
    pub fn validate(&self) -> Result<()> {
        let t0 = self.initial_temperature;
        let tmin = self.final_temperature;
        if !(t0 > tmin && tmin > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need T0 > Tmin > 0, got T0={t0}, Tmin={tmin}"
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cooling factor {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.steps_per_temperature == 0 {
            return Err(Error::InvalidArgument(
                "steps per temperature must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Metropolis rule. `gain` is the fitness change expressed so that positive
/// means better; non-negative gains are always accepted.
pub fn metropolis_accept(gain: f64, temperature: f64, rng: &mut RngStream) -> bool {
    gain >= 0.0 || rng.uniform() < (gain / temperature).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome {
    /// Best solution visited.
    pub best: Solution<BitString>,
    pub moves_tried: u64,
    pub moves_accepted: u64,
}

/// Simulated annealing over uniformly random one-flip moves. Runs until the
/// temperature falls to the final temperature or `max_moves` is reached.
pub fn simulated_annealing<P: IncrementalObjective + ?Sized>(
    problem: &P,
    start: Solution<BitString>,
    schedule: &CoolingSchedule,
    max_moves: Option<u64>,
    rng: &mut RngStream,
) -> Result<AnnealOutcome> {
    schedule.validate()?;
    let dir = problem.direction();
    let mut fitness = start_fitness(problem, &start)?;
    let mut x = start.genotype;
    let n = x.len();
    let mut best = Solution::evaluated(x.clone(), fitness);
    let (mut tried, mut accepted) = (0u64, 0u64);
    let mut t = schedule.initial_temperature;
    'outer: while t > schedule.final_temperature && n > 0 {
        for _ in 0..schedule.steps_per_temperature {
            if max_moves.is_some_and(|m| tried >= m) {
                break 'outer;
            }
            let mv = rng.below(n);
            let f = problem.flip_eval(&x, fitness, mv)?;
            tried += 1;
            if metropolis_accept(dir.to_max(f) - dir.to_max(fitness), t, rng) {
                OneFlip::apply(&mut x, mv);
                fitness = f;
                accepted += 1;
                if dir.better(fitness, best.value().unwrap_or(fitness)) {
                    best = Solution::evaluated(x.clone(), fitness);
                }
            }
        }
        t *= schedule.alpha;
    }
    Ok(AnnealOutcome {
        best,
        moves_tried: tried,
        moves_accepted: accepted,
    })
}

/// Hill climbing packaged as a mutation slot, which turns an evolutionary
/// algorithm into a memetic one.
///
/// An unevaluated input is evaluated through the shared counter first; move
/// evaluations are reported to the same counter as incremental evaluations.
/// The returned solution carries the exact fitness reached by the climb.
pub struct LocalSearchVariation<P: ?Sized> {
    problem: Arc<P>,
    pub neighborhood: OneFlip,
    pub mode: Improvement,
    pub max_steps: Option<u64>,
}

impl<P: IncrementalObjective + ?Sized> LocalSearchVariation<P> {
    pub fn new(problem: Arc<P>, mode: Improvement, max_steps: Option<u64>) -> Self {
        Self {
            problem,
            neighborhood: OneFlip::default(),
            mode,
            max_steps,
        }
    }
}

impl<P: IncrementalObjective + ?Sized> Mutation<BitString> for LocalSearchVariation<P> {
    fn mutate(
        &mut self,
        s: &mut Solution<BitString>,
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, BitString>,
    ) -> Result<VariationResult> {
        if self.max_steps == Some(0) {
            return Ok(VariationResult::UNCHANGED);
        }
        if !s.is_valid() {
            let f = evals.evaluate(&s.genotype)?;
            s.set_fitness(f);
        }
        let out = hill_climb(
            &*self.problem,
            s.clone(),
            &self.neighborhood,
            self.mode,
            self.max_steps,
            rng,
        )?;
        if let Some(f) = out.solution.value() {
            evals.record_incremental_batch(out.move_evaluations, f);
        }
        let changed = out.steps > 0;
        *s = out.solution;
        Ok(VariationResult { changed })
    }

    fn name(&self) -> String {
        let mode = match self.mode {
            Improvement::First => "first",
            Improvement::Best => "best",
        };
        match self.max_steps {
            Some(m) => format!("hill-climb({mode}, steps<={m})"),
            None => format!("hill-climb({mode})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Objective;
    use crate::problems::{BitProblem, OneMax};

    fn bits(s: &str) -> BitString {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn climb_from_optimum_is_one_scan() {
        let p = OneMax { n: 5 };
        let mut r = RngStream::new(0);
        let s = Solution::evaluated(bits("11111"), 5.0);
        let out = hill_climb(
            &p,
            s.clone(),
            &OneFlip::default(),
            Improvement::Best,
            None,
            &mut r,
        )
        .unwrap();
        assert_eq!(out.solution, s);
        assert_eq!((out.steps, out.scans), (0, 1));
        assert!(out.local_optimum);
    }

    #[test]
    fn best_improvement_onemax_five_steps() {
        let p = OneMax { n: 5 };
        let mut r = RngStream::new(0);
        let s = Solution::evaluated(bits("00000"), 0.0);
        let out = hill_climb(&p, s, &OneFlip::default(), Improvement::Best, None, &mut r).unwrap();
        assert_eq!(out.solution.genotype, bits("11111"));
        assert_eq!(out.solution.value(), Some(5.0));
        assert_eq!(out.steps, 5);
    }

    #[test]
    fn first_and_best_agree_on_unimodal() {
        // Exhaustive over n = 8 starts: OneMax has a single optimum.
        let p = OneMax { n: 8 };
        let mut r = RngStream::new(0);
        for code in 0u32..256 {
            let x: BitString = (0..8).map(|i| code >> i & 1 == 1).collect();
            let f = p.evaluate(&x).unwrap();
            let a = hill_climb(
                &p,
                Solution::evaluated(x.clone(), f),
                &OneFlip::default(),
                Improvement::First,
                None,
                &mut r,
            )
            .unwrap();
            let b = hill_climb(
                &p,
                Solution::evaluated(x, f),
                &OneFlip::default(),
                Improvement::Best,
                None,
                &mut r,
            )
            .unwrap();
            assert_eq!(a.solution.value(), b.solution.value());
            assert_eq!(a.solution.value(), Some(8.0));
        }
    }

    #[test]
    fn climb_result_is_certified_local_optimum() {
        let p: BitProblem = "wmodel:n=24,m=24,mu=2,rug=adjswap".parse().unwrap();
        let mut r = RngStream::new(21);
        for _ in 0..50 {
            let x = crate::ea::random_bits(24, &mut r);
            let f = p.evaluate(&x).unwrap();
            let out = hill_climb(
                &p,
                Solution::evaluated(x, f),
                &OneFlip::default(),
                Improvement::First,
                None,
                &mut r,
            )
            .unwrap();
            let y = out.solution.genotype.clone();
            let fy = out.solution.value().unwrap();
            assert!(fy >= f);
            assert_eq!(p.evaluate(&y).unwrap(), fy);
            for i in 0..24 {
                let mut z = y.clone();
                z[i] = !z[i];
                assert!(p.evaluate(&z).unwrap() <= fy);
            }
        }
    }

    #[test]
    fn step_limit_respected() {
        let p = OneMax { n: 10 };
        let mut r = RngStream::new(0);
        let out = hill_climb(
            &p,
            Solution::new(vec![false; 10]),
            &OneFlip::default(),
            Improvement::First,
            Some(3),
            &mut r,
        )
        .unwrap();
        assert_eq!(out.steps, 3);
        assert!(!out.local_optimum);
        assert_eq!(out.solution.value(), Some(3.0));
    }

    #[test]
    fn shuffled_order_is_seeded() {
        let nb = OneFlip {
            order: MoveOrder::Shuffled,
        };
        let a = nb.moves(20, &mut RngStream::new(4));
        let b = nb.moves(20, &mut RngStream::new(4));
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn metropolis_rules() {
        let mut r = RngStream::new(6);
        assert!((0..1000).all(|_| metropolis_accept(0.0, 1e-9, &mut r)));
        assert!((0..1000).all(|_| !metropolis_accept(-1.0, 1e-6, &mut r)));
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| metropolis_accept(-1.0, 1.0, &mut r))
            .count();
        let p = (-1.0f64).exp();
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 3.0 * sd);
    }

    #[test]
    fn annealing_schedule_validation_and_run() {
        let p = OneMax { n: 30 };
        let mut r = RngStream::new(2);
        let bad = CoolingSchedule {
            initial_temperature: 1.0,
            alpha: 0.9,
            steps_per_temperature: 10,
            final_temperature: 2.0,
        };
        assert!(
            simulated_annealing(&p, Solution::new(vec![false; 30]), &bad, None, &mut r).is_err()
        );
        let bad_alpha = CoolingSchedule {
            alpha: 1.0,
            final_temperature: 0.1,
            ..bad
        };
        assert!(bad_alpha.validate().is_err());
        let cold = CoolingSchedule {
            initial_temperature: 1e-3,
            alpha: 0.5,
            steps_per_temperature: 2000,
            final_temperature: 1e-4,
        };
        let out =
            simulated_annealing(&p, Solution::new(vec![false; 30]), &cold, None, &mut r).unwrap();
        // Near-zero temperature behaves like a randomized hill climber.
        assert_eq!(out.best.value(), Some(30.0));
        assert_eq!(p.evaluate(&out.best.genotype).unwrap(), 30.0);
    }

    #[test]
    fn local_search_variation() {
        let p = Arc::new(OneMax { n: 5 });
        let mut r = RngStream::new(0);
        let obj = OneMax { n: 5 };
        let mut evals = EvalCounter::new(&obj);

        let mut zero_budget = LocalSearchVariation::new(p.clone(), Improvement::Best, Some(0));
        let mut s = Solution::new(bits("00000"));
        assert!(
            !zero_budget
                .mutate(&mut s, &mut r, &mut evals)
                .unwrap()
                .changed
        );
        assert_eq!(s.genotype, bits("00000"));

        let mut ls = LocalSearchVariation::new(p, Improvement::Best, None);
        let res = ls.mutate(&mut s, &mut r, &mut evals).unwrap();
        assert!(res.changed);
        assert_eq!(s.genotype, bits("11111"));
        assert_eq!(s.value(), Some(5.0));
        assert_eq!(evals.count(), 1);
        assert_eq!(evals.incremental_count(), 30);
        assert_eq!(evals.best_so_far(), Some(5.0));
    }
}
