//! Fitness landscape statistics over bitstring problems.
//!
//! Autocorrelation uses the plain ratio of sums (population divisor on both
//! sides), which keeps |rho| <= 1. Fitness-distance correlation is Pearson's
//! sample correlation against Hamming distance.

use crate::error::{Error, Result};
use crate::par;
use crate::problems::IncrementalObjective;
use crate::rng::RngStream;
use crate::solution::{BitString, Solution};

use super::{hill_climb, Improvement, OneFlip};

/// Fitness values visited by a walk, start included.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub fitness: Vec<f64>,
}

impl WalkTrace {
    pub fn steps(&self) -> usize {
        self.fitness.len().saturating_sub(1)
    }
}

/// Uniform random one-flip walk of `steps` moves, scored incrementally.
pub fn random_walk<P: IncrementalObjective + ?Sized>(
    problem: &P,
    start: &Solution<BitString>,
    steps: usize,
    rng: &mut RngStream,
) -> Result<WalkTrace> {
    let mut fitness = match start.value() {
        Some(f) => f,
        None => problem.evaluate(&start.genotype)?,
    };
    let mut x = start.genotype.clone();
    let n = x.len();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(fitness);
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot walk on an empty genotype".into(),
        ));
    }
    for _ in 0..steps {
        let mv = rng.below(n);
        fitness = problem.flip_eval(&x, fitness, mv)?;
        OneFlip::apply(&mut x, mv);
        trace.push(fitness);
    }
    Ok(WalkTrace { fitness: trace })
}

/// Sample autocorrelation at `lag`:
/// `sum_t (f_t - mean)(f_{t+lag} - mean) / sum_t (f_t - mean)^2`.
pub fn autocorrelation(series: &[f64], lag: usize) -> Result<f64> {
    if lag >= series.len() {
        return Err(Error::InvalidArgument(format!(
            "lag {lag} needs a series longer than {}",
            series.len()
        )));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let denom: f64 = series.iter().map(|f| (f - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance("walk fitness"));
    }
    let num: f64 = series
        .iter()
        .zip(&series[lag..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum();
    Ok(num / denom)
}

/// Number of best-improvement steps from `start` to a local optimum.
pub fn adaptive_walk_from<P: IncrementalObjective + ?Sized>(
    problem: &P,
    start: BitString,
    rng: &mut RngStream,
) -> Result<u64> {
    let out = hill_climb(
        problem,
        Solution::new(start),
        &OneFlip::default(),
        Improvement::Best,
        None,
        rng,
    )?;
    Ok(out.steps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveWalks {
    pub lengths: Vec<u64>,
}

impl AdaptiveWalks {
    pub fn mean(&self) -> f64 {
        if self.lengths.is_empty() {
            return f64::NAN;
        }
        self.lengths.iter().sum::<u64>() as f64 / self.lengths.len() as f64
    }

    /// `(length, count)` pairs in ascending length order.
    pub fn distribution(&self) -> Vec<(u64, usize)> {
        let mut sorted = self.lengths.clone();
        sorted.sort_unstable();
        let mut out: Vec<(u64, usize)> = Vec::new();
        for l in sorted {
            match out.last_mut() {
                Some((v, c)) if *v == l => *c += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }
}

/// Adaptive walks from `restarts` uniform random starts. Each restart gets
/// its own stream forked from `rng`, so the result does not depend on how the
/// restarts are scheduled.
pub fn adaptive_walk_length<P: IncrementalObjective + ?Sized>(
    problem: &P,
    restarts: usize,
    rng: &mut RngStream,
) -> Result<AdaptiveWalks> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    let n = problem.dimension();
    let streams: Vec<RngStream> = (0..restarts).map(|_| rng.fork()).collect();
    let lengths = par::map_indexed(restarts, par::ENABLED, |i| {
        let mut s = streams[i].clone();
        let start = crate::ea::random_bits(n, &mut s);
        adaptive_walk_from(problem, start, &mut s)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(AdaptiveWalks { lengths })
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Pearson correlation between fitness and Hamming distance to `optimum`.
pub fn fitness_distance_correlation(samples: &[(BitString, f64)], optimum: &[bool]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if let Some((g, _)) = samples.iter().find(|(g, _)| g.len() != optimum.len()) {
        return Err(Error::LengthMismatch(g.len(), optimum.len()));
    }
    let n = samples.len() as f64;
    let d: Vec<f64> = samples
        .iter()
        .map(|(g, _)| hamming(g, optimum) as f64)
        .collect();
    let f: Vec<f64> = samples.iter().map(|(_, f)| *f).collect();
    let md = d.iter().sum::<f64>() / n;
    let mf = f.iter().sum::<f64>() / n;
    let (mut sdf, mut sdd, mut sff) = (0.0, 0.0, 0.0);
    for (di, fi) in d.iter().zip(&f) {
        sdf += (di - md) * (fi - mf);
        sdd += (di - md).powi(2);
        sff += (fi - mf).powi(2);
    }
    if sdd == 0.0 {
        return Err(Error::ZeroVariance("distance"));
    }
    if sff == 0.0 {
        return Err(Error::ZeroVariance("fitness"));
    }
    Ok(sdf / (sdd.sqrt() * sff.sqrt()))
}

/// Histogram of fitness values, one bin per distinct level.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOfStates {
    /// `(fitness, count)` in ascending fitness order.
    pub levels: Vec<(f64, u64)>,
}

impl DensityOfStates {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.into_iter().collect();
        v.sort_by(f64::total_cmp);
        let mut levels: Vec<(f64, u64)> = Vec::new();
        for f in v {
            match levels.last_mut() {
                Some((l, c)) if *l == f => *c += 1,
                _ => levels.push((f, 1)),
            }
        }
        Self { levels }
    }

    /// Enumerate all `2^n` genotypes. Only sensible for small `n`.
    pub fn exhaustive<P: IncrementalObjective + ?Sized>(problem: &P) -> Result<Self> {
        let n = problem.dimension();
        if n > 24 {
            return Err(Error::InvalidArgument(format!(
                "exhaustive enumeration of n={n} bits"
            )));
        }
        let values = (0u64..1 << n)
            .map(|code| {
                let x: BitString = (0..n).map(|i| code >> i & 1 == 1).collect();
                problem.evaluate(&x)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_values(values))
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().map(|(_, c)| c).sum()
    }

    pub fn count(&self, fitness: f64) -> u64 {
        self.levels
            .iter()
            .find(|(f, _)| *f == fitness)
            .map_or(0, |(_, c)| *c)
    }
}

const DOS_BLOCK: usize = 4096;

/// Fitness histogram of `samples` uniformly drawn genotypes.
pub fn density_of_states<P: IncrementalObjective + ?Sized>(
    problem: &P,
    samples: usize,
    rng: &mut RngStream,
) -> Result<DensityOfStates> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let n = problem.dimension();
    let blocks = samples.div_ceil(DOS_BLOCK);
    let streams: Vec<RngStream> = (0..blocks).map(|_| rng.fork()).collect();
    let chunks = par::map_indexed(blocks, par::ENABLED, |b| {
        let mut s = streams[b].clone();
        let size = DOS_BLOCK.min(samples - b * DOS_BLOCK);
        (0..size)
            .map(|_| problem.evaluate(&crate::ea::random_bits(n, &mut s)))
            .collect::<Result<Vec<f64>, _>>()
    });
    let mut values = Vec::with_capacity(samples);
    for c in chunks {
        values.extend(c?);
    }
    Ok(DensityOfStates::from_values(values))
}
