//! Estimation of distribution: explicit probability models, estimators that
//! fit them to a population and samplers that draw new populations. An
//! [`EdaVariation`] plugs the pair into the evolutionary loop as its breeding
//! stage.

use rand_distr::{Distribution as _, StandardNormal};

use crate::ea::Breed;
use crate::error::{Error, Result};
use crate::eval::EvalCounter;
use crate::rng::RngStream;
use crate::solution::{BitString, Population, RealVector, Solution};

/// Resampling attempts before a Gaussian coordinate is clipped to its bounds.
pub const MAX_RESAMPLE: usize = 100;

/// A model that can draw fresh (unevaluated) solutions.
pub trait Distribution<G> {
    fn sample(&self, count: usize, rng: &mut RngStream) -> Population<G>;
}

/// Fits a model to a set of solutions.
pub trait Estimator<G> {
    type Model: Distribution<G>;
    fn estimate(&self, pop: &[Solution<G>]) -> Result<Self::Model>;
}

/// Independent per-bit probabilities of a one.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliModel {
    pub p: Vec<f64>,
}

impl BernoulliModel {
    /// Column means of the genotypes, unclamped.
    pub fn column_means(pop: &[Solution<BitString>]) -> Result<Vec<f64>> {
        let first = pop.first().ok_or(Error::EmptyPopulation)?;
        let n = first.genotype.len();
        let mut ones = vec![0usize; n];
        for s in pop {
            if s.genotype.len() != n {
                return Err(Error::LengthMismatch(n, s.genotype.len()));
            }
            for (c, b) in ones.iter_mut().zip(&s.genotype) {
                *c += usize::from(*b);
            }
        }
        Ok(ones
            .into_iter()
            .map(|c| c as f64 / pop.len() as f64)
            .collect())
    }

    /// Clamp every probability to `[1/n, 1 - 1/n]`.
    pub fn clamped(mut p: Vec<f64>) -> Self {
        let n = p.len();
        if n > 1 {
            let margin = 1.0 / n as f64;
            for v in &mut p {
                *v = v.clamp(margin, 1.0 - margin);
            }
        }
        Self { p }
    }
}

pub fn estimate_bernoulli(pop: &[Solution<BitString>]) -> Result<BernoulliModel> {
    Ok(BernoulliModel::clamped(BernoulliModel::column_means(pop)?))
}

impl Distribution<BitString> for BernoulliModel {
    fn sample(&self, count: usize, rng: &mut RngStream) -> Population<BitString> {
        (0..count)
            .map(|_| Solution::new(self.p.iter().map(|&p| rng.coin(p)).collect()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BernoulliEstimator;

impl Estimator<BitString> for BernoulliEstimator {
    type Model = BernoulliModel;
    fn estimate(&self, pop: &[Solution<BitString>]) -> Result<BernoulliModel> {
        estimate_bernoulli(pop)
    }
}

/// Independent normal per coordinate, truncated to a box.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDiagModel {
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl GaussianDiagModel {
    /// Smallest standard deviation allowed in coordinate `i`.
    pub fn sigma_min(lower: f64, upper: f64) -> f64 {
        let range = upper - lower;
        if range.is_finite() && range > 0.0 {
            1e-12 * range
        } else {
            1e-12
        }
    }
}

/// Sample mean and (n-1)-divisor standard deviation per coordinate, floored
/// at `1e-12 * (upper - lower)`.
pub fn estimate_gaussian_diag(
    pop: &[Solution<RealVector>],
    lower: &[f64],
    upper: &[f64],
) -> Result<GaussianDiagModel> {
    if pop.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a Gaussian estimate needs at least 2 members, got {}",
            pop.len()
        )));
    }
    let d = lower.len();
    if upper.len() != d {
        return Err(Error::LengthMismatch(d, upper.len()));
    }
    if let Some(s) = pop.iter().find(|s| s.genotype.len() != d) {
        return Err(Error::LengthMismatch(d, s.genotype.len()));
    }
    let n = pop.len() as f64;
    let mut mean = vec![0.0; d];
    for s in pop {
        for (m, x) in mean.iter_mut().zip(&s.genotype) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for s in pop {
        for ((v, x), m) in var.iter_mut().zip(&s.genotype).zip(&mean) {
            *v += (x - m).powi(2);
        }
    }
    let sigma = var
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (v / (n - 1.0))
                .sqrt()
                .max(GaussianDiagModel::sigma_min(lower[i], upper[i]))
        })
        .collect();
    Ok(GaussianDiagModel {
        mean,
        sigma,
        lower: lower.to_vec(),
        upper: upper.to_vec(),
    })
}

impl Distribution<RealVector> for GaussianDiagModel {
    fn sample(&self, count: usize, rng: &mut RngStream) -> Population<RealVector> {
        (0..count)
            .map(|_| {
                let x = (0..self.mean.len())
                    .map(|i| {
                        let (lo, hi) = (self.lower[i], self.upper[i]);
                        let mut v = 0.0;
                        for _ in 0..MAX_RESAMPLE {
                            let z: f64 = StandardNormal.sample(rng);
                            v = self.mean[i] + self.sigma[i] * z;
                            if (lo..=hi).contains(&v) {
                                return v;
                            }
                        }
                        v.clamp(lo, hi)
                    })
                    .collect();
                Solution::new(x)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GaussianEstimator {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Estimator<RealVector> for GaussianEstimator {
    type Model = GaussianDiagModel;
    fn estimate(&self, pop: &[Solution<RealVector>]) -> Result<GaussianDiagModel> {
        estimate_gaussian_diag(pop, &self.lower, &self.upper)
    }
}

/// Explicit variation: keep the best `fraction` of the parents, fit a model,
/// sample `offspring` new solutions.
pub struct EdaVariation<E> {
    pub fraction: f64,
    pub estimator: E,
    pub offspring: usize,
}

impl<E> EdaVariation<E> {
    pub fn new(fraction: f64, estimator: E, offspring: usize) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "selection fraction {fraction} not in (0, 1]"
            )));
        }
        Ok(Self {
            fraction,
            estimator,
            offspring,
        })
    }

    /// Number of parents kept out of `len`.
    pub fn kept(&self, len: usize) -> usize {
        ((self.fraction * len as f64).ceil() as usize).clamp(1, len.max(1))
    }
}

impl<G: Clone, E: Estimator<G>> Breed<G> for EdaVariation<E> {
    fn breed(
        &mut self,
        parents: &[Solution<G>],
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, G>,
    ) -> Result<Population<G>> {
        if parents.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let dir = evals.direction();
        let mut order: Vec<(usize, f64)> = parents
            .iter()
            .enumerate()
            .map(|(i, s)| s.value().map(|f| (i, f)).ok_or(Error::Unevaluated(i)))
            .collect::<Result<_>>()?;
        order.sort_by(|a, b| dir.cmp(a.1, b.1).then(a.0.cmp(&b.0)));
        let selected: Vec<Solution<G>> = order[..self.kept(parents.len())]
            .iter()
            .map(|&(i, _)| parents[i].clone())
            .collect();
        let model = self.estimator.estimate(&selected)?;
        Ok(model.sample(self.offspring, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuator::Continuator;
    use crate::ea::{random_bits, EvolutionaryAlgorithm, Replacement};
    use crate::problems::OneMax;

    fn bits(s: &str) -> Solution<BitString> {
        Solution::new(s.chars().map(|c| c == '1').collect())
    }

    #[test]
    fn bernoulli_estimates() {
        let raw = BernoulliModel::column_means(&[bits("111"), bits("101"), bits("100")]).unwrap();
        assert_eq!(raw, vec![1.0, 1.0 / 3.0, 2.0 / 3.0]);
        let m = estimate_bernoulli(&[bits("101")]).unwrap();
        assert_eq!(m.p, vec![1.0 - 1.0 / 3.0, 1.0 / 3.0, 1.0 - 1.0 / 3.0]);
        assert!(estimate_bernoulli(&[]).is_err());
        assert!(estimate_bernoulli(&[bits("10"), bits("1")]).is_err());
    }

    #[test]
    fn bernoulli_uniform_population() {
        let mut rng = RngStream::new(1);
        let pop: Vec<_> = (0..10_000)
            .map(|_| Solution::new(random_bits(8, &mut rng)))
            .collect();
        let m = estimate_bernoulli(&pop).unwrap();
        let sd = (0.25f64 / 10_000.0).sqrt();
        assert!(m.p.iter().all(|p| (p - 0.5).abs() <= 4.0 * sd), "{:?}", m.p);
    }

    #[test]
    fn bernoulli_sampling_frequency() {
        let mut rng = RngStream::new(2);
        let n = 10;
        let m = BernoulliModel::clamped(vec![1.0; n]);
        let p = 1.0 - 1.0 / n as f64;
        let draws = 100_000;
        let pop = m.sample(draws, &mut rng);
        assert!(pop.iter().all(|s| !s.is_valid()));
        let ones = pop.iter().filter(|s| s.genotype[0]).count() as f64;
        let sd = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((ones / draws as f64 - p).abs() <= 4.0 * sd);
        assert!(m.sample(0, &mut rng).is_empty());
    }

    #[test]
    fn gaussian_estimates() {
        let pop = [Solution::new(vec![0.0]), Solution::new(vec![2.0])];
        let m = estimate_gaussian_diag(&pop, &[-10.0], &[10.0]).unwrap();
        assert_eq!(m.mean, vec![1.0]);
        assert!((m.sigma[0] - 2f64.sqrt()).abs() < 1e-15);

        let same = [Solution::new(vec![3.0]), Solution::new(vec![3.0])];
        let m = estimate_gaussian_diag(&same, &[-10.0], &[10.0]).unwrap();
        assert_eq!(m.sigma, vec![1e-12 * 20.0]);

        let pop = [Solution::new(vec![1.0, 3.0]), Solution::new(vec![3.0, 1.0])];
        let m = estimate_gaussian_diag(&pop, &[-5.0, -5.0], &[5.0, 5.0]).unwrap();
        assert_eq!(m.mean, vec![2.0, 2.0]);
        assert!(estimate_gaussian_diag(&pop[..1], &[-5.0, -5.0], &[5.0, 5.0]).is_err());
    }

    #[test]
    fn gaussian_sampling_mean_and_bounds() {
        let mut rng = RngStream::new(3);
        let m = GaussianDiagModel {
            mean: vec![0.0],
            sigma: vec![1.0],
            lower: vec![-100.0],
            upper: vec![100.0],
        };
        let draws = 100_000;
        let mean: f64 = m
            .sample(draws, &mut rng)
            .iter()
            .map(|s| s.genotype[0])
            .sum::<f64>()
            / draws as f64;
        assert!(mean.abs() <= 4.0 / (draws as f64).sqrt());

        let narrow = GaussianDiagModel {
            mean: vec![50.0],
            sigma: vec![1.0],
            lower: vec![0.0],
            upper: vec![1.0],
        };
        assert!(narrow
            .sample(10, &mut rng)
            .iter()
            .all(|s| s.genotype[0] == 1.0));
    }

    #[test]
    fn converged_population_reproduces_clamped_model() {
        let problem = OneMax { n: 5 };
        let mut evals = EvalCounter::new(&problem);
        let parents: Vec<_> = (0..20)
            .map(|_| Solution::evaluated(vec![true; 5], 5.0))
            .collect();
        let before = parents.clone();
        let mut eda = EdaVariation::new(1.0, BernoulliEstimator, 50_000).unwrap();
        let mut rng = RngStream::new(4);
        let kids = eda.breed(&parents, &mut rng, &mut evals).unwrap();
        assert_eq!(parents, before);
        let freq = kids.iter().filter(|s| s.genotype[2]).count() as f64 / kids.len() as f64;
        let sd = (0.8f64 * 0.2 / kids.len() as f64).sqrt();
        assert!((freq - 0.8).abs() <= 4.0 * sd);
        assert!(EdaVariation::new(0.0, BernoulliEstimator, 1).is_err());
    }

    fn umda(seed: u64) -> (f64, u64, Vec<f64>) {
        let problem = OneMax { n: 50 };
        let mut evals = EvalCounter::new(&problem).with_limit(50_000);
        let mut alg = EvolutionaryAlgorithm {
            pop_size: 100,
            selection: None,
            breeder: Box::new(EdaVariation::new(0.5, BernoulliEstimator, 100).unwrap()),
            replacement: Replacement::Generational,
            continuator: Continuator::Target(50.0),
            workers: 1,
        };
        let mut rng = RngStream::new(seed);
        let pop = alg
            .run(&mut |r| random_bits(50, r), &mut evals, &mut rng, None)
            .unwrap();
        let fit = pop.iter().map(|s| s.value().unwrap()).collect();
        (evals.best_so_far().unwrap(), evals.count(), fit)
    }

    #[test]
    fn umda_solves_onemax() {
        for seed in 0..5 {
            let (best, count, _) = umda(seed);
            assert_eq!(best, 50.0, "seed {seed}");
            assert!(count <= 50_000);
        }
        assert_eq!(umda(7), umda(7));
    }
}
