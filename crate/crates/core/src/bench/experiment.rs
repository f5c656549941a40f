use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::eval::{Objective, TracePoint};
use crate::foundry::{EncodedAlgorithm, FastGaFoundry, FoundryOutcome};
use crate::par;
use crate::problems::BitProblem;
use crate::rng::RngStream;

use super::ecdf::{ecdf_sum, EcdfLogger, EcdfMatrix, LinearRange};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub seed: u64,
    pub budget: u64,
    pub target_buckets: usize,
    pub budget_buckets: usize,
    /// Run independent runs on the rayon pool.
    pub parallel_runs: bool,
    pub trajectory_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            runs: 1,
            seed: 0,
            budget: 1000,
            target_buckets: 10,
            budget_buckets: 10,
            parallel_runs: false,
            trajectory_dir: None,
        }
    }
}

/// What a single run reports back.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub best: Option<f64>,
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
    pub last_raw: Option<f64>,
}

impl From<&FoundryOutcome> for RunTrace {
    fn from(o: &FoundryOutcome) -> Self {
        Self {
            best: o.best,
            evaluations: o.evaluations,
            trace: o.trace.clone(),
            last_raw: o.last_raw,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    /// Global run index; the run used stream `(seed, run)`.
    pub run: u64,
    pub encoding: Option<EncodedAlgorithm>,
    pub problem: String,
    pub best: Option<f64>,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    /// `-ecdf_sum`, for tuners that minimize.
    pub cost: f64,
    pub ecdf: EcdfMatrix,
    pub records: Vec<RunRecord>,
}

/// Run `cfg.runs` seeded runs of `run_one` on every problem and fold them
/// into one ECDF. Run `k = p * runs + r` uses stream `(seed, k)`, so results
/// do not depend on scheduling.
pub fn run_suite<R>(
    problems: &[BitProblem],
    cfg: &ExperimentConfig,
    encoding: Option<&EncodedAlgorithm>,
    run_one: R,
) -> Result<Experiment>
where
    R: Fn(&BitProblem, &mut RngStream) -> Result<RunTrace> + Sync + Send,
{
    if cfg.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let total = problems.len() * cfg.runs;
    let results = par::map_indexed(total, cfg.parallel_runs, |k| {
        let mut rng = RngStream::for_run(cfg.seed, k as u64);
        run_one(&problems[k / cfg.runs], &mut rng)
    });
    let budgets = LinearRange::new(0.0, cfg.budget.max(1) as f64, cfg.budget_buckets)?;
    let mut ecdf = EcdfMatrix::zeros(cfg.target_buckets, cfg.budget_buckets);
    let mut records = Vec::with_capacity(total);
    for (k, result) in results.into_iter().enumerate() {
        let trace = result?;
        let problem = &problems[k / cfg.runs];
        let top = problem
            .optimum()
            .unwrap_or(problem.dimension() as f64)
            .max(1.0);
        let mut logger = EcdfLogger::new(LinearRange::new(0.0, top, cfg.target_buckets)?, budgets);
        for p in &trace.trace {
            logger.observe(p.evaluations, p.best)?;
        }
        if let Some(best) = trace.best {
            logger.observe(trace.evaluations, best)?;
        }
        logger.fold_run();
        ecdf.merge(logger.matrix())?;
        if let Some(dir) = &cfg.trajectory_dir {
            let path = dir.join(trajectory_file_name(
                &problem.to_string(),
                k as u64,
                cfg.seed,
            ));
            write_trajectory(&path, &trace)?;
        }
        records.push(RunRecord {
            seed: cfg.seed,
            run: k as u64,
            encoding: encoding.cloned(),
            problem: problem.to_string(),
            best: trace.best,
            evaluations: trace.evaluations,
        });
    }
    Ok(Experiment {
        cost: -(ecdf_sum(&ecdf) as f64),
        ecdf,
        records,
    })
}

/// [`run_suite`] for one encoded algorithm of a foundry. `make_foundry`
/// builds a fresh foundry per run; the config's budget overrides the
/// foundry's.
pub fn run_experiment<F>(
    make_foundry: F,
    encoding: &EncodedAlgorithm,
    problems: &[BitProblem],
    cfg: &ExperimentConfig,
) -> Result<Experiment>
where
    F: Fn() -> FastGaFoundry + Sync + Send,
{
    run_suite(problems, cfg, Some(encoding), |problem, rng| {
        let mut foundry = make_foundry().with_problem(Arc::new(problem.clone()));
        foundry.budget = cfg.budget;
        foundry.select(encoding)?;
        let pop = foundry.initial_population(rng)?;
        let outcome = foundry.run(pop, rng)?;
        Ok(RunTrace::from(&outcome))
    })
}

/// `<problem>_run<k>_seed<s>.csv`, with characters outside `[A-Za-z0-9._-]`
/// in the problem id replaced by `_`.
pub fn trajectory_file_name(problem: &str, run: u64, seed: u64) -> String {
    let clean: String = problem
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{clean}_run{run}_seed{seed}.csv")
}

/// Write `evaluations,raw_y,best_y`: one row per improving evaluation, plus
/// the final evaluation when it differs from the last row.
pub fn write_trajectory(path: &Path, run: &RunTrace) -> Result<()> {
    let mut out = String::from("evaluations,raw_y,best_y\n");
    for p in &run.trace {
        let _ = writeln!(out, "{},{},{}", p.evaluations, p.raw, p.best);
    }
    if let (Some(raw), Some(best)) = (run.last_raw, run.best) {
        let last = run.trace.last().map(|p| p.evaluations);
        if last != Some(run.evaluations) {
            let _ = writeln!(out, "{},{},{}", run.evaluations, raw, best);
        }
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(runs: usize, budget: u64) -> ExperimentConfig {
        ExperimentConfig {
            runs,
            seed: 42,
            budget,
            ..ExperimentConfig::default()
        }
    }

    fn enc() -> EncodedAlgorithm {
        EncodedAlgorithm(vec![2, 1, 1, 2, 1, 1, 0, 0, 2])
    }

    #[test]
    fn deterministic_and_schedule_independent() {
        let problems = [BitProblem::onemax(20)];
        let a = run_experiment(FastGaFoundry::shipped, &enc(), &problems, &cfg(4, 300)).unwrap();
        let mut c = cfg(4, 300);
        c.parallel_runs = true;
        let b = run_experiment(FastGaFoundry::shipped, &enc(), &problems, &c).unwrap();
        assert_eq!(a.cost, b.cost);
        assert_eq!(a.records, b.records);
        assert!(a.cost < 0.0);
        assert_eq!(a.ecdf.runs_folded, 4);
        assert!(a.records.iter().all(|r| r.evaluations <= 300));
    }

    #[test]
    fn identical_runs_add_up() {
        let problems = [BitProblem::onemax(10)];
        let fixed = |_: &BitProblem, _: &mut RngStream| {
            Ok(RunTrace {
                best: Some(7.0),
                evaluations: 40,
                trace: vec![
                    TracePoint {
                        evaluations: 1,
                        raw: 3.0,
                        best: 3.0,
                    },
                    TracePoint {
                        evaluations: 30,
                        raw: 7.0,
                        best: 7.0,
                    },
                ],
                last_raw: Some(5.0),
            })
        };
        let one = run_suite(&problems, &cfg(1, 100), None, fixed).unwrap();
        let two = run_suite(&problems, &cfg(2, 100), None, fixed).unwrap();
        assert_eq!(two.cost, 2.0 * one.cost);
    }

    #[test]
    fn zero_budget_uses_initial_population() {
        let problems = [BitProblem::onemax(10)];
        let e = run_experiment(FastGaFoundry::shipped, &enc(), &problems, &cfg(1, 0)).unwrap();
        assert_eq!(e.records[0].evaluations, 10);
        assert!(e.cost < 0.0);
        assert!(run_experiment(FastGaFoundry::shipped, &enc(), &problems, &cfg(0, 0)).is_err());
    }

    #[test]
    fn file_names() {
        assert_eq!(
            trajectory_file_name("onemax:n=10", 3, 7),
            "onemax_n_10_run3_seed7.csv"
        );
    }
}
