//! Benchmarking: ECDF attainment over (target, budget) buckets, seeded run
//! suites with a scalar cost for tuners, CSV trajectories and throughput
//! measurement.

mod ecdf;
mod experiment;
mod throughput;

pub use ecdf::{ecdf_sum, EcdfLogger, EcdfMatrix, LinearRange};
pub use experiment::{
    run_experiment, run_suite, trajectory_file_name, write_trajectory, Experiment,
    ExperimentConfig, RunRecord, RunTrace,
};
pub use throughput::{ga_throughput, Delayed, Throughput};

pub use crate::eval::parallel_evaluate;
