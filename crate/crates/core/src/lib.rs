//! Modular metaheuristics assembled from interchangeable operators.
//!
//! The crate is organised by family:
//!
//! - [`solution`], [`eval`], [`continuator`], [`checkpoint`], [`rng`] and
//!   [`param`]: the solution model and the loop machinery every algorithm
//!   shares.
//! - [`problems`]: bitstring and real-vector benchmark objectives.
//! - [`ea`]: selection, variation, replacement, the generic evolutionary loop
//!   and the FastGA template.
//! - [`mo`]: single-solution local search and landscape statistics.
//! - [`moeo`]: Pareto dominance, sorting, diversity, archives, hypervolume and
//!   an NSGA-II generation.
//! - [`edo`]: estimation-of-distribution models used as explicit variation.
//! - [`foundry`]: integer-encoded instantiation of whole algorithms.
//! - [`bench`]: ECDF attainment logging, experiment suites and trajectory CSVs.
//!
//! Evaluation of populations can fan out over workers; see [`par`] and
//! [`eval::parallel_evaluate`]. Results never depend on the worker count.

pub mod bench;
pub mod checkpoint;
pub mod continuator;
pub mod ea;
pub mod edo;
pub mod error;
pub mod eval;
pub mod foundry;
pub mod mo;
pub mod moeo;
pub mod par;
pub mod param;
pub mod problems;
pub mod rng;
pub mod solution;

pub use error::{Error, ObjectiveError, Result};
pub use eval::{evaluate_population, parallel_evaluate, EvalCounter, Objective};
pub use rng::RngStream;
pub use solution::{BitString, Direction, Population, RealVector, Solution};
