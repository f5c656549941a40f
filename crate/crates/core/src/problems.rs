//! Built-in benchmark objectives.
//!
//! Bitstring problems are maximized, real-vector problems minimized. All of
//! them are immutable after construction and can be shared across workers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ObjectiveError};
use crate::eval::Objective;
use crate::solution::{BitString, Direction, RealVector};

/// A bitstring objective that can score a one-bit flip from the stored
/// fitness without a full re-evaluation.
pub trait IncrementalObjective: Objective<BitString> {
    /// Fitness of `x` with bit `index` flipped, given `fitness = f(x)`.
    /// `x` is not modified.
    fn flip_eval(&self, x: &BitString, fitness: f64, index: usize) -> Result<f64, ObjectiveError>;
}

fn check_len(expected: usize, x: &[bool]) -> Result<(), ObjectiveError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(ObjectiveError::Dimension {
            expected,
            got: x.len(),
        })
    }
}

fn check_move(n: usize, index: usize) -> Result<(), ObjectiveError> {
    if index < n {
        Ok(())
    } else {
        Err(ObjectiveError::MoveOutOfRange {
            index,
            dimension: n,
        })
    }
}

pub fn onemax(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

pub fn leadingones(x: &[bool]) -> usize {
    x.iter().take_while(|&&b| b).count()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

/// Ruggedness table on `{0..=m}`: `m` is fixed, then `(m-1, m-2)`,
/// `(m-3, m-4)`, ... are swapped going down; a leftover `0` stays put.
pub fn adjacent_swap_permutation(m: usize) -> Vec<usize> {
    let mut table: Vec<usize> = (0..=m).collect();
    let mut hi = m;
    while hi >= 2 {
        table.swap(hi - 1, hi - 2);
        hi -= 2;
    }
    table
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneMax {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingOnes {
    pub n: usize,
}

/// OneMax behind a dummy / neutrality / ruggedness layer stack.
///
/// Layers apply in order: keep the first `m` bits; reduce each block of `mu`
/// bits to its majority bit (ties give 0); count ones; remap the count through
/// the ruggedness table.
#[derive(Debug, Clone, PartialEq)]
pub struct WModel {
    n: usize,
    m: usize,
    mu: usize,
    ruggedness: Option<Vec<usize>>,
    inverse: Vec<usize>,
}

impl WModel {
    pub fn new(
        n: usize,
        m: usize,
        mu: usize,
        ruggedness: Option<Vec<usize>>,
    ) -> Result<Self, Error> {
        if m == 0 || m > n {
            return Err(Error::InvalidArgument(format!(
                "w-model dummy m={m} must satisfy 0 < m <= n={n}"
            )));
        }
        if !m.is_multiple_of(mu) || mu == 0 {
            return Err(Error::InvalidArgument(format!(
                "w-model neutrality mu={mu} must divide m={m}"
            )));
        }
        let reduced = m / mu;
        let mut inverse = vec![usize::MAX; reduced + 1];
        if let Some(t) = &ruggedness {
            if t.len() != reduced + 1 {
                return Err(Error::InvalidArgument(format!(
                    "ruggedness table has {} entries, expected {}",
                    t.len(),
                    reduced + 1
                )));
            }
            for (raw, &v) in t.iter().enumerate() {
                if v > reduced || inverse[v] != usize::MAX {
                    return Err(Error::InvalidArgument(
                        "ruggedness table is not a bijection".into(),
                    ));
                }
                inverse[v] = raw;
            }
        } else {
            inverse = (0..=reduced).collect();
        }
        Ok(Self {
            n,
            m,
            mu,
            ruggedness,
            inverse,
        })
    }

    /// Dimension after the dummy and neutrality layers.
    pub fn reduced_dimension(&self) -> usize {
        self.m / self.mu
    }

    pub fn dummy(&self) -> usize {
        self.m
    }

    pub fn neutrality(&self) -> usize {
        self.mu
    }

    pub fn ruggedness(&self) -> Option<&[usize]> {
        self.ruggedness.as_deref()
    }

    fn block_bit(&self, ones: usize) -> usize {
        usize::from(2 * ones > self.mu)
    }

    /// OneMax of the reduced string, before ruggedness.
    pub fn raw(&self, x: &[bool]) -> usize {
        x[..self.m]
            .chunks(self.mu)
            .map(|block| self.block_bit(onemax(block)))
            .sum()
    }

    fn remap(&self, raw: usize) -> usize {
        match &self.ruggedness {
            Some(t) => t[raw],
            None => raw,
        }
    }
}

impl Objective<BitString> for OneMax {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }
    fn evaluate(&self, x: &BitString) -> Result<f64, ObjectiveError> {
        check_len(self.n, x)?;
        Ok(onemax(x) as f64)
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn optimum(&self) -> Option<f64> {
        Some(self.n as f64)
    }
}

impl IncrementalObjective for OneMax {
    fn flip_eval(&self, x: &BitString, fitness: f64, index: usize) -> Result<f64, ObjectiveError> {
        check_move(self.n, index)?;
        Ok(if x[index] {
            fitness - 1.0
        } else {
            fitness + 1.0
        })
    }
}

impl Objective<BitString> for LeadingOnes {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }
    fn evaluate(&self, x: &BitString) -> Result<f64, ObjectiveError> {
        check_len(self.n, x)?;
        Ok(leadingones(x) as f64)
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn optimum(&self) -> Option<f64> {
        Some(self.n as f64)
    }
}

impl IncrementalObjective for LeadingOnes {
    fn flip_eval(&self, x: &BitString, fitness: f64, index: usize) -> Result<f64, ObjectiveError> {
        check_move(self.n, index)?;
        let prefix = fitness as usize;
        Ok(match index.cmp(&prefix) {
            std::cmp::Ordering::Less => index as f64,
            std::cmp::Ordering::Equal => (prefix + 1 + leadingones(&x[prefix + 1..])) as f64,
            std::cmp::Ordering::Greater => fitness,
        })
    }
}

impl Objective<BitString> for WModel {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }
    fn evaluate(&self, x: &BitString) -> Result<f64, ObjectiveError> {
        check_len(self.n, x)?;
        Ok(self.remap(self.raw(x)) as f64)
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn optimum(&self) -> Option<f64> {
        Some(self.reduced_dimension() as f64)
    }
}

impl IncrementalObjective for WModel {
    fn flip_eval(&self, x: &BitString, fitness: f64, index: usize) -> Result<f64, ObjectiveError> {
        check_move(self.n, index)?;
        if index >= self.m {
            return Ok(fitness);
        }
        let raw = self.inverse[fitness as usize];
        let start = index / self.mu * self.mu;
        let ones = onemax(&x[start..start + self.mu]);
        let flipped = if x[index] { ones - 1 } else { ones + 1 };
        let raw = raw + self.block_bit(flipped) - self.block_bit(ones);
        Ok(self.remap(raw) as f64)
    }
}

/// One of the built-in bitstring problems, parsed from a selection string
/// such as `onemax:n=100` or `wmodel:n=100,m=80,mu=2,rug=adjswap`.
#[derive(Debug, Clone, PartialEq)]
pub enum BitProblem {
    OneMax(OneMax),
    LeadingOnes(LeadingOnes),
    WModel(WModel),
}

impl BitProblem {
    pub fn onemax(n: usize) -> Self {
        BitProblem::OneMax(OneMax { n })
    }

    pub fn leadingones(n: usize) -> Self {
        BitProblem::LeadingOnes(LeadingOnes { n })
    }

    fn inner(&self) -> &dyn IncrementalObjective {
        match self {
            BitProblem::OneMax(p) => p,
            BitProblem::LeadingOnes(p) => p,
            BitProblem::WModel(p) => p,
        }
    }

    /// A genotype attaining the optimum: all ones for every built-in problem.
    pub fn optimum_genotype(&self) -> BitString {
        vec![true; self.dimension()]
    }
}

impl Objective<BitString> for BitProblem {
    fn direction(&self) -> Direction {
        Direction::Maximize
    }
    fn evaluate(&self, x: &BitString) -> Result<f64, ObjectiveError> {
        self.inner().evaluate(x)
    }
    fn dimension(&self) -> usize {
        self.inner().dimension()
    }
    fn optimum(&self) -> Option<f64> {
        self.inner().optimum()
    }
}

impl IncrementalObjective for BitProblem {
    fn flip_eval(&self, x: &BitString, fitness: f64, index: usize) -> Result<f64, ObjectiveError> {
        self.inner().flip_eval(x, fitness, index)
    }
}

impl fmt::Display for BitProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitProblem::OneMax(p) => write!(f, "onemax:n={}", p.n),
            BitProblem::LeadingOnes(p) => write!(f, "leadingones:n={}", p.n),
            BitProblem::WModel(p) => {
                write!(f, "wmodel:n={},m={},mu={}", p.n, p.m, p.mu)?;
                if p.ruggedness.is_some() {
                    f.write_str(",rug=adjswap")?;
                }
                Ok(())
            }
        }
    }
}

/// `kind:key=value,key=value` split into its parts.
fn split_spec(s: &str) -> Result<(&str, Vec<(&str, &str)>), Error> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut kv = Vec::new();
    for item in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("malformed problem option `{item}` in `{s}`"))
        })?;
        kv.push((k.trim(), v.trim()));
    }
    Ok((kind.trim(), kv))
}

fn get_usize(kv: &[(&str, &str)], key: &str, spec: &str) -> Result<Option<usize>, Error> {
    kv.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| {
            v.parse().map_err(|_| {
                Error::InvalidArgument(format!("`{key}` must be a natural number in `{spec}`"))
            })
        })
        .transpose()
}

fn reject_unknown(kv: &[(&str, &str)], allowed: &[&str], spec: &str) -> Result<(), Error> {
    match kv.iter().find(|(k, _)| !allowed.contains(k)) {
        Some((k, _)) => Err(Error::InvalidArgument(format!(
            "unknown option `{k}` in `{spec}`"
        ))),
        None => Ok(()),
    }
}

impl FromStr for BitProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (kind, kv) = split_spec(s)?;
        let n = get_usize(&kv, "n", s)?
            .ok_or_else(|| Error::InvalidArgument(format!("missing dimension `n` in `{s}`")))?;
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be positive in `{s}`"
            )));
        }
        match kind {
            "onemax" => {
                reject_unknown(&kv, &["n"], s)?;
                Ok(BitProblem::onemax(n))
            }
            "leadingones" => {
                reject_unknown(&kv, &["n"], s)?;
                Ok(BitProblem::leadingones(n))
            }
            "wmodel" => {
                reject_unknown(&kv, &["n", "m", "mu", "rug"], s)?;
                let m = get_usize(&kv, "m", s)?.unwrap_or(n);
                let mu = get_usize(&kv, "mu", s)?.unwrap_or(1);
                let rug = match kv.iter().find(|(k, _)| *k == "rug").map(|(_, v)| *v) {
                    None | Some("none") => None,
                    Some("adjswap") => m.checked_div(mu).map(adjacent_swap_permutation),
                    Some(other) => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown ruggedness `{other}`"
                        )))
                    }
                };
                Ok(BitProblem::WModel(WModel::new(n, m, mu, rug)?))
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown bitstring problem `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealFunction {
    Sphere,
    Rastrigin,
}

/// Box-bounded real-vector problem, minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct RealProblem {
    pub function: RealFunction,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl RealProblem {
    pub fn new(function: RealFunction, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, Error> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch(lower.len(), upper.len()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidArgument(
                "bounds need lower < upper per coordinate".into(),
            ));
        }
        Ok(Self {
            function,
            lower,
            upper,
        })
    }

    /// Symmetric `[-5.12, 5.12]^n` box.
    pub fn with_default_bounds(function: RealFunction, n: usize) -> Self {
        Self {
            function,
            lower: vec![-5.12; n],
            upper: vec![5.12; n],
        }
    }
}

impl Objective<RealVector> for RealProblem {
    fn direction(&self) -> Direction {
        Direction::Minimize
    }
    fn evaluate(&self, x: &RealVector) -> Result<f64, ObjectiveError> {
        if x.len() != self.lower.len() {
            return Err(ObjectiveError::Dimension {
                expected: self.lower.len(),
                got: x.len(),
            });
        }
        Ok(match self.function {
            RealFunction::Sphere => sphere(x),
            RealFunction::Rastrigin => rastrigin(x),
        })
    }
    fn dimension(&self) -> usize {
        self.lower.len()
    }
    fn optimum(&self) -> Option<f64> {
        Some(0.0)
    }
}

impl FromStr for RealProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (kind, kv) = split_spec(s)?;
        reject_unknown(&kv, &["n"], s)?;
        let n = get_usize(&kv, "n", s)?
            .ok_or_else(|| Error::InvalidArgument(format!("missing dimension `n` in `{s}`")))?;
        let f = match kind {
            "sphere" => RealFunction::Sphere,
            "rastrigin" => RealFunction::Rastrigin,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown real problem `{other}`"
                )))
            }
        };
        Ok(Self::with_default_bounds(f, n))
    }
}
