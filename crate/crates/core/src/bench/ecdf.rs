use crate::error::{Error, Result};

/// `buckets` equal-width intervals over `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRange {
    pub min: f64,
    pub max: f64,
    pub buckets: usize,
}

impl LinearRange {
    pub fn new(min: f64, max: f64, buckets: usize) -> Result<Self> {
        if !(min < max) || buckets == 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid range [{min}, {max}] with {buckets} buckets"
            )));
        }
        Ok(Self { min, max, buckets })
    }

    /// `floor((v - min) / (max - min) * buckets)`, clamped into the grid.
    pub fn bucket(&self, v: f64) -> usize {
        let x = ((v - self.min) / (self.max - self.min) * self.buckets as f64).floor();
        if x.is_nan() || x < 0.0 {
            0
        } else {
            (x as usize).min(self.buckets - 1)
        }
    }
}

/// Attainment counts: `counts[i][j]` runs reached target bucket `i` within
/// budget bucket `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcdfMatrix {
    pub counts: Vec<Vec<u64>>,
    pub runs_folded: u64,
}

impl EcdfMatrix {
    pub fn zeros(targets: usize, budgets: usize) -> Self {
        Self {
            counts: vec![vec![0; budgets]; targets],
            runs_folded: 0,
        }
    }

    /// Element-wise sum; both matrices must have the same shape.
    pub fn merge(&mut self, other: &EcdfMatrix) -> Result<()> {
        let shape = |m: &EcdfMatrix| (m.counts.len(), m.counts.first().map_or(0, Vec::len));
        if shape(self) != shape(other) {
            return Err(Error::LengthMismatch(self.counts.len(), other.counts.len()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.runs_folded += other.runs_folded;
        Ok(())
    }
}

pub fn ecdf_sum(m: &EcdfMatrix) -> u64 {
    m.counts.iter().flatten().sum()
}

/// Accumulates per-run attainment and folds it into an [`EcdfMatrix`].
/// Quality values are "larger is better".
#[derive(Debug, Clone)]
pub struct EcdfLogger {
    pub targets: LinearRange,
    pub budgets: LinearRange,
    /// Earliest budget bucket at which each target bucket was reached.
    first: Vec<Option<usize>>,
    last_evaluations: Option<u64>,
    matrix: EcdfMatrix,
}

impl EcdfLogger {
    pub fn new(targets: LinearRange, budgets: LinearRange) -> Self {
        Self {
            targets,
            budgets,
            first: vec![None; targets.buckets],
            last_evaluations: None,
            matrix: EcdfMatrix::zeros(targets.buckets, budgets.buckets),
        }
    }

    pub fn observe(&mut self, evaluations: u64, best_so_far: f64) -> Result<()> {
        if let Some(prev) = self.last_evaluations {
            if evaluations < prev {
                return Err(Error::DecreasingEvaluations {
                    previous: prev,
                    current: evaluations,
                });
            }
        }
        self.last_evaluations = Some(evaluations);
        let t = self.targets.bucket(best_so_far);
        let b = self.budgets.bucket(evaluations as f64);
        for slot in &mut self.first[..=t] {
            if slot.is_none_or(|j| b < j) {
                *slot = Some(b);
            }
        }
        Ok(())
    }

    /// Attainment of the current run as a 0/1 grid.
    pub fn attainment(&self) -> Vec<Vec<u8>> {
        self.first
            .iter()
            .map(|f| {
                (0..self.budgets.buckets)
                    .map(|j| u8::from(f.is_some_and(|b| b <= j)))
                    .collect()
            })
            .collect()
    }

    /// Add the current run to the counts and start a new run.
    pub fn fold_run(&mut self) {
        for (row, f) in self.matrix.counts.iter_mut().zip(&self.first) {
            if let Some(b) = *f {
                for c in &mut row[b..] {
                    *c += 1;
                }
            }
        }
        self.matrix.runs_folded += 1;
        self.first.iter_mut().for_each(|f| *f = None);
        self.last_evaluations = None;
    }

    pub fn matrix(&self) -> &EcdfMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> EcdfMatrix {
        self.matrix
    }
}
