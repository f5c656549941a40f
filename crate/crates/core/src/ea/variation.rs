//! Variation operators.
//!
//! Genotype-level operators ([`MonOp`], [`QuadOp`]) report whether they
//! actually changed anything; the solution-level helpers turn a change into
//! an invalidated fitness. [`Mutation`] is the slot type used by the
//! algorithm templates: it sees the evaluation counter, so adapters such as
//! local search can evaluate as they go.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::eval::EvalCounter;
use crate::rng::RngStream;
use crate::solution::{BitString, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariationResult {
    pub changed: bool,
}

impl VariationResult {
    pub const UNCHANGED: Self = Self { changed: false };

    pub fn from_changed(changed: bool) -> Self {
        Self { changed }
    }
}

/// Alters one genotype. Returns `true` iff the genotype differs afterwards.
pub trait MonOp<G>: Send {
    fn apply(&mut self, g: &mut G, rng: &mut RngStream) -> Result<bool>;
    fn name(&self) -> String;
}

/// Alters two genotypes at once, in place. Returns `true` iff either changed.
pub trait QuadOp<G>: Send {
    fn apply(&mut self, a: &mut G, b: &mut G, rng: &mut RngStream) -> Result<bool>;
    fn name(&self) -> String;
}

/// Solution-level mutation slot used by the algorithm templates.
pub trait Mutation<G>: Send {
    fn mutate(
        &mut self,
        s: &mut Solution<G>,
        rng: &mut RngStream,
        evals: &mut EvalCounter<'_, G>,
    ) -> Result<VariationResult>;

    fn name(&self) -> String;
}

impl<G, M: MonOp<G>> Mutation<G> for M {
    fn mutate(
        &mut self,
        s: &mut Solution<G>,
        rng: &mut RngStream,
        _evals: &mut EvalCounter<'_, G>,
    ) -> Result<VariationResult> {
        apply_mutation(self, s, rng)
    }

    fn name(&self) -> String {
        MonOp::name(self)
    }
}

impl<G> MonOp<G> for Box<dyn MonOp<G>> {
    fn apply(&mut self, g: &mut G, rng: &mut RngStream) -> Result<bool> {
        (**self).apply(g, rng)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<G> QuadOp<G> for Box<dyn QuadOp<G>> {
    fn apply(&mut self, a: &mut G, b: &mut G, rng: &mut RngStream) -> Result<bool> {
        (**self).apply(a, b, rng)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

pub fn apply_mutation<G, M: MonOp<G> + ?Sized>(
    op: &mut M,
    s: &mut Solution<G>,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    let changed = op.apply(&mut s.genotype, rng)?;
    if changed {
        s.invalidate();
    }
    Ok(VariationResult { changed })
}

pub fn apply_crossover<G, F, Q: QuadOp<G> + ?Sized>(
    op: &mut Q,
    a: &mut Solution<G, F>,
    b: &mut Solution<G, F>,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    let changed = op.apply(&mut a.genotype, &mut b.genotype, rng)?;
    if changed {
        a.invalidate();
        b.invalidate();
    }
    Ok(VariationResult { changed })
}

/// Same as [`apply_mutation`] for any fitness type.
pub fn apply_mutation_any<G, F, M: MonOp<G> + ?Sized>(
    op: &mut M,
    s: &mut Solution<G, F>,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    let changed = op.apply(&mut s.genotype, rng)?;
    if changed {
        s.invalidate();
    }
    Ok(VariationResult { changed })
}

/// Per-bit flip probability: a constant, or `c / n` for a genotype of length `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlipRate {
    Fixed(f64),
    PerLength(f64),
}

/// Flip each bit independently.
#[derive(Debug, Clone, PartialEq)]
pub struct BitflipRate {
    rate: FlipRate,
}

impl BitflipRate {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "flip probability {p} outside [0, 1]"
            )));
        }
        Ok(Self {
            rate: FlipRate::Fixed(p),
        })
    }

    /// Standard bit mutation with `p = c / n`.
    pub fn per_length(c: f64) -> Result<Self> {
        if c < 0.0 || !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "rate multiplier {c} must be non-negative"
            )));
        }
        Ok(Self {
            rate: FlipRate::PerLength(c),
        })
    }

    pub fn probability(&self, n: usize) -> f64 {
        match self.rate {
            FlipRate::Fixed(p) => p,
            FlipRate::PerLength(c) if n > 0 => (c / n as f64).min(1.0),
            FlipRate::PerLength(_) => 0.0,
        }
    }
}

impl MonOp<BitString> for BitflipRate {
    fn apply(&mut self, g: &mut BitString, rng: &mut RngStream) -> Result<bool> {
        let p = self.probability(g.len());
        let mut changed = false;
        for bit in g.iter_mut() {
            if rng.coin(p) {
                *bit = !*bit;
                changed = true;
            }
        }
        Ok(changed)
    }

    fn name(&self) -> String {
        match self.rate {
            FlipRate::Fixed(p) => format!("bitflip(p={p})"),
            FlipRate::PerLength(c) => format!("bitflip(p={c}/n)"),
        }
    }
}

/// Flip exactly `k` distinct bits.
#[derive(Debug, Clone, PartialEq)]
pub struct BitflipK {
    pub k: usize,
}

impl MonOp<BitString> for BitflipK {
    fn apply(&mut self, g: &mut BitString, rng: &mut RngStream) -> Result<bool> {
        if self.k > g.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot flip {} bits of a {}-bit string",
                self.k,
                g.len()
            )));
        }
        for i in index::sample(rng, g.len(), self.k) {
            g[i] = !g[i];
        }
        Ok(self.k > 0)
    }

    fn name(&self) -> String {
        format!("kflip(k={})", self.k)
    }
}

/// Exchange each position with probability `bias`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformCrossover {
    bias: f64,
}

impl UniformCrossover {
    pub fn new(bias: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bias) {
            return Err(Error::InvalidArgument(format!(
                "crossover bias {bias} outside [0, 1]"
            )));
        }
        Ok(Self { bias })
    }
}

impl QuadOp<BitString> for UniformCrossover {
    fn apply(&mut self, a: &mut BitString, b: &mut BitString, rng: &mut RngStream) -> Result<bool> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        let mut changed = false;
        for (x, y) in a.iter_mut().zip(b.iter_mut()) {
            if rng.coin(self.bias) && x != y {
                std::mem::swap(x, y);
                changed = true;
            }
        }
        Ok(changed)
    }

    fn name(&self) -> String {
        format!("uniform(bias={})", self.bias)
    }
}

/// `k` distinct cut points; every other segment, starting with the second,
/// is exchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct KPointCrossover {
    pub k: usize,
}

impl KPointCrossover {
    /// Exchange segments delimited by the given sorted cut points.
    /// A cut point `c` splits between positions `c - 1` and `c`.
    pub fn exchange(a: &mut [bool], b: &mut [bool], cuts: &[usize]) -> bool {
        let mut changed = false;
        let mut bounds = cuts.to_vec();
        bounds.push(a.len());
        for (seg, w) in bounds.windows(2).enumerate() {
            if seg % 2 == 0 {
                for i in w[0]..w[1] {
                    if a[i] != b[i] {
                        std::mem::swap(&mut a[i], &mut b[i]);
                        changed = true;
                    }
                }
            }
        }
        changed
    }
}

impl QuadOp<BitString> for KPointCrossover {
    fn apply(&mut self, a: &mut BitString, b: &mut BitString, rng: &mut RngStream) -> Result<bool> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        let n = a.len();
        if self.k == 0 || self.k >= n {
            return Err(Error::InvalidArgument(format!(
                "{}-point crossover needs 1 <= k < n = {n}",
                self.k
            )));
        }
        let mut cuts: Vec<usize> = index::sample(rng, n - 1, self.k)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        Ok(Self::exchange(a, b, &cuts))
    }

    fn name(&self) -> String {
        format!("{}-point", self.k)
    }
}

pub fn mutate_bitflip_rate(
    s: &mut Solution<BitString>,
    p: f64,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    apply_mutation(&mut BitflipRate::new(p)?, s, rng)
}

pub fn mutate_bitflip_k(
    s: &mut Solution<BitString>,
    k: usize,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    apply_mutation(&mut BitflipK { k }, s, rng)
}

pub fn xover_uniform(
    a: &mut Solution<BitString>,
    b: &mut Solution<BitString>,
    bias: f64,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    apply_crossover(&mut UniformCrossover::new(bias)?, a, b, rng)
}

pub fn xover_kpoint(
    a: &mut Solution<BitString>,
    b: &mut Solution<BitString>,
    k: usize,
    rng: &mut RngStream,
) -> Result<VariationResult> {
    apply_crossover(&mut KPointCrossover { k }, a, b, rng)
}
