//! Multi-objective machinery: Pareto dominance, non-dominated sorting,
//! crowding distance, scalarization, a non-dominated archive, exact 2-D
//! hypervolume and an NSGA-II generation.

pub mod archive;
pub mod nsga2;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::solution::Direction;

pub use archive::ParetoArchive;
pub use nsga2::{first_front, nsga2_survivors, objectives, MultiObjective, Nsga2, OneMaxZeroMax};

/// Objective values with a direction per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
    pub directions: Vec<Direction>,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>, directions: Vec<Direction>) -> Result<Self> {
        if values.len() != directions.len() {
            return Err(Error::LengthMismatch(values.len(), directions.len()));
        }
        Ok(Self { values, directions })
    }

    /// All dimensions minimized.
    pub fn minimize(values: Vec<f64>) -> Self {
        let directions = vec![Direction::Minimize; values.len()];
        Self { values, directions }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn compatible(&self, other: &ObjectiveVector) -> bool {
        self.directions == other.directions && self.values.len() == other.values.len()
    }

    /// Values mapped so that smaller is better in every dimension.
    pub fn normalized(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.directions)
            .map(|(v, d)| d.to_min(*v))
            .collect()
    }
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if !a.compatible(b) {
        return Err(Error::IncompatibleObjectives);
    }
    Ok(dominates_unchecked(a, b))
}

fn dominates_unchecked(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let mut strictly = false;
    for ((x, y), d) in a.values.iter().zip(&b.values).zip(&a.directions) {
        if d.better(*y, *x) {
            return false;
        }
        if d.better(*x, *y) {
            strictly = true;
        }
    }
    strictly
}

fn check_all(points: &[ObjectiveVector]) -> Result<()> {
    match points.first() {
        Some(p0) if points.iter().any(|p| !p.compatible(p0)) => Err(Error::IncompatibleObjectives),
        _ => Ok(()),
    }
}

/// Result of non-dominated sorting: fronts in rank order and the rank of each point.
#[derive(Debug, Clone, PartialEq)]
pub struct Fronts {
    pub fronts: Vec<Vec<usize>>,
    pub rank: Vec<usize>,
}

/// Fast non-dominated sort. Front 0 is the non-dominated set; front `k` is
/// non-dominated once fronts `< k` are removed. Indices within a front are
/// ascending.
pub fn nondominated_sort(points: &[ObjectiveVector]) -> Result<Fronts> {
    check_all(points)?;
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates_unchecked(&points[i], &points[j]) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates_unchecked(&points[j], &points[i]) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut rank = vec![usize::MAX; n];
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let r = fronts.len();
        let mut next = Vec::new();
        for &i in &current {
            rank[i] = r;
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(Fronts { fronts, rank })
}

/// Crowding distance of each member of one front.
///
/// Per objective the members are sorted (ties by position); the two ends get
/// infinity and each interior member adds `(next - prev) / (max - min)`.
/// Objectives with zero range add nothing.
pub fn crowding_distance(front: &[&ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut dist = vec![0.0; n];
    for m in 0..front[0].dim() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a].values[m].total_cmp(&front[b].values[m]));
        let lo = front[order[0]].values[m];
        let hi = front[order[n - 1]].values[m];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range == 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            let gap = front[order[k + 1]].values[m] - front[order[k - 1]].values[m];
            dist[order[k]] += gap / range;
        }
    }
    dist
}

/// Rank and crowding distance of every point, crowding computed per front.
pub fn rank_and_crowding(points: &[ObjectiveVector]) -> Result<(Vec<usize>, Vec<f64>)> {
    let fronts = nondominated_sort(points)?;
    let mut crowd = vec![0.0; points.len()];
    for front in &fronts.fronts {
        let refs: Vec<&ObjectiveVector> = front.iter().map(|&i| &points[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&refs)) {
            crowd[i] = d;
        }
    }
    Ok((fronts.rank, crowd))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalarization {
    WeightedSum,
    Chebyshev,
}

/// Scalarize `v` after mapping every dimension to minimization.
pub fn scalarize(
    kind: Scalarization,
    weights: &[f64],
    reference: &ObjectiveVector,
    v: &ObjectiveVector,
) -> Result<f64> {
    if weights.len() != v.dim() {
        return Err(Error::LengthMismatch(weights.len(), v.dim()));
    }
    if !v.compatible(reference) {
        return Err(Error::IncompatibleObjectives);
    }
    if weights.iter().any(|w| *w < 0.0) || weights.iter().all(|w| *w == 0.0) {
        return Err(Error::InvalidArgument(
            "weights must be non-negative and not all zero".into(),
        ));
    }
    let vn = v.normalized();
    Ok(match kind {
        Scalarization::WeightedSum => weights.iter().zip(&vn).map(|(w, x)| w * x).sum(),
        Scalarization::Chebyshev => {
            let rn = reference.normalized();
            weights
                .iter()
                .zip(vn.iter().zip(&rn))
                .map(|(w, (x, r))| w * (x - r).abs())
                .fold(0.0, f64::max)
        }
    })
}

/// Exact hypervolume of a bi-objective front with respect to `reference`:
/// the area of the union of the boxes spanned by each point and the
/// reference. Every point must dominate the reference.
pub fn hypervolume_2d(front: &[ObjectiveVector], reference: &ObjectiveVector) -> Result<f64> {
    if reference.dim() != 2 {
        return Err(Error::InvalidArgument(
            "hypervolume_2d needs two objectives".into(),
        ));
    }
    let r = reference.normalized();
    let mut pts = Vec::with_capacity(front.len());
    for p in front {
        if !dominates(p, reference)? {
            return Err(Error::InvalidArgument(format!(
                "point {:?} does not dominate the reference point",
                p.values
            )));
        }
        pts.push(p.normalized());
    }
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = r[1];
    for p in pts {
        if p[1] < ceiling {
            area += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    Ok(area)
}

/// CSV dump with one row per point: objective columns, rank, crowding.
pub fn front_csv(points: &[ObjectiveVector]) -> Result<String> {
    let (rank, crowd) = rank_and_crowding(points)?;
    let dim = points.first().map_or(0, ObjectiveVector::dim);
    let mut out = String::new();
    for m in 0..dim {
        let _ = write!(out, "f{m},");
    }
    out.push_str("rank,crowding\n");
    for (i, p) in points.iter().enumerate() {
        for v in &p.values {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{},{}", rank[i], crowd[i]);
    }
    Ok(out)
}
