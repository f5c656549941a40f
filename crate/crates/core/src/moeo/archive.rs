use crate::error::{Error, Result};
use crate::solution::Solution;

use super::{crowding_distance, dominates_unchecked, ObjectiveVector};

/// Mutually non-dominated solutions, optionally bounded in size.
#[derive(Debug, Clone)]
pub struct ParetoArchive<G> {
    members: Vec<Solution<G, ObjectiveVector>>,
    capacity: Option<usize>,
}

impl<G> Default for ParetoArchive<G> {
    fn default() -> Self {
        Self::new()
    }
}

impl<G> ParetoArchive<G> {
    pub fn new() -> Self {
        Self {
            members: Vec::new(),
            capacity: None,
        }
    }

    pub fn with_capacity(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidArgument(
                "archive capacity must be positive".into(),
            ));
        }
        Ok(Self {
            members: Vec::new(),
            capacity: Some(capacity),
        })
    }

    pub fn members(&self) -> &[Solution<G, ObjectiveVector>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members
            .iter()
            .filter_map(|s| s.fitness().cloned())
            .collect()
    }

    /// Insert `s`. Returns false when an existing member dominates it or has
    /// the same objective values; otherwise the members it dominates are
    /// dropped and, past capacity, the least crowded member is evicted.
    pub fn insert(&mut self, s: Solution<G, ObjectiveVector>) -> Result<bool> {
        let v = s.fitness().ok_or(Error::Unevaluated(self.members.len()))?;
        if let Some(first) = self.members.first().and_then(Solution::fitness) {
            if !first.compatible(v) {
                return Err(Error::IncompatibleObjectives);
            }
        }
        for m in &self.members {
            let mv = m.fitness().expect("archive members are valid");
            if mv.values == v.values || dominates_unchecked(mv, v) {
                return Ok(false);
            }
        }
        self.members
            .retain(|m| !dominates_unchecked(v, m.fitness().expect("archive members are valid")));
        self.members.push(s);
        if let Some(cap) = self.capacity {
            while self.members.len() > cap {
                let refs: Vec<&ObjectiveVector> =
                    self.members.iter().filter_map(Solution::fitness).collect();
                let d = crowding_distance(&refs);
                let worst = (0..d.len())
                    .min_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)))
                    .expect("archive is not empty");
                self.members.remove(worst);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(v: &[f64]) -> Solution<(), ObjectiveVector> {
        Solution::evaluated((), ObjectiveVector::minimize(v.to_vec()))
    }

    #[test]
    fn insertion_rules() {
        let mut a = ParetoArchive::new();
        assert!(a.insert(sol(&[2.0, 2.0])).unwrap());
        assert!(!a.insert(sol(&[3.0, 3.0])).unwrap());
        assert!(!a.insert(sol(&[2.0, 2.0])).unwrap());
        assert_eq!(a.len(), 1);
        assert!(a.insert(sol(&[1.0, 3.0])).unwrap());
        assert!(a.insert(sol(&[3.0, 1.0])).unwrap());
        assert!(a.insert(sol(&[1.0, 1.0])).unwrap());
        assert_eq!(
            a.objectives(),
            vec![ObjectiveVector::minimize(vec![1.0, 1.0])]
        );
        assert!(a.insert(Solution::new(())).is_err());
        assert!(a.insert(sol(&[0.0])).is_err());
    }

    #[test]
    fn capacity_evicts_least_crowded() {
        let mut a = ParetoArchive::with_capacity(3).unwrap();
        for p in [[0.0, 10.0], [10.0, 0.0], [5.0, 5.0], [6.0, 4.0]] {
            assert!(a.insert(sol(&p)).unwrap());
        }
        assert_eq!(a.len(), 3);
        let obj = a.objectives();
        assert!(obj.contains(&ObjectiveVector::minimize(vec![0.0, 10.0])));
        assert!(obj.contains(&ObjectiveVector::minimize(vec![10.0, 0.0])));
    }
}
