use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problems::IncrementalObjective;

type Factory<T> = Box<dyn Fn(&Arc<dyn IncrementalObjective>) -> T + Send + Sync>;

/// Type-erased view of a slot, enough for counting and export.
pub trait OperatorSlot {
    fn name(&self) -> &str;
    fn index(&self) -> usize;
    fn size(&self) -> usize;
    fn labels(&self) -> Vec<String>;
    /// Alternatives are ordered values (rates, sizes) rather than unordered choices.
    fn ordinal(&self) -> bool;
}

/// Ordered alternatives for one position of an algorithm template.
///
/// Alternatives are appended during setup and never move afterwards.
/// Instances are built on first use and cached by index.
pub struct Slot<T> {
    name: String,
    position: usize,
    ordinal: bool,
    frozen: bool,
    factories: Vec<(String, Factory<T>)>,
    cache: HashMap<usize, T>,
    constructions: usize,
}

impl<T> Slot<T> {
    pub fn new(name: impl Into<String>, position: usize, ordinal: bool) -> Self {
        Self {
            name: name.into(),
            position,
            ordinal,
            frozen: false,
            factories: Vec::new(),
            cache: HashMap::new(),
            constructions: 0,
        }
    }

    /// Append an alternative built by `factory` from the bound problem.
    pub fn add<F>(&mut self, label: impl Into<String>, factory: F) -> Result<usize>
    where
        F: Fn(&Arc<dyn IncrementalObjective>) -> T + Send + Sync + 'static,
    {
        if self.frozen {
            return Err(Error::SlotFrozen(self.name.clone()));
        }
        self.factories.push((label.into(), Box::new(factory)));
        Ok(self.factories.len() - 1)
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.factories.get(i).map(|(l, _)| l.as_str())
    }

    /// Number of instances built so far.
    pub fn constructions(&self) -> usize {
        self.constructions
    }

    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    fn check(&self, i: usize) -> Result<()> {
        if self.factories.is_empty() {
            return Err(Error::EmptySlot(self.name.clone()));
        }
        if i >= self.factories.len() {
            return Err(Error::SlotIndex {
                slot: self.name.clone(),
                index: i,
                size: self.factories.len(),
            });
        }
        Ok(())
    }

    /// Build alternative `i` unless it is already cached.
    pub fn prepare(&mut self, i: usize, problem: &Arc<dyn IncrementalObjective>) -> Result<()> {
        self.check(i)?;
        if !self.cache.contains_key(&i) {
            let value = (self.factories[i].1)(problem);
            self.constructions += 1;
            self.cache.insert(i, value);
        }
        Ok(())
    }

    /// Take the instance for `i` out of the cache, building it if needed.
    /// Hand it back with [`put`](Self::put) to keep it cached.
    pub fn take(&mut self, i: usize, problem: &Arc<dyn IncrementalObjective>) -> Result<T> {
        self.prepare(i, problem)?;
        Ok(self.cache.remove(&i).expect("prepared above"))
    }

    pub fn put(&mut self, i: usize, value: T) {
        self.cache.insert(i, value);
    }
}

impl<T: Clone + Send + Sync + 'static> Slot<T> {
    /// Append a frozen constant.
    pub fn add_value(&mut self, label: impl Into<String>, value: T) -> Result<usize> {
        self.add(label, move |_| value.clone())
    }
}

impl<T> OperatorSlot for Slot<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn index(&self) -> usize {
        self.position
    }

    fn size(&self) -> usize {
        self.factories.len()
    }

    fn labels(&self) -> Vec<String> {
        self.factories.iter().map(|(l, _)| l.clone()).collect()
    }

    fn ordinal(&self) -> bool {
        self.ordinal
    }
}

/// Product of slot cardinalities; zero if any slot is empty.
pub fn design_space_size(slots: &[&dyn OperatorSlot]) -> u128 {
    slots.iter().map(|s| s.size() as u128).product()
}
