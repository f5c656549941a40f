//! Algorithm foundries: operators and numeric parameters gathered into
//! indexed slots, so that a whole algorithm is chosen by a vector of integers.

mod fastga;
mod irace;
mod slot;

pub use fastga::{FastGaFoundry, FoundryOutcome, SHIPPED_DESIGN_SPACE};
pub use irace::{print_irace, IraceBinding, IraceDomain, IRACE_HEADER};
pub use slot::{design_space_size, OperatorSlot, Slot};

use crate::error::{Error, Result};

/// One index per slot; index `i` picks alternative `i` of its slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedAlgorithm(pub Vec<usize>);

impl EncodedAlgorithm {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Check length and per-slot ranges against `sizes`, reporting the first
    /// offending slot by name.
    pub fn validate(&self, sizes: &[usize], names: &[&str]) -> Result<()> {
        if self.0.len() != sizes.len() {
            return Err(Error::EncodingLength {
                expected: sizes.len(),
                got: self.0.len(),
            });
        }
        for ((&i, &size), name) in self.0.iter().zip(sizes).zip(names) {
            if i >= size {
                return Err(Error::SlotIndex {
                    slot: name.to_string(),
                    index: i,
                    size,
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix rank, first slot most significant.
    pub fn to_rank(&self, sizes: &[usize]) -> Result<u128> {
        let names: Vec<String> = (0..sizes.len()).map(|i| format!("slot {i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        self.validate(sizes, &names)?;
        Ok(self
            .0
            .iter()
            .zip(sizes)
            .fold(0u128, |acc, (&i, &s)| acc * s as u128 + i as u128))
    }

    /// Inverse of [`to_rank`](Self::to_rank).
    pub fn from_rank(mut rank: u128, sizes: &[usize]) -> Result<Self> {
        let total: u128 = sizes.iter().map(|&s| s as u128).product();
        if rank >= total {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} outside a design space of {total}"
            )));
        }
        let mut out = vec![0; sizes.len()];
        for (slot, &s) in out.iter_mut().zip(sizes).rev() {
            *slot = (rank % s as u128) as usize;
            rank /= s as u128;
        }
        Ok(Self(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trip() {
        let sizes = [2, 3, 5];
        for r in 0..30u128 {
            let e = EncodedAlgorithm::from_rank(r, &sizes).unwrap();
            assert_eq!(e.to_rank(&sizes).unwrap(), r);
        }
        assert!(EncodedAlgorithm::from_rank(30, &sizes).is_err());
        assert_eq!(EncodedAlgorithm(vec![1, 2, 4]).to_rank(&sizes).unwrap(), 29);
    }

    #[test]
    fn validation_names_the_slot() {
        let e = EncodedAlgorithm(vec![0, 3]);
        match e.validate(&[2, 3], &["a", "b"]) {
            Err(Error::SlotIndex {
                slot,
                index: 3,
                size: 3,
            }) => assert_eq!(slot, "b"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            EncodedAlgorithm(vec![0]).validate(&[2, 3], &["a", "b"]),
            Err(Error::EncodingLength {
                expected: 2,
                got: 1
            })
        ));
    }
}
