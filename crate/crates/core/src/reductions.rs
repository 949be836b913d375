//! Partition → Restricted-Partition → three-agent EQ1 instance.
//!
//! Restricted-Partition asks for an equal-sum split of `b_1..b_m` where
//! `m ≥ 5` and every `b_i < T/4`. The three-agent instance built from such
//! an input has an EQ1 allocation exactly when the split exists.

use thiserror::Error;

use crate::valuation::{HardnessRole, Instance, ValuationError, ValuationSpec};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("partition input is empty")]
    Empty,
    #[error("value at position {index} is zero; values must be positive")]
    ZeroValue { index: usize },
    #[error("restricted inputs need at least 5 values, got {found}")]
    TooFewValues { found: usize },
    #[error("value {value} at position {index} is not below a quarter of the total {total}")]
    TooLarge { index: usize, value: u64, total: u64 },
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// A multiset of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInput {
    values: Vec<u64>,
}

impl PartitionInput {
    pub fn new(values: Vec<u64>) -> Result<Self, ReductionError> {
        if values.is_empty() {
            return Err(ReductionError::Empty);
        }
        if let Some(index) = values.iter().position(|&v| v == 0) {
            return Err(ReductionError::ZeroValue { index });
        }
        Ok(PartitionInput { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    /// Checks `m ≥ 5` and `4·b_i < T` for every value.
    pub fn check_restricted(&self) -> Result<(), ReductionError> {
        if self.values.len() < 5 {
            return Err(ReductionError::TooFewValues {
                found: self.values.len(),
            });
        }
        let total = self.total();
        match self.values.iter().position(|&v| 4 * v >= total) {
            Some(index) => Err(ReductionError::TooLarge {
                index,
                value: self.values[index],
                total,
            }),
            None => Ok(()),
        }
    }
}

/// Appends four copies of the total. The result satisfies the restricted
/// promise and has an equal-sum split iff the input does.
pub fn partition_to_restricted(input: &PartitionInput) -> PartitionInput {
    let total = input.total();
    let mut values = input.values.clone();
    values.extend([total; 4]);
    PartitionInput { values }
}

/// Agents 1 and 2 value a nonempty `S` at `2·Σ_{S} b − T` (and ∅ at 0);
/// agent 3 values `S` at `|S|`.
pub fn restricted_to_instance(input: &PartitionInput) -> Result<Instance, ReductionError> {
    input.check_restricted()?;
    let weights = input.values.clone();
    let first = ValuationSpec::hardness(weights.clone(), HardnessRole::FirstTwo)?;
    let third = ValuationSpec::hardness(weights.clone(), HardnessRole::Third)?;
    Ok(Instance::new(weights.len(), vec![first.clone(), first, third])?)
}

/// The five-unit instance with no EQ1 allocation, plus `extra` further
/// copies of the counting agent.
pub fn nonexistence_instance(extra: usize) -> Instance {
    let input = PartitionInput::new(vec![1; 5]).expect("positive values");
    let base = restricted_to_instance(&input).expect("five units satisfy the promise");
    let mut specs = base.specs().to_vec();
    let third = specs[2].clone();
    specs.extend(std::iter::repeat_n(third, extra));
    Instance::new(5, specs).expect("same universe")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::items::ItemSet;
    use crate::valuation::Valuations;
    use crate::value::Value;

    #[test]
    fn restricted_from_small_input() {
        let a = PartitionInput::new(vec![1, 1, 2]).unwrap();
        let b = partition_to_restricted(&a);
        assert_eq!(b.values(), &[1, 1, 2, 4, 4, 4, 4]);
        assert_eq!(b.total(), 20);
        assert!(b.check_restricted().is_ok());
    }

    #[test]
    fn input_validation() {
        assert_eq!(PartitionInput::new(vec![]), Err(ReductionError::Empty));
        assert_eq!(PartitionInput::new(vec![3, 0]), Err(ReductionError::ZeroValue { index: 1 }));
        let short = PartitionInput::new(vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(restricted_to_instance(&short), Err(ReductionError::TooFewValues { found: 4 })));
        let big = PartitionInput::new(vec![1, 1, 1, 1, 4]).unwrap();
        assert!(matches!(restricted_to_instance(&big), Err(ReductionError::TooLarge { index: 4, .. })));
    }

    #[test]
    fn five_units() {
        let inst = nonexistence_instance(0);
        assert_eq!(inst.agents(), 3);
        for bits in 1..32u64 {
            let s = ItemSet::from_bits(5, bits).unwrap();
            let k = s.len() as i64;
            assert_eq!(inst.value(0, s), Value::from(2 * k - 5));
            assert_eq!(inst.value(1, s), Value::from(2 * k - 5));
            assert_eq!(inst.value(2, s), Value::from(k));
        }
        assert_eq!(nonexistence_instance(2).agents(), 5);
    }
}
