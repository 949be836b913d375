use super::{SolveError, SolveOptions, SolveResult, Solver};
use crate::fairness::find_lower_witness;
use crate::oracle::{allocation_count, first_eq1, OracleError};
use crate::valuation::{Counted, Instance, Valuations};

/// First EQ1 allocation in enumeration order. Works for any valuations,
/// within the allocation budget.
pub struct BruteForce;

impl BruteForce {
    pub const NAME: &'static str = "brute";
}

impl Solver for BruteForce {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "exhaustive search over all n^m allocations; any valuations"
    }

    fn check(&self, _instance: &Instance) -> Result<(), SolveError> {
        Ok(())
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        let needed = allocation_count(instance.agents(), instance.items());
        if needed > opts.budget {
            return Err(SolveError::BudgetExceeded {
                needed,
                budget: opts.budget,
            });
        }
        let oracle = Counted::new(instance);
        let allocation = first_eq1(&oracle, opts.budget)
            .map_err(|OracleError::BudgetExceeded { needed, budget }| SolveError::BudgetExceeded { needed, budget })?
            .ok_or(SolveError::NoEq1)?;
        let witness = find_lower_witness(instance, &allocation).expect("valid allocation");
        Ok(SolveResult {
            solver: Self::NAME.to_string(),
            allocation,
            witness,
            trace: Vec::new(),
            oracle_calls: oracle.calls(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::ValuationSpec;

    #[test]
    fn finds_first_in_order() {
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[1, 1])).unwrap();
        let result = BruteForce.solve(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(result.allocation.to_lists(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn reports_nonexistence() {
        let inst = Instance::new(
            1,
            vec![ValuationSpec::additive_ints(&[1]), ValuationSpec::additive_ints(&[-1])],
        )
        .unwrap();
        // Values (1, 0) or (0, −1) are both within one removal, so this one exists.
        assert!(BruteForce.solve(&inst, &SolveOptions::default()).is_ok());
        let three = Instance::new(
            3,
            vec![ValuationSpec::additive_ints(&[1, 1, 1]), ValuationSpec::additive_ints(&[-1, -1, -1])],
        )
        .unwrap();
        assert_eq!(BruteForce.solve(&three, &SolveOptions::default()), Err(SolveError::NoEq1));
    }
}
