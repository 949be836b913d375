//! Exhaustive ground truth over all `n^m` allocations.

use std::env;

use thiserror::Error;

use crate::fairness::check_eq1;
use crate::items::{Allocation, ItemSet};
use crate::valuation::Valuations;

/// Allocation checks allowed by default.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "EQ1_BUDGET";

/// The budget from [`BUDGET_ENV`] if it is set to a positive integer, else the default.
pub fn budget_from_env() -> u64 {
    env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration needs {needed} allocations, over the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistenceReport {
    pub exists: bool,
    /// First EQ1 allocation in enumeration order.
    pub witness_allocation: Option<Allocation>,
    pub total_checked: u64,
    pub eq1_count: u64,
}

/// `n^m`, saturating at `u64::MAX`.
pub fn allocation_count(n: usize, m: usize) -> u64 {
    (n as u64).checked_pow(m as u32).unwrap_or(u64::MAX)
}

fn guard(n: usize, m: usize, budget: u64) -> Result<u64, OracleError> {
    let needed = allocation_count(n, m);
    if needed > budget {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Every allocation of `m` items to `n` agents. Owners are read as base-`n`
/// digits with item 0 least significant, counting up from all-zero.
pub struct Allocations {
    n: usize,
    m: usize,
    owners: Vec<usize>,
    done: bool,
}

impl Allocations {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n > 0, "at least one agent");
        Allocations {
            n,
            m,
            owners: vec![0; m],
            done: false,
        }
    }
}

impl Iterator for Allocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let mut bundles = vec![ItemSet::empty(self.m); self.n];
        for (item, &owner) in self.owners.iter().enumerate() {
            bundles[owner].insert(item);
        }
        let alloc = Allocation::new(self.m, bundles).expect("owner vector defines a partition");
        self.done = true;
        for digit in self.owners.iter_mut() {
            *digit += 1;
            if *digit < self.n {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(alloc)
    }
}

/// Checks every allocation for EQ1.
pub fn exists_eq1_bruteforce<V: Valuations + ?Sized>(
    valuations: &V,
    budget: u64,
) -> Result<ExistenceReport, OracleError> {
    let (n, m) = (valuations.agents(), valuations.items());
    guard(n, m, budget)?;
    let mut report = ExistenceReport {
        exists: false,
        witness_allocation: None,
        total_checked: 0,
        eq1_count: 0,
    };
    for alloc in Allocations::new(n, m) {
        report.total_checked += 1;
        if check_eq1(valuations, &alloc).expect("enumerated allocations are valid").is_eq1 {
            report.eq1_count += 1;
            if report.witness_allocation.is_none() {
                report.witness_allocation = Some(alloc);
            }
        }
    }
    report.exists = report.eq1_count > 0;
    Ok(report)
}

pub fn count_eq1<V: Valuations + ?Sized>(valuations: &V, budget: u64) -> Result<u64, OracleError> {
    exists_eq1_bruteforce(valuations, budget).map(|r| r.eq1_count)
}

/// First EQ1 allocation in enumeration order, stopping as soon as one is found.
pub fn first_eq1<V: Valuations + ?Sized>(valuations: &V, budget: u64) -> Result<Option<Allocation>, OracleError> {
    let (n, m) = (valuations.agents(), valuations.items());
    guard(n, m, budget)?;
    Ok(Allocations::new(n, m).find(|a| check_eq1(valuations, a).expect("valid allocation").is_eq1))
}

/// An equal-sum split of `values` into two index sets, by exhaustive search.
/// The first side is the lowest-bitmask subset that works.
pub fn equal_sum_bipartition(values: &[u64]) -> Option<(Vec<usize>, Vec<usize>)> {
    let total: u64 = values.iter().sum();
    if total % 2 == 1 {
        return None;
    }
    let m = values.len();
    assert!(m < 64, "at most 63 values");
    (0..1u64 << m)
        .find(|&mask| {
            (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| values[i])
                .sum::<u64>()
                * 2
                == total
        })
        .map(|mask| {
            let (left, right): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| mask >> i & 1 == 1);
            (left, right)
        })
}
