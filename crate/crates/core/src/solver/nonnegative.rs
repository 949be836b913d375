use super::{
    conclude, degenerate, require_class, require_nonneg_grand, require_normalized, Partial, SolveError, SolveOptions,
    SolveResult, Solver, StepKind,
};
use crate::fairness::rich_among;
use crate::items::ItemSet;
use crate::valuation::{Class, Counted, Instance, Property, Valuations};
use crate::value::Value;

/// Repeated global minimisation over (agent, valid bundle) for nonnegative
/// valuations. Exponential in the pool size.
pub struct Nonnegative;

impl Nonnegative {
    pub const NAME: &'static str = "nonnegative";
}

impl Solver for Nonnegative {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "nonnegative valuations; nonempty bundles when m >= n; exponential"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        require_normalized(instance)?;
        require_class(instance, Self::NAME, &[Class::Nonnegative], Property::Nonnegative)
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_nonnegative(instance, opts)
    }
}

/// Gives a largest negative set to agent 0, then finishes like [`Nonnegative`].
pub struct IdenticalSubadditive;

impl IdenticalSubadditive {
    pub const NAME: &'static str = "identical-subadditive";
}

impl Solver for IdenticalSubadditive {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "identical subadditive valuations, v(M) >= 0; result is also EF1; exponential"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        if !instance.is_identical() {
            return Err(SolveError::NotIdentical { solver: Self::NAME });
        }
        require_normalized(instance)?;
        require_nonneg_grand(instance)?;
        require_class(instance, Self::NAME, &[Class::Subadditive], Property::Subadditive)
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_identical_subadditive(instance, opts)
    }
}

pub fn solve_nonnegative(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if let Some(result) = degenerate(instance, Nonnegative::NAME) {
        return Ok(result);
    }
    Nonnegative.check(instance)?;
    let oracle = Counted::new(instance);
    let mut state = Partial::new(instance.agents(), instance.items(), opts.trace);
    // With fewer items than agents the loop never runs and agent 0 stays empty.
    let last = valid_bundle_loop(instance, &oracle, &mut state, 0, opts, true)?;
    let theta = oracle.value(last, state.bundles[last]);
    tail(&mut state, last);
    conclude(instance, state, theta, Nonnegative::NAME, oracle.calls())
}

pub fn solve_identical_subadditive(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if let Some(result) = degenerate(instance, IdenticalSubadditive::NAME) {
        return Ok(result);
    }
    IdenticalSubadditive.check(instance)?;
    let n = instance.agents();
    let m = instance.items();
    let needed = 1u64.checked_shl(m as u32).unwrap_or(u64::MAX);
    if needed > opts.budget {
        return Err(SolveError::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let oracle = Counted::new(instance);
    let full = ItemSet::full(m);

    // Largest negative set, smallest bitmask among equals; empty when none exists.
    let mut largest = ItemSet::empty(m);
    for set in full.subsets() {
        let better = set.len() > largest.len() || (set.len() == largest.len() && set.bits() < largest.bits());
        if better && oracle.value(0, set).is_negative() {
            largest = set;
        }
    }

    let mut state = Partial::new(n, m, opts.trace);
    state.give(0, largest, StepKind::Seed, oracle.value(0, largest));
    if state.pool.len() <= n {
        // v(M) ≥ 0 keeps the pool nonempty after a negative gift.
        let mut items = state.pool.iter().collect::<Vec<_>>().into_iter();
        if let Some(first) = items.next() {
            state.give(0, ItemSet::singleton(m, first), StepKind::Tail, Value::ZERO);
        }
        for (agent, item) in (1..n).zip(items) {
            state.give(agent, ItemSet::singleton(m, item), StepKind::Tail, Value::ZERO);
        }
        return conclude(instance, state, Value::ZERO, IdenticalSubadditive::NAME, oracle.calls());
    }

    let last = valid_bundle_loop(instance, &oracle, &mut state, 0, opts, false)?;
    let theta = oracle.value(last, state.bundles[last]);
    tail(&mut state, last);
    conclude(instance, state, theta, IdenticalSubadditive::NAME, oracle.calls())
}

/// Nonempty subsets of the pool whose removal leaves at least `n − 1` items,
/// by increasing size then bitmask.
fn valid_bundles(pool: ItemSet, n: usize) -> Vec<ItemSet> {
    let max_size = pool.len() + 1 - n;
    pool.subsets_by_size()
        .into_iter()
        .filter(|t| !t.is_empty() && t.len() <= max_size)
        .collect()
}

/// Runs the valid-bundle loop while `|R| ≥ n`; returns the last receiver.
fn valid_bundle_loop(
    instance: &Instance,
    oracle: &Counted<'_, Instance>,
    state: &mut Partial,
    mut last: usize,
    opts: &SolveOptions,
    nonneg_guard: bool,
) -> Result<usize, SolveError> {
    let n = instance.agents();
    while state.pool.len() >= n {
        let needed = 1u64
            .checked_shl(state.pool.len() as u32)
            .and_then(|s| s.checked_mul(n as u64))
            .unwrap_or(u64::MAX);
        if needed > opts.budget {
            return Err(SolveError::BudgetExceeded {
                needed,
                budget: opts.budget,
            });
        }
        let candidates = valid_bundles(state.pool, n);
        let mut best: Option<(Value, usize, ItemSet)> = None;
        for j in 0..n {
            for &t in &candidates {
                let value = oracle.value(j, state.bundles[j].union(t));
                if nonneg_guard && value.is_negative() {
                    return Err(SolveError::NegativeValue { agent: j, value });
                }
                if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
                    best = Some((value, j, t));
                }
            }
        }
        let (level, receiver, bundle) = best.expect("a valid bundle exists while |R| >= n");
        state.give(receiver, bundle, StepKind::Give, level);
        last = receiver;

        if opts.check_invariants {
            if !rich_among(instance, &state.bundles).contains(&receiver) {
                return Err(SolveError::InvariantViolated(format!(
                    "agent {receiver} received {bundle} but is not rich"
                )));
            }
            for i in (0..n).filter(|&i| i != receiver) {
                if let Some(t) = candidates
                    .iter()
                    .find(|t| instance.value(i, state.bundles[i].union(**t)) < level)
                {
                    return Err(SolveError::InvariantViolated(format!(
                        "agent {i} with valid bundle {t} falls below the receiver's {level}"
                    )));
                }
            }
        }
    }
    Ok(last)
}

/// One pool item to each agent except `last`, both in ascending order.
fn tail(state: &mut Partial, last: usize) {
    let m = state.pool.universe();
    let agents: Vec<usize> = (0..state.bundles.len()).filter(|&j| j != last).collect();
    let items = state.pool.to_vec();
    for (agent, item) in agents.into_iter().zip(items) {
        state.give(agent, ItemSet::singleton(m, item), StepKind::Tail, Value::ZERO);
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fairness::{check_ef1, check_eq1};
    use crate::graph::Graph;
    use crate::valuation::{ClassSet, ValuationSpec};

    #[test]
    fn fewer_items_than_agents() {
        let spec = ValuationSpec::additive_ints(&[3, 5]);
        let inst = Instance::identical(3, spec).unwrap();
        let result = solve_nonnegative(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(result.allocation.to_lists(), vec![vec![], vec![0], vec![1]]);
        assert_eq!(result.witness.unwrap().theta, Value::ZERO);
    }

    #[test]
    fn density_on_six_vertices() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let g = Arc::new(g);
        let inst = Instance::identical(2, ValuationSpec::density(g.clone())).unwrap();
        let result = solve_nonnegative(&inst, &SolveOptions::default()).unwrap();
        assert!(check_eq1(&inst, &result.allocation).unwrap().is_eq1);
        let d: Vec<Value> = result.allocation.bundles().iter().map(|b| inst.value(0, *b)).collect();
        assert!((d[0] - d[1]).abs() <= Value::ONE);
        assert!(result.allocation.bundles().iter().all(|b| !b.is_empty()));
    }

    #[test]
    fn rejects_negative_values() {
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[1, -1, 3])).unwrap();
        assert!(matches!(
            solve_nonnegative(&inst, &SolveOptions::default()),
            Err(SolveError::ClassPrecondition { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[1; 10])).unwrap();
        assert!(matches!(
            solve_nonnegative(&inst, &SolveOptions::default().with_budget(100)),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn identical_with_one_chore() {
        // {0,1} is worth −1, so L has two items even though only item 0 is a chore.
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[-3, 2, 2, 2])).unwrap();
        let result = solve_identical_subadditive(&inst, &SolveOptions::default().with_trace()).unwrap();
        assert_eq!(result.trace[0].bundle, ItemSet::from_items(4, [0, 1]).unwrap());
        assert_eq!(result.trace[0].agent, 0);
        assert_eq!(result.allocation.to_lists(), vec![vec![0, 1, 2], vec![3]]);
        assert!(check_eq1(&inst, &result.allocation).unwrap().is_eq1);
        assert!(check_ef1(&inst, &result.allocation).unwrap());
    }

    #[test]
    fn identical_without_negative_sets_matches_nonnegative_shape() {
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[1, 2, 3, 4])).unwrap();
        let a = solve_identical_subadditive(&inst, &SolveOptions::default()).unwrap();
        let b = solve_nonnegative(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(a.allocation, b.allocation);
    }

    #[test]
    fn small_pool_after_negative_gift() {
        // Subadditive table with v({0,1}) = −1 as the only negative set; |R| = 1 ≤ n.
        let table = [0, 0, 0, -1, 2, 1, 1, 0];
        let spec = ValuationSpec::tabulate(3, ClassSet::EMPTY, |s| Value::from(table[s.bits() as usize]));
        let inst = Instance::identical(2, spec).unwrap();
        let result = solve_identical_subadditive(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(result.allocation.to_lists(), vec![vec![0, 1, 2], vec![]]);
        assert_eq!(result.witness.unwrap().theta, Value::ZERO);
    }

    #[test]
    fn not_identical() {
        let inst = Instance::new(
            1,
            vec![ValuationSpec::additive_ints(&[1]), ValuationSpec::additive_ints(&[2])],
        )
        .unwrap();
        assert!(matches!(
            solve_identical_subadditive(&inst, &SolveOptions::default()),
            Err(SolveError::NotIdentical { .. })
        ));
    }
}
