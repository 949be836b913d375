use super::witness_finder::{WitnessFinder, WitnessFinderRegistry, WitnessProbe};
use super::{
    conclude, degenerate, require_class, require_nonneg_grand, require_normalized, Partial, SolveError,
    SolveOptions, SolveResult, Solver, StepKind,
};
use crate::items::ItemSet;
use crate::valuation::{Class, Counted, Instance, Property, Valuations};
use crate::value::Value;

/// Greedy poorest-agent loop with two early exits, for valuations with the
/// marginal-witness property (submodular, doubly monotone) and `v_i(M) ≥ 0`.
pub struct MarginalWitness;

impl MarginalWitness {
    pub const NAME: &'static str = "marginal-witness";
}

impl Solver for MarginalWitness {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "submodular or doubly monotone valuations, v_i(M) >= 0; polynomial"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        require_normalized(instance)?;
        require_nonneg_grand(instance)?;
        require_class(
            instance,
            Self::NAME,
            &[Class::Submodular, Class::DoublyMonotone],
            Property::MarginalWitness,
        )
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_marginal_witness(instance, opts)
    }
}

/// The marginal-witness loop seeded with one item per agent, which keeps
/// every bundle nonempty for nonnegative submodular valuations when `m ≥ n`.
pub struct NonnegSubmodular;

impl NonnegSubmodular {
    pub const NAME: &'static str = "nonneg-submodular";
}

impl Solver for NonnegSubmodular {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "nonnegative submodular valuations, m >= n; nonempty bundles, polynomial"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        if instance.items() < instance.agents() {
            return Err(SolveError::TooFewItems {
                solver: Self::NAME,
                items: instance.items(),
                agents: instance.agents(),
            });
        }
        require_normalized(instance)?;
        require_class(instance, Self::NAME, &[Class::Nonnegative], Property::Nonnegative)?;
        require_class(instance, Self::NAME, &[Class::Submodular], Property::Submodular)
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_nonneg_submodular(instance, opts)
    }
}

pub fn solve_marginal_witness(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if let Some(result) = degenerate(instance, MarginalWitness::NAME) {
        return Ok(result);
    }
    MarginalWitness.check(instance)?;
    let finder = WitnessFinderRegistry::build(&opts.witness_finder, instance)?;
    let state = Partial::new(instance.agents(), instance.items(), opts.trace);
    run_loop(instance, state, opts, finder.as_ref(), MarginalWitness::NAME, false)
}

pub fn solve_nonneg_submodular(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    NonnegSubmodular.check(instance)?;
    if let Some(result) = degenerate(instance, NonnegSubmodular::NAME) {
        return Ok(result);
    }
    let finder = WitnessFinderRegistry::build(&opts.witness_finder, instance)?;
    let m = instance.items();
    let mut state = Partial::new(instance.agents(), m, opts.trace);
    for agent in 0..instance.agents() {
        state.give(agent, ItemSet::singleton(m, agent), StepKind::Seed, Value::ZERO);
    }
    run_loop(instance, state, opts, finder.as_ref(), NonnegSubmodular::NAME, true)
}

/// Invariant 1: `level` is a lower EQ1 witness of the partial allocation.
/// Invariant 2: `v_j(A_j ∪ R) ≥ level` for every agent.
fn check_invariants(instance: &Instance, state: &Partial, level: Value) -> Result<(), SolveError> {
    for (j, bundle) in state.bundles.iter().enumerate() {
        let own = instance.value(j, *bundle);
        if own < level {
            return Err(SolveError::InvariantViolated(format!(
                "invariant 1: agent {j} holds {own} below level {level}"
            )));
        }
        let lowest_removal = bundle
            .iter()
            .map(|g| instance.value(j, bundle.without(g)))
            .fold(own, Value::min);
        if lowest_removal > level {
            return Err(SolveError::InvariantViolated(format!(
                "invariant 1: agent {j} cannot drop to level {level} with one removal"
            )));
        }
        let with_pool = instance.value(j, bundle.union(state.pool));
        if with_pool < level {
            return Err(SolveError::InvariantViolated(format!(
                "invariant 2: agent {j} with the pool is worth {with_pool} below level {level}"
            )));
        }
    }
    Ok(())
}

fn run_loop(
    instance: &Instance,
    mut state: Partial,
    opts: &SolveOptions,
    finder: &dyn WitnessFinder,
    name: &'static str,
    nonneg_guard: bool,
) -> Result<SolveResult, SolveError> {
    let oracle = Counted::new(instance);
    let n = instance.agents();
    let guard = |agent: usize, value: Value| {
        if nonneg_guard && value.is_negative() {
            Err(SolveError::NegativeValue { agent, value })
        } else {
            Ok(())
        }
    };
    let mut values = Vec::with_capacity(n);
    for (j, bundle) in state.bundles.iter().enumerate() {
        let value = oracle.value(j, *bundle);
        guard(j, value)?;
        values.push(value);
    }
    // μ of the previous iteration; the loop starts from μ⁰ = 0.
    let mut previous = Value::ZERO;

    while !state.pool.is_empty() {
        if opts.check_invariants {
            check_invariants(instance, &state, previous)?;
        }
        let poor = (0..n).min_by_key(|&j| values[j]).expect("at least one agent");
        let level = values[poor];
        if opts.check_invariants && level < previous {
            return Err(SolveError::InvariantViolated(format!(
                "poorest value fell from {previous} to {level}"
            )));
        }

        for i in 0..n {
            let with_pool = oracle.value(i, state.bundles[i].union(state.pool));
            guard(i, with_pool)?;
            if with_pool <= level {
                let pool = state.pool;
                state.give(i, pool, StepKind::PoolAtLevel, level);
                return conclude(instance, state, with_pool, name, oracle.calls());
            }
        }

        for i in 0..n {
            let target = state.bundles[i].union(state.pool);
            for h in state.pool.iter() {
                if oracle.value(i, target.without(h)) <= level {
                    let pool = state.pool;
                    state.give(i, pool, StepKind::PoolAfterRemoval, level);
                    return conclude(instance, state, level, name, oracle.calls());
                }
            }
        }

        let probe = WitnessProbe {
            oracle: &oracle,
            agent: poor,
            bundle: state.bundles[poor],
            pool: state.pool,
            level,
        };
        let (item, value) = finder
            .find(&probe)
            .ok_or(SolveError::NoWitnessItem { agent: poor, level })?;
        state.give(poor, ItemSet::singleton(instance.items(), item), StepKind::Give, level);
        values[poor] = value;
        previous = level;
    }

    // Every item went out one at a time; the current poorest value is a witness.
    let theta = values.iter().copied().min().expect("at least one agent");
    conclude(instance, state, theta, name, oracle.calls())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fairness::check_eq1;
    use crate::graph::Graph;
    use crate::valuation::ValuationSpec;

    #[test]
    fn hand_trace_two_one() {
        // μ = 0, agent 0 takes item 0; then agent 1's pool minus item 1 is worth 0 ≤ μ.
        let inst = Instance::identical(2, ValuationSpec::additive_ints(&[2, 1])).unwrap();
        let result = solve_marginal_witness(&inst, &SolveOptions::default().with_trace()).unwrap();
        assert_eq!(result.allocation.to_lists(), vec![vec![0], vec![1]]);
        let witness = result.witness.unwrap();
        assert_eq!(witness.theta, Value::ZERO);
        assert_eq!(result.trace.len(), 2);
        assert_eq!(result.trace[0].kind, StepKind::Give);
        assert_eq!(result.trace[1].kind, StepKind::PoolAfterRemoval);
        assert_eq!(result.trace[1].agent, 1);
    }

    #[test]
    fn one_item_each_when_m_equals_n() {
        let g = Arc::new(Graph::complete(3));
        let inst = Instance::identical(3, ValuationSpec::cut(g)).unwrap();
        let result = solve_nonneg_submodular(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(result.allocation.to_lists(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(result.witness.unwrap().theta, Value::from(2));
    }

    #[test]
    fn cut_on_path_spread_within_max_degree() {
        let g = Arc::new(Graph::path(5));
        let inst = Instance::identical(2, ValuationSpec::cut(g.clone())).unwrap();
        let result = solve_nonneg_submodular(&inst, &SolveOptions::default()).unwrap();
        assert!(check_eq1(&inst, &result.allocation).unwrap().is_eq1);
        let cuts: Vec<usize> = result.allocation.bundles().iter().map(|b| g.cut_edges(*b)).collect();
        assert!(cuts.iter().max().unwrap() - cuts.iter().min().unwrap() <= 2);
        assert!(result.allocation.bundles().iter().all(|b| !b.is_empty()));
    }

    #[test]
    fn rejects_non_witness_classes() {
        let hard = ValuationSpec::hardness(vec![1; 5], crate::valuation::HardnessRole::FirstTwo).unwrap();
        let inst = Instance::identical(3, hard).unwrap();
        assert!(matches!(
            solve_marginal_witness(&inst, &SolveOptions::default()),
            Err(SolveError::ClassPrecondition { .. })
        ));
    }

    #[test]
    fn too_few_items() {
        let inst = Instance::identical(3, ValuationSpec::cut(Arc::new(Graph::path(2)))).unwrap();
        assert!(matches!(
            solve_nonneg_submodular(&inst, &SolveOptions::default()),
            Err(SolveError::TooFewItems { .. })
        ));
    }
}
