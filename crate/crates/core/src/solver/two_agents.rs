use super::{require_nonneg_grand, require_normalized, SolveError, SolveOptions, SolveResult, Solver, StepKind, TraceStep};
use crate::fairness::check_eq1;
use crate::items::{Allocation, ItemSet};
use crate::valuation::{Counted, Instance, Valuations};

/// Knife sweep for two agents whose grand bundles are both nonnegative.
pub struct TwoAgents;

impl TwoAgents {
    pub const NAME: &'static str = "two-agents";
}

impl Solver for TwoAgents {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn description(&self) -> &'static str {
        "two agents, general valuations, v_i(M) >= 0; O(m) oracle calls"
    }

    fn check(&self, instance: &Instance) -> Result<(), SolveError> {
        if instance.agents() != 2 {
            return Err(SolveError::AgentCount {
                solver: Self::NAME,
                expected: 2,
                found: instance.agents(),
            });
        }
        require_normalized(instance)?;
        require_nonneg_grand(instance)
    }

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve_two_agents(instance, opts)
    }
}

/// Sweeps items in input order, moving them one at a time from agent 2's
/// pile to agent 1's, and stops at the first prefix `S_i` with
/// `v_1(S_i) > v_2(M \ S_i)`. Returns `(S_i, M \ S_i)` if that is EQ1,
/// otherwise the previous cut. If `v_1(M) = 0` everything goes to agent 1.
pub fn solve_two_agents(instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    TwoAgents.check(instance)?;
    let oracle = Counted::new(instance);
    let m = instance.items();
    let full = ItemSet::full(m);
    let mut trace = Vec::new();

    let finish = |bundles: Vec<ItemSet>, trace: Vec<TraceStep>, calls: u64| SolveResult {
        solver: TwoAgents::NAME.to_string(),
        allocation: Allocation::new(m, bundles).expect("two-way split is a partition"),
        witness: None,
        trace,
        oracle_calls: calls,
    };

    let first_total = oracle.value(0, full);
    if first_total.is_zero() {
        return Ok(finish(vec![full, ItemSet::empty(m)], trace, oracle.calls()));
    }

    let mut prefix = ItemSet::empty(m);
    let mut stop = None;
    for item in 0..m {
        prefix.insert(item);
        let gap = oracle.value(0, prefix) - oracle.value(1, full.difference(prefix));
        if opts.trace {
            trace.push(TraceStep {
                kind: StepKind::Give,
                agent: 0,
                bundle: ItemSet::singleton(m, item),
                level: gap,
            });
        }
        if gap.is_positive() {
            stop = Some(item);
            break;
        }
    }
    // f(m) = v_1(M) > 0, so the sweep always stops.
    let stop = stop.expect("sweep stops by the last item");
    let after = ItemSet::from_bits(m, (1u64 << (stop + 1)) - 1).expect("prefix in range");
    let candidate = Allocation::new(m, vec![after, full.difference(after)]).expect("partition");
    let report = check_eq1(&oracle, &candidate).expect("valid allocation");
    if report.is_eq1 {
        return Ok(finish(candidate.bundles().to_vec(), trace, oracle.calls()));
    }
    let before = after.without(stop);
    Ok(finish(vec![before, full.difference(before)], trace, oracle.calls()))
}
