//! Fairness predicates over complete allocations: EQ1, EF1, lower EQ1
//! witnesses, and rich/poor agents.

use std::fmt;

use thiserror::Error;

use crate::items::{Allocation, AllocationError, ItemSet};
use crate::valuation::Valuations;
use crate::value::Value;

/// Which bundle a repairing item was removed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Removed from the better-off agent's bundle.
    Rich,
    /// Removed from the worse-off agent's own bundle.
    Poor,
}

/// One repaired unequal pair: removing `item` from `side` closes the gap
/// between `poor` (lower value) and `rich`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Repair {
    pub poor: usize,
    pub rich: usize,
    pub item: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquityReport {
    pub is_eq1: bool,
    pub values: Vec<Value>,
    /// Ordered `(poor, rich)` pairs that no single removal repairs.
    pub violations: Vec<(usize, usize)>,
    pub repairs: Vec<Repair>,
}

/// Per-agent clause (b) evidence of a lower EQ1 witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentWitness {
    /// `v_i(A_i) = θ`.
    Exact,
    /// `v_i(A_i \ {g}) ≤ θ`.
    Removal(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub theta: Value,
    pub per_agent: Vec<AgentWitness>,
}

impl WitnessCertificate {
    /// Re-checks the certificate against the allocation exactly.
    pub fn recheck<V: Valuations + ?Sized>(&self, valuations: &V, alloc: &Allocation) -> bool {
        self.per_agent.len() == alloc.agents()
            && alloc.bundles().iter().enumerate().all(|(i, bundle)| {
                let own = valuations.value(i, *bundle);
                own >= self.theta
                    && match self.per_agent[i] {
                        AgentWitness::Exact => own == self.theta,
                        AgentWitness::Removal(g) => {
                            bundle.contains(g) && valuations.value(i, bundle.without(g)) <= self.theta
                        }
                    }
            })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WitnessFailure {
    #[error("agent {agent} values its bundle at {value}, below θ = {theta}")]
    BelowTheta { agent: usize, value: Value, theta: Value },
    #[error("agent {agent} values its bundle at {value} and no single removal brings it to θ = {theta} or below")]
    NotReducible { agent: usize, value: Value, theta: Value },
}

impl WitnessFailure {
    pub fn agent(&self) -> usize {
        match self {
            WitnessFailure::BelowTheta { agent, .. } | WitnessFailure::NotReducible { agent, .. } => *agent,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error("allocation is over {found} items but the instance has {expected}")]
    Universe { expected: usize, found: usize },
    #[error(transparent)]
    Witness(#[from] WitnessFailure),
}

fn validate<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Result<(), CheckError> {
    if alloc.agents() != valuations.agents() {
        return Err(AllocationError::AgentCount {
            expected: valuations.agents(),
            found: alloc.agents(),
        }
        .into());
    }
    if alloc.universe() != valuations.items() {
        return Err(CheckError::Universe {
            expected: valuations.items(),
            found: alloc.universe(),
        });
    }
    Ok(())
}

fn own_values<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Vec<Value> {
    alloc
        .bundles()
        .iter()
        .enumerate()
        .map(|(i, b)| valuations.value(i, *b))
        .collect()
}

/// Finds the repair for an unequal pair with `values[poor] < values[rich]`.
/// Rich-side removals are tried first, then poor-side; lowest item index wins within a side.
fn repair_pair<V: Valuations + ?Sized>(
    valuations: &V,
    alloc: &Allocation,
    values: &[Value],
    poor: usize,
    rich: usize,
) -> Option<Repair> {
    let rich_bundle = alloc.bundle(rich);
    let poor_bundle = alloc.bundle(poor);
    let from_rich = rich_bundle
        .iter()
        .find(|&g| values[poor] >= valuations.value(rich, rich_bundle.without(g)))
        .map(|item| Repair { poor, rich, item, side: Side::Rich });
    from_rich.or_else(|| {
        poor_bundle
            .iter()
            .find(|&c| valuations.value(poor, poor_bundle.without(c)) >= values[rich])
            .map(|item| Repair { poor, rich, item, side: Side::Poor })
    })
}

/// Equitability up to one item.
///
/// For every ordered pair `(i, j)` with `v_i(A_i) < v_j(A_j)` there must be
/// `g ∈ A_j` with `v_i(A_i) ≥ v_j(A_j \ {g})` or `c ∈ A_i` with
/// `v_i(A_i \ {c}) ≥ v_j(A_j)`.
pub fn check_eq1<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Result<EquityReport, CheckError> {
    validate(valuations, alloc)?;
    let values = own_values(valuations, alloc);
    let n = values.len();
    let mut violations = Vec::new();
    let mut repairs = Vec::new();
    for poor in 0..n {
        for rich in 0..n {
            if values[poor] >= values[rich] {
                continue;
            }
            match repair_pair(valuations, alloc, &values, poor, rich) {
                Some(r) => repairs.push(r),
                None => violations.push((poor, rich)),
            }
        }
    }
    Ok(EquityReport {
        is_eq1: violations.is_empty(),
        values,
        violations,
        repairs,
    })
}

/// Envy-freeness up to one item: whenever `v_i(A_i) < v_i(A_j)` some
/// `e ∈ A_i ∪ A_j` has `v_i(A_i \ {e}) ≥ v_i(A_j \ {e})`.
pub fn check_ef1<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Result<bool, CheckError> {
    validate(valuations, alloc)?;
    let n = alloc.agents();
    for i in 0..n {
        let own = alloc.bundle(i);
        let own_value = valuations.value(i, own);
        for j in (0..n).filter(|&j| j != i) {
            let other = alloc.bundle(j);
            if own_value >= valuations.value(i, other) {
                continue;
            }
            let repaired = own
                .union(other)
                .iter()
                .any(|e| valuations.value(i, own.without(e)) >= valuations.value(i, other.without(e)));
            if !repaired {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that `theta` is a lower EQ1 witness: every `v_i(A_i) ≥ θ`, and every
/// agent either sits exactly at `θ` or drops to `≤ θ` after removing one item.
pub fn check_lower_witness<V: Valuations + ?Sized>(
    valuations: &V,
    alloc: &Allocation,
    theta: Value,
) -> Result<WitnessCertificate, CheckError> {
    validate(valuations, alloc)?;
    let values = own_values(valuations, alloc);
    if let Some(agent) = values.iter().position(|v| *v < theta) {
        return Err(WitnessFailure::BelowTheta {
            agent,
            value: values[agent],
            theta,
        }
        .into());
    }
    let mut per_agent = Vec::with_capacity(values.len());
    for (agent, bundle) in alloc.bundles().iter().enumerate() {
        if values[agent] == theta {
            per_agent.push(AgentWitness::Exact);
            continue;
        }
        match bundle.iter().find(|&g| valuations.value(agent, bundle.without(g)) <= theta) {
            Some(g) => per_agent.push(AgentWitness::Removal(g)),
            None => {
                return Err(WitnessFailure::NotReducible {
                    agent,
                    value: values[agent],
                    theta,
                }
                .into())
            }
        }
    }
    Ok(WitnessCertificate { theta, per_agent })
}

/// Largest lower EQ1 witness, if any.
///
/// A witness, when it exists, can be taken from the finite candidate set
/// `{v_i(A_i)} ∪ {v_i(A_i \ {g})}`: clause (b) only changes truth at those points.
pub fn find_lower_witness<V: Valuations + ?Sized>(
    valuations: &V,
    alloc: &Allocation,
) -> Result<Option<WitnessCertificate>, CheckError> {
    validate(valuations, alloc)?;
    let values = own_values(valuations, alloc);
    let floor = values.iter().copied().min().expect("at least one agent");
    let mut candidates: Vec<Value> = values.clone();
    for (agent, bundle) in alloc.bundles().iter().enumerate() {
        candidates.extend(bundle.iter().map(|g| valuations.value(agent, bundle.without(g))));
    }
    candidates.retain(|c| *c <= floor);
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    candidates.dedup();
    for theta in candidates {
        if let Ok(cert) = check_lower_witness(valuations, alloc, theta) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Agents whose own-bundle value is maximal.
pub fn rich_agents<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Result<Vec<usize>, CheckError> {
    validate(valuations, alloc)?;
    let values = own_values(valuations, alloc);
    Ok(extremes(&values, true))
}

/// Agents whose own-bundle value is minimal.
pub fn poor_agents<V: Valuations + ?Sized>(valuations: &V, alloc: &Allocation) -> Result<Vec<usize>, CheckError> {
    validate(valuations, alloc)?;
    let values = own_values(valuations, alloc);
    Ok(extremes(&values, false))
}

fn extremes(values: &[Value], richest: bool) -> Vec<usize> {
    let target = if richest {
        values.iter().max()
    } else {
        values.iter().min()
    };
    let target = *target.expect("at least one agent");
    (0..values.len()).filter(|&i| values[i] == target).collect()
}

/// Rich agents of a possibly partial allocation, given as raw bundles.
pub(crate) fn rich_among<V: Valuations + ?Sized>(valuations: &V, bundles: &[ItemSet]) -> Vec<usize> {
    let values: Vec<Value> = bundles
        .iter()
        .enumerate()
        .map(|(i, b)| valuations.value(i, *b))
        .collect();
    extremes(&values, true)
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Rich => "rich",
            Side::Poor => "poor",
        })
    }
}
