//! Constructive EQ1 solvers.
//!
//! Each algorithm sits behind the [`Solver`] trait and is registered by name
//! in a [`SolverRegistry`]; the `auto` entry routes an instance to the first
//! applicable algorithm by grand-bundle sign and declared valuation classes.

mod brute;
mod dispatch;
mod marginal_witness;
mod nonnegative;
mod two_agents;
mod witness_finder;

pub use brute::BruteForce;
pub use dispatch::{solve_dispatch, Dispatch};
pub use marginal_witness::{solve_marginal_witness, solve_nonneg_submodular, MarginalWitness, NonnegSubmodular};
pub use nonnegative::{solve_identical_subadditive, solve_nonnegative, IdenticalSubadditive, Nonnegative};
pub use two_agents::{solve_two_agents, TwoAgents};
pub use witness_finder::{GoodsFirst, SingletonScan, WitnessFinder, WitnessFinderRegistry, WitnessProbe};

use std::fmt;

use thiserror::Error;

use crate::fairness::WitnessCertificate;
use crate::items::{Allocation, ItemSet};
use crate::oracle::DEFAULT_BUDGET;
use crate::valuation::{Class, Instance, Valuations, Verifier};
use crate::value::Value;

/// Knobs shared by all solvers.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Record a per-step trace.
    pub trace: bool,
    /// Cap on enumeration work (set evaluations for subset searches,
    /// allocations for brute force).
    pub budget: u64,
    /// Assert loop invariants at every iteration.
    pub check_invariants: bool,
    /// Name of the witness finder used by the marginal-witness solvers.
    pub witness_finder: String,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            trace: false,
            budget: DEFAULT_BUDGET,
            check_invariants: cfg!(debug_assertions),
            witness_finder: SingletonScan::NAME.to_string(),
        }
    }
}

impl SolveOptions {
    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn with_invariants(mut self) -> Self {
        self.check_invariants = true;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_witness_finder(mut self, name: &str) -> Self {
        self.witness_finder = name.to_string();
        self
    }
}

/// What happened at one step of a solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// A single item or bundle handed out by the main loop.
    Give,
    /// The whole pool went to one agent because its value stays at or below μ.
    PoolAtLevel,
    /// The whole pool went to one agent because one removal brings it to μ.
    PoolAfterRemoval,
    /// Fixed assignment before or after the main loop.
    Seed,
    /// Final one-item-each distribution.
    Tail,
}

impl StepKind {
    pub fn name(&self) -> &'static str {
        match self {
            StepKind::Give => "give",
            StepKind::PoolAtLevel => "pool-at-level",
            StepKind::PoolAfterRemoval => "pool-after-removal",
            StepKind::Seed => "seed",
            StepKind::Tail => "tail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub agent: usize,
    pub bundle: ItemSet,
    /// μ for the marginal-witness loop, the minimised value for subset search.
    pub level: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub solver: String,
    pub allocation: Allocation,
    pub witness: Option<WitnessCertificate>,
    pub trace: Vec<TraceStep>,
    /// Valuation-oracle evaluations the algorithm itself performed.
    pub oracle_calls: u64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{solver} needs {expected} agents, instance has {found}")]
    AgentCount {
        solver: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("agent {agent} values the grand bundle negatively ({value})")]
    NegativeGrandBundle { agent: usize, value: Value },
    #[error("agents disagree on the sign of the grand bundle: agent {positive} values it positively, agent {negative} negatively")]
    MixedSigns { positive: usize, negative: usize },
    #[error("agent {agent} does not satisfy the {class} precondition of {solver}")]
    ClassPrecondition {
        solver: &'static str,
        agent: usize,
        class: &'static str,
    },
    #[error("{solver} needs identical valuations")]
    NotIdentical { solver: &'static str },
    #[error("{solver} needs at least as many items as agents ({items} < {agents})")]
    TooFewItems {
        solver: &'static str,
        items: usize,
        agents: usize,
    },
    #[error("agent {agent} found no item with nonnegative marginal at level {level}; the marginal-witness precondition is violated")]
    NoWitnessItem { agent: usize, level: Value },
    #[error("agent {agent} has a set of negative value {value}; the nonnegativity precondition is violated")]
    NegativeValue { agent: usize, value: Value },
    #[error("agent {agent} values the empty set at {value}; solvers need v(∅) = 0")]
    NonzeroEmpty { agent: usize, value: Value },
    #[error("no algorithm applies: {0}")]
    NotApplicable(String),
    #[error("enumeration needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("no EQ1 allocation exists for this instance")]
    NoEq1,
    #[error("unknown solver `{0}`")]
    UnknownSolver(String),
    #[error("unknown witness finder `{0}`")]
    UnknownWitnessFinder(String),
}

/// An EQ1 algorithm selectable by name.
pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Checks the preconditions the algorithm's guarantee depends on.
    fn check(&self, instance: &Instance) -> Result<(), SolveError>;

    fn solve(&self, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError>;
}

impl fmt::Debug for dyn Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solver({})", self.name())
    }
}

/// Name-indexed collection of solvers.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry { solvers: Vec::new() }
    }

    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Solver> {
        self.solvers.iter().map(|s| s.as_ref())
    }

    pub fn solve(&self, name: &str, instance: &Instance, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        let solver = self
            .get(name)
            .ok_or_else(|| SolveError::UnknownSolver(name.to_string()))?;
        solver.solve(instance, opts)
    }
}

impl Default for SolverRegistry {
    /// Every built-in solver.
    fn default() -> Self {
        let mut registry = SolverRegistry::empty();
        registry.register(Box::new(Dispatch));
        registry.register(Box::new(TwoAgents));
        registry.register(Box::new(MarginalWitness));
        registry.register(Box::new(NonnegSubmodular));
        registry.register(Box::new(Nonnegative));
        registry.register(Box::new(IdenticalSubadditive));
        registry.register(Box::new(BruteForce));
        registry
    }
}

// Shared precondition helpers.

pub(crate) fn require_nonneg_grand(instance: &Instance) -> Result<(), SolveError> {
    let full = instance.full();
    for agent in 0..instance.agents() {
        let value = instance.value(agent, full);
        if value.is_negative() {
            return Err(SolveError::NegativeGrandBundle { agent, value });
        }
    }
    Ok(())
}

pub(crate) fn require_normalized(instance: &Instance) -> Result<(), SolveError> {
    let empty = ItemSet::empty(instance.items());
    for agent in 0..instance.agents() {
        let value = instance.value(agent, empty);
        if !value.is_zero() {
            return Err(SolveError::NonzeroEmpty { agent, value });
        }
    }
    Ok(())
}

/// Every agent declares one of `classes`, or (on small universes) verifiably satisfies `fallback`.
pub(crate) fn require_class(
    instance: &Instance,
    solver: &'static str,
    classes: &[Class],
    fallback: crate::valuation::Property,
) -> Result<(), SolveError> {
    for (agent, spec) in instance.specs().iter().enumerate() {
        if classes.iter().any(|c| spec.declares(*c)) {
            continue;
        }
        let verified = Verifier::default()
            .check(spec, fallback)
            .map(|r| r.holds)
            .unwrap_or(false);
        if !verified {
            return Err(SolveError::ClassPrecondition {
                solver,
                agent,
                class: fallback.name(),
            });
        }
    }
    Ok(())
}

/// Trivial instances every solver answers the same way: no items, or a single agent.
pub(crate) fn degenerate(instance: &Instance, solver: &'static str) -> Option<SolveResult> {
    let n = instance.agents();
    let m = instance.items();
    if m != 0 && n != 1 {
        return None;
    }
    let mut bundles = vec![ItemSet::empty(m); n];
    bundles[0] = ItemSet::full(m);
    let allocation = Allocation::new(m, bundles).expect("degenerate allocation");
    let witness = crate::fairness::find_lower_witness(instance, &allocation).ok().flatten();
    Some(SolveResult {
        solver: solver.to_string(),
        allocation,
        witness,
        trace: Vec::new(),
        oracle_calls: 0,
    })
}

/// Mutable state shared by the loop-based solvers: partial bundles plus the pool.
#[derive(Clone, Debug)]
pub(crate) struct Partial {
    pub bundles: Vec<ItemSet>,
    pub pool: ItemSet,
    pub trace: Option<Vec<TraceStep>>,
}

impl Partial {
    pub fn new(n: usize, m: usize, trace: bool) -> Self {
        Partial {
            bundles: vec![ItemSet::empty(m); n],
            pool: ItemSet::full(m),
            trace: trace.then(Vec::new),
        }
    }

    pub fn give(&mut self, agent: usize, items: ItemSet, kind: StepKind, level: Value) {
        debug_assert!(items.is_subset(&self.pool));
        self.bundles[agent] = self.bundles[agent].union(items);
        self.pool = self.pool.difference(items);
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceStep {
                kind,
                agent,
                bundle: items,
                level,
            });
        }
    }

    pub fn finish(self, solver: &str, witness: Option<WitnessCertificate>, oracle_calls: u64) -> SolveResult {
        debug_assert!(self.pool.is_empty());
        let m = self.pool.universe();
        SolveResult {
            solver: solver.to_string(),
            allocation: Allocation::new(m, self.bundles).expect("solvers produce complete partitions"),
            witness,
            trace: self.trace.unwrap_or_default(),
            oracle_calls,
        }
    }
}

/// Finishes a loop-based run, certifying `theta` as a lower witness of the final allocation.
pub(crate) fn conclude(
    instance: &Instance,
    state: Partial,
    theta: Value,
    solver: &str,
    calls: u64,
) -> Result<SolveResult, SolveError> {
    let alloc = Allocation::new(instance.items(), state.bundles.clone()).expect("solvers produce complete partitions");
    let witness = crate::fairness::check_lower_witness(instance, &alloc, theta).map_err(|e| {
        SolveError::InvariantViolated(format!("returned level {theta} is not a lower witness: {e}"))
    })?;
    Ok(state.finish(solver, Some(witness), calls))
}
