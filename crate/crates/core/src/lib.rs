//! EQ1 allocations of indivisible items under non-monotone valuations.
//!
//! Items are indices `0..m` packed into an [`ItemSet`]; values are exact
//! rationals. Agents' set functions are described by [`ValuationSpec`]s and
//! grouped into an [`Instance`]. The [`solver`] module turns instances into
//! EQ1 allocations, [`fairness`] checks them, and [`oracle`] enumerates every
//! allocation for ground truth.

pub mod fairness;
pub mod generate;
pub mod graph;
pub mod items;
pub mod oracle;
pub mod reductions;
pub mod solver;
pub mod valuation;
pub mod value;

pub use fairness::{
    check_ef1, check_eq1, check_lower_witness, find_lower_witness, poor_agents, rich_agents, AgentWitness,
    CheckError, EquityReport, Repair, Side, WitnessCertificate, WitnessFailure,
};
pub use items::{Allocation, AllocationError, ItemError, ItemSet, MAX_ITEMS};
pub use oracle::{count_eq1, exists_eq1_bruteforce, ExistenceReport, OracleError, DEFAULT_BUDGET};
pub use solver::{solve_dispatch, SolveError, SolveOptions, SolveResult, Solver, SolverRegistry};
pub use valuation::{Class, ClassSet, Instance, ValuationKind, ValuationSpec, Valuations};
pub use value::Value;
