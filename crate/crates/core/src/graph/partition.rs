use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::Graph;
use crate::fairness::WitnessCertificate;
use crate::items::ItemSet;
use crate::solver::{solve_nonneg_submodular, solve_nonnegative, SolveError, SolveOptions};
use crate::valuation::{Instance, ValuationSpec, Valuations};
use crate::value::Value;

/// `c` in the oracle-call bound `c·k·|V|²` of [`partition_cut`].
pub const CUT_CALL_CONSTANT: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    Cut,
    Density,
}

impl PartitionMode {
    pub fn name(&self) -> &'static str {
        match self {
            PartitionMode::Cut => "cut",
            PartitionMode::Density => "density",
        }
    }
}

impl std::str::FromStr for PartitionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cut" => Ok(PartitionMode::Cut),
            "density" => Ok(PartitionMode::Density),
            other => Err(format!("unknown partition mode `{other}`, expected cut or density")),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cannot split {vertices} vertices into {parts} nonempty parts")]
    TooManyParts { parts: usize, vertices: usize },
    #[error("need at least one part")]
    NoParts,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub mode: PartitionMode,
    pub parts: Vec<ItemSet>,
    pub values: Vec<Value>,
    /// Largest minus smallest part value.
    pub spread: Value,
    /// The guaranteed ceiling on `spread`: Δ for cuts, 1 for densities.
    pub bound: Value,
    pub witness: Option<WitnessCertificate>,
    pub oracle_calls: u64,
}

impl PartitionResult {
    pub fn within_bound(&self) -> bool {
        self.spread <= self.bound
    }
}

impl fmt::Display for PartitionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (part, value)) in self.parts.iter().zip(&self.values).enumerate() {
            writeln!(f, "part {i}: {part} {} = {value}", self.mode.name())?;
        }
        write!(f, "spread {} (bound {})", self.spread, self.bound)
    }
}

fn build(graph: &Graph, k: usize, spec: ValuationSpec) -> Result<Instance, PartitionError> {
    if k == 0 {
        return Err(PartitionError::NoParts);
    }
    if k > graph.vertex_count() {
        return Err(PartitionError::TooManyParts {
            parts: k,
            vertices: graph.vertex_count(),
        });
    }
    Ok(Instance::identical(k, spec).expect("graph valuation over its own vertices"))
}

fn finish(
    mode: PartitionMode,
    instance: &Instance,
    parts: Vec<ItemSet>,
    bound: Value,
    witness: Option<WitnessCertificate>,
    oracle_calls: u64,
) -> PartitionResult {
    let values: Vec<Value> = parts.iter().map(|p| instance.value(0, *p)).collect();
    let max = *values.iter().max().expect("at least one part");
    let min = *values.iter().min().expect("at least one part");
    PartitionResult {
        mode,
        parts,
        values,
        spread: max - min,
        bound,
        witness,
        oracle_calls,
    }
}

/// Splits the vertices into `k` nonempty parts whose cut values differ by at
/// most the maximum degree. Uses at most `4·k·|V|²` cut evaluations.
pub fn partition_cut(graph: &Graph, k: usize) -> Result<PartitionResult, PartitionError> {
    let instance = build(graph, k, ValuationSpec::cut(Arc::new(graph.clone())))?;
    let result = solve_nonneg_submodular(&instance, &SolveOptions::default())?;
    Ok(finish(
        PartitionMode::Cut,
        &instance,
        result.allocation.bundles().to_vec(),
        Value::from(graph.max_degree()),
        result.witness,
        result.oracle_calls,
    ))
}

/// Splits the vertices into `k` nonempty parts whose densities differ by at
/// most 1. Exponential in `|V|`; `budget` caps the subset enumeration.
pub fn partition_density(graph: &Graph, k: usize, budget: u64) -> Result<PartitionResult, PartitionError> {
    let instance = build(graph, k, ValuationSpec::density(Arc::new(graph.clone())))?;
    let result = solve_nonnegative(&instance, &SolveOptions::default().with_budget(budget))?;
    Ok(finish(
        PartitionMode::Density,
        &instance,
        result.allocation.bundles().to_vec(),
        Value::ONE,
        result.witness,
        result.oracle_calls,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_BUDGET;

    #[test]
    fn single_part() {
        let g = Graph::path(4);
        let r = partition_cut(&g, 1).unwrap();
        assert_eq!(r.parts, vec![ItemSet::full(4)]);
        assert_eq!(r.spread, Value::ZERO);
    }

    #[test]
    fn path_of_five() {
        let g = Graph::path(5);
        let r = partition_cut(&g, 2).unwrap();
        assert!(r.within_bound());
        assert_eq!(r.bound, Value::from(2));
        assert!(r.parts.iter().all(|p| !p.is_empty()));
        assert!(r.oracle_calls <= CUT_CALL_CONSTANT * 2 * 25);
    }

    #[test]
    fn density_on_k4() {
        let r = partition_density(&Graph::complete(4), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.within_bound());
        assert!(r.parts.iter().all(|p| !p.is_empty()));
    }

    #[test]
    fn edgeless_density() {
        let g = Graph::new(4, Vec::new()).unwrap();
        let r = partition_density(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.spread, Value::ZERO);
    }

    #[test]
    fn too_many_parts() {
        assert_eq!(
            partition_cut(&Graph::path(2), 3),
            Err(PartitionError::TooManyParts { parts: 3, vertices: 2 })
        );
        assert_eq!(partition_cut(&Graph::path(2), 0), Err(PartitionError::NoParts));
    }
}
