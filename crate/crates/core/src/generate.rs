//! Seeded random instances for tests, benchmarks and the `gen` command.
//!
//! Every generator draws from a caller-supplied RNG; [`rng`] gives the
//! reproducible ChaCha8 stream used throughout.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::items::ItemSet;
use crate::reductions::{restricted_to_instance, PartitionInput, ReductionError};
use crate::valuation::{Class, ClassSet, Instance, ValuationSpec, Verifier};
use crate::value::Value;

/// Attempts before a rejection sampler gives up.
pub const MAX_ATTEMPTS: usize = 1000;

/// The generator stream used by [`rng`].
pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("no {kind} sample accepted after {attempts} attempts")]
    Infeasible { kind: &'static str, attempts: usize },
    #[error("{0}")]
    BadParameters(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Additive agents with item values in `lo..=hi`, resampled per agent until
/// `v_i(M) ≥ 0`.
pub fn additive_mixed<R: Rng>(rng: &mut R, n: usize, m: usize, lo: i64, hi: i64) -> Result<Instance, GenError> {
    if lo > hi {
        return Err(GenError::BadParameters(format!("empty value range {lo}..={hi}")));
    }
    let mut specs = Vec::with_capacity(n);
    for _ in 0..n {
        let values = (0..MAX_ATTEMPTS)
            .map(|_| (0..m).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<i64>>())
            .find(|v| v.iter().sum::<i64>() >= 0)
            .ok_or(GenError::Infeasible {
                kind: "additive-mixed",
                attempts: MAX_ATTEMPTS,
            })?;
        specs.push(ValuationSpec::additive_ints(&values));
    }
    Ok(Instance::new(m, specs).expect("common universe"))
}

/// Table with `v(∅) = 0` and every other entry drawn from `0..=max`.
pub fn table_nonneg<R: Rng>(rng: &mut R, m: usize, max: i64) -> ValuationSpec {
    let values = (0..1u64 << m)
        .map(|bits| if bits == 0 { 0 } else { rng.gen_range(0..=max) })
        .map(Value::from)
        .collect();
    ValuationSpec::table(values, ClassSet::of(&[Class::Nonnegative])).expect("2^m entries")
}

/// Arbitrary table with `v(∅) = 0`, entries in `−max..=max`, and `v(M) ≥ 0`.
pub fn table_general<R: Rng>(rng: &mut R, m: usize, max: i64) -> ValuationSpec {
    let full = (1u64 << m) - 1;
    let values = (0..1u64 << m)
        .map(|bits| match bits {
            0 => 0,
            b if b == full => rng.gen_range(0..=max),
            _ => rng.gen_range(-max..=max),
        })
        .map(Value::from)
        .collect();
    ValuationSpec::table(values, ClassSet::EMPTY).expect("2^m entries")
}

/// Table with `v(∅) = 0` and no sign constraints at all.
pub fn table_any<R: Rng>(rng: &mut R, m: usize, max: i64) -> ValuationSpec {
    let values = (0..1u64 << m)
        .map(|bits| if bits == 0 { 0 } else { rng.gen_range(-max..=max) })
        .map(Value::from)
        .collect();
    ValuationSpec::table(values, ClassSet::EMPTY).expect("2^m entries")
}

/// Random weighted coverage function: item `e` covers a random subset of
/// `ground` weighted elements.
fn coverage<R: Rng>(rng: &mut R, m: usize, ground: usize, max_weight: i64) -> Vec<i64> {
    let weights: Vec<i64> = (0..ground).map(|_| rng.gen_range(1..=max_weight)).collect();
    let covers: Vec<u64> = (0..m).map(|_| rng.gen_range(0..1u64 << ground)).collect();
    (0..1u64 << m)
        .map(|bits| {
            let covered = (0..m).filter(|e| bits >> e & 1 == 1).fold(0u64, |acc, e| acc | covers[e]);
            (0..ground).filter(|u| covered >> u & 1 == 1).map(|u| weights[u]).sum()
        })
        .collect()
}

/// Nonnegative monotone submodular table: a weighted coverage function.
pub fn coverage_table<R: Rng>(rng: &mut R, m: usize) -> ValuationSpec {
    let values = coverage(rng, m, 6, 4).into_iter().map(Value::from).collect();
    ValuationSpec::table(values, ClassSet::of(&[Class::Nonnegative, Class::Submodular])).expect("2^m entries")
}

/// Possibly non-monotone submodular table: coverage plus a concave function
/// of `|S|` plus an item-wise modular term in `−modular..=modular`.
pub fn submodular_table<R: Rng>(rng: &mut R, m: usize, modular: i64) -> ValuationSpec {
    let cover = coverage(rng, m, 5, 3);
    let mut steps: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=4)).collect();
    steps.sort_unstable_by(|a, b| b.cmp(a));
    let concave: Vec<i64> = std::iter::once(0)
        .chain(steps.iter().scan(0, |acc, s| {
            *acc += s;
            Some(*acc)
        }))
        .collect();
    let items: Vec<i64> = (0..m).map(|_| rng.gen_range(-modular..=modular)).collect();
    let values = (0..1u64 << m)
        .map(|bits| {
            let linear: i64 = (0..m).filter(|e| bits >> e & 1 == 1).map(|e| items[e]).sum();
            Value::from(cover[bits as usize] + concave[bits.count_ones() as usize] + linear)
        })
        .collect();
    ValuationSpec::table(values, ClassSet::of(&[Class::Submodular])).expect("2^m entries")
}

/// Doubly monotone table `g(S ∩ G) − c(S ∩ C)` with `g`, `c` monotone coverage
/// functions and a random goods/chores split.
pub fn doubly_monotone_table<R: Rng>(rng: &mut R, m: usize) -> ValuationSpec {
    let goods: u64 = rng.gen_range(0..1u64 << m);
    let gain = coverage(rng, m, 5, 4);
    let loss = coverage(rng, m, 4, 3);
    let values = (0..1u64 << m)
        .map(|bits| Value::from(gain[(bits & goods) as usize] - loss[(bits & !goods) as usize]))
        .collect();
    ValuationSpec::table(values, ClassSet::of(&[Class::DoublyMonotone])).expect("2^m entries")
}

/// Subadditive table with negative sets allowed and `v(M) ≥ 0`.
///
/// Sets are filled by increasing size: a random draw, capped by the cheapest
/// split into two nonempty disjoint parts. Samples with `v(M) < 0` are
/// rejected, and each accepted sample is confirmed by the verifier.
pub fn subadditive_table<R: Rng>(rng: &mut R, m: usize) -> Result<ValuationSpec, GenError> {
    let full = ItemSet::full(m);
    let mut order = full.subsets_by_size();
    order.retain(|s| !s.is_empty());
    for _ in 0..MAX_ATTEMPTS {
        let mut values = vec![0i64; 1 << m];
        for set in &order {
            let k = set.len() as i64;
            // Only singletons may be drawn negative; larger sets go negative through the cap.
            let mut v = if k == 1 { rng.gen_range(-3..=4) } else { rng.gen_range(0..=2 * k + 3) };
            for part in set.subsets() {
                if part.is_empty() || part == *set {
                    continue;
                }
                let rest = set.difference(part);
                v = v.min(values[part.bits() as usize] + values[rest.bits() as usize]);
            }
            values[set.bits() as usize] = v;
        }
        if values[full.bits() as usize] < 0 {
            continue;
        }
        let spec = ValuationSpec::table(values.into_iter().map(Value::from).collect(), ClassSet::of(&[Class::Subadditive]))
            .expect("2^m entries");
        if Verifier::default().subadditive(&spec).map(|r| r.holds).unwrap_or(false) {
            return Ok(spec);
        }
    }
    Err(GenError::Infeasible {
        kind: "subadditive table",
        attempts: MAX_ATTEMPTS,
    })
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(vertices, edges).expect("simple graph")
}

/// Random Restricted-Partition input of length `m` with values in `1..=max`.
pub fn restricted_input<R: Rng>(rng: &mut R, m: usize, max: u64) -> Result<PartitionInput, GenError> {
    for _ in 0..MAX_ATTEMPTS {
        let mut values: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=max)).collect();
        values.shuffle(rng);
        let input = PartitionInput::new(values)?;
        if input.check_restricted().is_ok() {
            return Ok(input);
        }
    }
    Err(GenError::Infeasible {
        kind: "restricted partition input",
        attempts: MAX_ATTEMPTS,
    })
}

/// The three-agent supermodular instance built from `values`.
pub fn hardness(values: Vec<u64>) -> Result<Instance, GenError> {
    Ok(restricted_to_instance(&PartitionInput::new(values)?)?)
}
