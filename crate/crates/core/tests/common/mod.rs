//! Reference implementations written straight from the definitions, kept
//! independent of the library's own checkers and verifiers.

#![allow(dead_code)]

use eq1::{Allocation, Instance, ItemSet, ValuationSpec, Valuations, Value};

fn set(m: usize, bits: u64) -> ItemSet {
    ItemSet::from_bits(m, bits).unwrap()
}

fn members(bits: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|e| bits >> e & 1 == 1).collect()
}

/// Every owner vector of `m` items over `n` agents, as allocations.
pub fn all_allocations(n: usize, m: usize) -> Vec<Allocation> {
    let mut out = Vec::new();
    let mut owners = vec![0usize; m];
    loop {
        out.push(Allocation::from_owners(n, m, &owners).unwrap());
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            owners[k] += 1;
            if owners[k] < n {
                break;
            }
            owners[k] = 0;
            k += 1;
        }
    }
}

/// EQ1 by literal expansion of both quantifiers.
pub fn literal_eq1(inst: &Instance, alloc: &Allocation) -> bool {
    let m = inst.items();
    let n = inst.agents();
    let b: Vec<u64> = (0..n).map(|i| alloc.bundle(i).bits()).collect();
    for i in 0..n {
        for j in 0..n {
            let vi = inst.value(i, set(m, b[i]));
            let vj = inst.value(j, set(m, b[j]));
            if vi >= vj {
                continue;
            }
            let from_j = members(b[j], m)
                .into_iter()
                .any(|g| vi >= inst.value(j, set(m, b[j] & !(1 << g))));
            let from_i = members(b[i], m)
                .into_iter()
                .any(|c| inst.value(i, set(m, b[i] & !(1 << c))) >= vj);
            if !from_j && !from_i {
                return false;
            }
        }
    }
    true
}

/// EF1 by literal expansion.
pub fn literal_ef1(inst: &Instance, alloc: &Allocation) -> bool {
    let m = inst.items();
    let n = inst.agents();
    let b: Vec<u64> = (0..n).map(|i| alloc.bundle(i).bits()).collect();
    for i in 0..n {
        for j in 0..n {
            if inst.value(i, set(m, b[i])) >= inst.value(i, set(m, b[j])) {
                continue;
            }
            let fixed = members(b[i] | b[j], m).into_iter().any(|e| {
                inst.value(i, set(m, b[i] & !(1 << e))) >= inst.value(i, set(m, b[j] & !(1 << e)))
            });
            if !fixed {
                return false;
            }
        }
    }
    true
}

/// Lower-witness predicate straight from its two clauses.
pub fn literal_witness(inst: &Instance, alloc: &Allocation, theta: Value) -> bool {
    let m = inst.items();
    (0..inst.agents()).all(|i| {
        let b = alloc.bundle(i).bits();
        let own = inst.value(i, set(m, b));
        own >= theta
            && (own == theta || members(b, m).into_iter().any(|g| inst.value(i, set(m, b & !(1 << g))) <= theta))
    })
}

fn table(spec: &ValuationSpec) -> Vec<Value> {
    let m = spec.universe();
    (0..1u64 << m).map(|b| spec.value(set(m, b))).collect()
}

/// `∀ S ⊆ T, e ∉ T: v(S+e) − v(S) ≥ v(T+e) − v(T)`.
pub fn naive_submodular(spec: &ValuationSpec) -> bool {
    let m = spec.universe();
    let v = table(spec);
    let full = (1u64 << m) - 1;
    for t in 0..=full {
        let mut s = t;
        loop {
            for e in 0..m {
                if t >> e & 1 == 0 {
                    let e = 1u64 << e;
                    let lhs = v[(s | e) as usize] - v[s as usize];
                    let rhs = v[(t | e) as usize] - v[t as usize];
                    if lhs < rhs {
                        return false;
                    }
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    true
}

pub fn naive_supermodular(spec: &ValuationSpec) -> bool {
    naive_submodular(&spec.negate())
}

/// Disjoint-pairs subadditivity.
pub fn naive_subadditive(spec: &ValuationSpec) -> bool {
    let m = spec.universe();
    let v = table(spec);
    let full = (1u64 << m) - 1;
    (0..=full).all(|s| (0..=full).filter(|t| s & t == 0).all(|t| v[(s | t) as usize] <= v[s as usize] + v[t as usize]))
}

pub fn naive_doubly_monotone(spec: &ValuationSpec) -> bool {
    let m = spec.universe();
    let v = table(spec);
    (0..m).all(|e| {
        let bit = 1u64 << e;
        let marginals: Vec<Value> = (0..1u64 << m)
            .filter(|s| s & bit == 0)
            .map(|s| v[(s | bit) as usize] - v[s as usize])
            .collect();
        marginals.iter().all(|d| !d.is_negative()) || marginals.iter().all(|d| !d.is_positive())
    })
}

/// For disjoint `A`, nonempty `B` with `v(A ∪ B) ≥ v(A)`, some `b ∈ B` has `v(A + b) ≥ v(A)`.
pub fn naive_marginal_witness(spec: &ValuationSpec) -> bool {
    let m = spec.universe();
    let v = table(spec);
    let full = (1u64 << m) - 1;
    (0..=full).all(|a| {
        (1..=full).filter(|b| a & b == 0).all(|b| {
            v[(a | b) as usize] < v[a as usize]
                || members(b, m).into_iter().any(|e| v[(a | 1 << e) as usize] >= v[a as usize])
        })
    })
}

pub fn naive_sign(spec: &ValuationSpec, nonneg: bool) -> bool {
    table(spec).iter().all(|x| if nonneg { !x.is_negative() } else { !x.is_positive() })
}

/// Equal-sum bipartition by subset-sum dynamic programming.
pub fn dp_bipartition(values: &[u64]) -> bool {
    let total: u64 = values.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let half = (total / 2) as usize;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for &x in values {
        let x = x as usize;
        for s in (x..=half).rev() {
            reach[s] = reach[s] || reach[s - x];
        }
    }
    reach[half]
}

/// Table spec from raw integers, forcing `v(∅) = 0`.
pub fn table_from(m: usize, raw: &[i64]) -> ValuationSpec {
    let values = (0..1usize << m)
        .map(|b| if b == 0 { Value::ZERO } else { Value::from(raw[b]) })
        .collect();
    ValuationSpec::table(values, eq1::ClassSet::EMPTY).unwrap()
}
