//! Definition-level reference checks shared by the CLI test targets.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use eq1::{Allocation, Instance, ItemSet, Valuations};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn set(m: usize, bits: u64) -> ItemSet {
    ItemSet::from_bits(m, bits).unwrap()
}

fn members(bits: u64, m: usize) -> impl Iterator<Item = usize> {
    (0..m).filter(move |e| bits >> e & 1 == 1)
}

/// EQ1 by direct expansion: every strictly poorer agent is repaired by one removal.
pub fn literal_eq1(inst: &Instance, alloc: &Allocation) -> bool {
    let m = inst.items();
    let n = inst.agents();
    let b: Vec<u64> = (0..n).map(|i| alloc.bundle(i).bits()).collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let vi = inst.value(i, set(m, b[i]));
            let vj = inst.value(j, set(m, b[j]));
            vi >= vj
                || members(b[j], m).any(|g| vi >= inst.value(j, set(m, b[j] & !(1 << g))))
                || members(b[i], m).any(|c| inst.value(i, set(m, b[i] & !(1 << c))) >= vj)
        })
    })
}

pub fn literal_ef1(inst: &Instance, alloc: &Allocation) -> bool {
    let m = inst.items();
    let n = inst.agents();
    let b: Vec<u64> = (0..n).map(|i| alloc.bundle(i).bits()).collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            inst.value(i, set(m, b[i])) >= inst.value(i, set(m, b[j]))
                || members(b[i] | b[j], m)
                    .any(|e| inst.value(i, set(m, b[i] & !(1 << e))) >= inst.value(i, set(m, b[j] & !(1 << e))))
        })
    })
}

/// Subset-sum reachability of half the total.
pub fn dp_bipartition(values: &[u64]) -> bool {
    let total: u64 = values.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let half = (total / 2) as usize;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for &x in values {
        for s in (x as usize..=half).rev() {
            reach[s] |= reach[s - x as usize];
        }
    }
    reach[half]
}

/// Marginal-witness property straight from its statement.
pub fn naive_marginal_witness(spec: &eq1::ValuationSpec) -> bool {
    let m = spec.universe();
    let v: Vec<eq1::Value> = (0..1u64 << m).map(|b| spec.value(set(m, b))).collect();
    let full = (1u64 << m) - 1;
    (0..=full).all(|a| {
        (1..=full).filter(|b| a & b == 0).all(|b| {
            v[(a | b) as usize] < v[a as usize] || members(b, m).any(|e| v[(a | 1 << e) as usize] >= v[a as usize])
        })
    })
}
