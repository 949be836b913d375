//! Exhaustive class verifiers.
//!
//! Every verifier tabulates the function once and then walks the defining
//! inequality over all relevant set pairs. Search order is increasing
//! cardinality, then increasing bitmask, for every set involved; the first
//! violation found is reported.

use std::fmt;

use thiserror::Error;

use super::{Instance, ValuationSpec, Valuations};
use crate::items::ItemSet;
use crate::value::Value;

/// Default cap on the universe size for exhaustive verification.
pub const DEFAULT_VERIFY_LIMIT: usize = 12;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("exhaustive verification over {m} items exceeds the limit of {limit}")]
    BudgetExceeded { m: usize, limit: usize },
}

/// The property a [`ClassReport`] speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Submodular,
    Supermodular,
    Subadditive,
    Superadditive,
    DoublyMonotone,
    Nonnegative,
    Nonpositive,
    MarginalWitness,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Submodular,
        Property::Supermodular,
        Property::Subadditive,
        Property::Superadditive,
        Property::DoublyMonotone,
        Property::Nonnegative,
        Property::Nonpositive,
        Property::MarginalWitness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Submodular => "submodular",
            Property::Supermodular => "supermodular",
            Property::Subadditive => "subadditive",
            Property::Superadditive => "superadditive",
            Property::DoublyMonotone => "doubly_monotone",
            Property::Nonnegative => "nonnegative",
            Property::Nonpositive => "nonpositive",
            Property::MarginalWitness => "marginal_witness",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        let normalized = name.trim().replace('-', "_");
        Property::ALL.into_iter().find(|p| p.name() == normalized)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete violation of a defining inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// `base ⊆ superset`, `item ∉ superset`, and the marginals of `item` are in the wrong order.
    Marginal {
        base: ItemSet,
        superset: ItemSet,
        item: usize,
    },
    /// Disjoint `first`, `second` whose union breaks sub- or superadditivity.
    DisjointPair { first: ItemSet, second: ItemSet },
    /// A set whose value has the wrong sign.
    Sign { set: ItemSet },
    /// An item that is neither a good nor a chore.
    MixedItem {
        item: usize,
        gain_at: ItemSet,
        loss_at: ItemSet,
    },
    /// `v(base ∪ block) ≥ v(base)` but no single item of `block` has a nonnegative marginal.
    MarginalWitness { base: ItemSet, block: ItemSet },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Marginal { base, superset, item } => {
                write!(f, "S = {base}, T = {superset}, e = {item}")
            }
            Counterexample::DisjointPair { first, second } => write!(f, "S = {first}, T = {second}"),
            Counterexample::Sign { set } => write!(f, "S = {set}"),
            Counterexample::MixedItem { item, gain_at, loss_at } => write!(
                f,
                "item {item} gains at {gain_at} and loses at {loss_at}"
            ),
            Counterexample::MarginalWitness { base, block } => write!(f, "A = {base}, B = {block}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub property: Property,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl ClassReport {
    fn holds(property: Property) -> Self {
        ClassReport {
            property,
            holds: true,
            counterexample: None,
        }
    }

    fn fails(property: Property, cx: Counterexample) -> Self {
        ClassReport {
            property,
            holds: false,
            counterexample: Some(cx),
        }
    }

    /// Re-evaluates the counterexample against `spec` and confirms it violates
    /// the defining inequality. Returns `true` for a holding report.
    pub fn recheck(&self, spec: &ValuationSpec) -> bool {
        let Some(cx) = &self.counterexample else {
            return self.holds;
        };
        let v = |s: ItemSet| spec.value(s);
        match (self.property, cx) {
            (Property::Submodular, Counterexample::Marginal { base, superset, item }) => {
                v(base.with(*item)) - v(*base) < v(superset.with(*item)) - v(*superset)
            }
            (Property::Supermodular, Counterexample::Marginal { base, superset, item }) => {
                v(base.with(*item)) - v(*base) > v(superset.with(*item)) - v(*superset)
            }
            (Property::Subadditive, Counterexample::DisjointPair { first, second }) => {
                first.is_disjoint(second) && v(first.union(*second)) > v(*first) + v(*second)
            }
            (Property::Superadditive, Counterexample::DisjointPair { first, second }) => {
                first.is_disjoint(second) && v(first.union(*second)) < v(*first) + v(*second)
            }
            (Property::Nonnegative, Counterexample::Sign { set }) => v(*set).is_negative(),
            (Property::Nonpositive, Counterexample::Sign { set }) => v(*set).is_positive(),
            (Property::DoublyMonotone, Counterexample::MixedItem { item, gain_at, loss_at }) => {
                v(gain_at.with(*item)) > v(*gain_at) && v(loss_at.with(*item)) < v(*loss_at)
            }
            (Property::MarginalWitness, Counterexample::MarginalWitness { base, block }) => {
                let level = v(*base);
                base.is_disjoint(block)
                    && !block.is_empty()
                    && v(base.union(*block)) >= level
                    && block.iter().all(|b| v(base.with(b)) < level)
            }
            _ => false,
        }
    }
}

/// Result of [`Verifier::doubly_monotone`]: the class report plus, when it
/// holds, the split of items into goods and chores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublyMonotoneReport {
    pub report: ClassReport,
    pub split: Option<(ItemSet, ItemSet)>,
}

/// Exhaustive verifier with a configurable universe cap.
#[derive(Clone, Copy, Debug)]
pub struct Verifier {
    pub max_items: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            max_items: DEFAULT_VERIFY_LIMIT,
        }
    }
}

/// All `2^m` values of a spec, indexed by bitmask.
struct Tabulated {
    m: usize,
    values: Vec<Value>,
    by_size: Vec<ItemSet>,
}

impl Tabulated {
    fn new(spec: &ValuationSpec) -> Self {
        let m = spec.universe();
        let full = ItemSet::full(m);
        Tabulated {
            m,
            values: full.subsets().map(|s| spec.value(s)).collect(),
            by_size: full.subsets_by_size(),
        }
    }

    fn at(&self, s: ItemSet) -> Value {
        self.values[s.bits() as usize]
    }
}

impl Verifier {
    pub fn new(max_items: usize) -> Self {
        Verifier { max_items }
    }

    fn tabulate(&self, spec: &ValuationSpec) -> Result<Tabulated, VerifyError> {
        let m = spec.universe();
        if m > self.max_items {
            return Err(VerifyError::BudgetExceeded {
                m,
                limit: self.max_items,
            });
        }
        Ok(Tabulated::new(spec))
    }

    pub fn check(&self, spec: &ValuationSpec, property: Property) -> Result<ClassReport, VerifyError> {
        match property {
            Property::Submodular => self.submodular(spec),
            Property::Supermodular => self.supermodular(spec),
            Property::Subadditive => self.subadditive(spec),
            Property::Superadditive => self.superadditive(spec),
            Property::DoublyMonotone => self.doubly_monotone(spec).map(|r| r.report),
            Property::Nonnegative => self.nonnegative(spec),
            Property::Nonpositive => self.nonpositive(spec),
            Property::MarginalWitness => self.marginal_witness(spec),
        }
    }

    /// `v(S∪e) − v(S) ≥ v(T∪e) − v(T)` for all `S ⊆ T`, `e ∉ T`.
    pub fn submodular(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(modularity(&t, Property::Submodular, |small, large| small >= large))
    }

    /// `v(S∪e) − v(S) ≤ v(T∪e) − v(T)` for all `S ⊆ T`, `e ∉ T`.
    pub fn supermodular(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(modularity(&t, Property::Supermodular, |small, large| small <= large))
    }

    /// `v(S ∪ T) ≤ v(S) + v(T)` for all disjoint `S`, `T`.
    pub fn subadditive(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(additivity(&t, Property::Subadditive, |joint, split| joint <= split))
    }

    /// `v(S ∪ T) ≥ v(S) + v(T)` for all disjoint `S`, `T`.
    pub fn superadditive(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(additivity(&t, Property::Superadditive, |joint, split| joint >= split))
    }

    pub fn nonnegative(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(sign(&t, Property::Nonnegative, |v| !v.is_negative()))
    }

    pub fn nonpositive(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        Ok(sign(&t, Property::Nonpositive, |v| !v.is_positive()))
    }

    /// Every item is a good (all marginals `≥ 0`) or a chore (all marginals `≤ 0`).
    /// Items with only zero marginals count as goods.
    pub fn doubly_monotone(&self, spec: &ValuationSpec) -> Result<DoublyMonotoneReport, VerifyError> {
        let t = self.tabulate(spec)?;
        let mut goods = ItemSet::empty(t.m);
        let mut chores = ItemSet::empty(t.m);
        for item in 0..t.m {
            let mut gain_at = None;
            let mut loss_at = None;
            for &s in &t.by_size {
                if s.contains(item) {
                    continue;
                }
                let marginal = t.at(s.with(item)) - t.at(s);
                if marginal.is_positive() && gain_at.is_none() {
                    gain_at = Some(s);
                }
                if marginal.is_negative() && loss_at.is_none() {
                    loss_at = Some(s);
                }
            }
            match (gain_at, loss_at) {
                (Some(gain_at), Some(loss_at)) => {
                    return Ok(DoublyMonotoneReport {
                        report: ClassReport::fails(
                            Property::DoublyMonotone,
                            Counterexample::MixedItem { item, gain_at, loss_at },
                        ),
                        split: None,
                    })
                }
                (_, None) => goods.insert(item),
                (None, Some(_)) => chores.insert(item),
            }
        }
        Ok(DoublyMonotoneReport {
            report: ClassReport::holds(Property::DoublyMonotone),
            split: Some((goods, chores)),
        })
    }

    /// For all disjoint `A`, `B ≠ ∅` with `v(A ∪ B) ≥ v(A)` some `b ∈ B` has `v(A ∪ b) ≥ v(A)`.
    pub fn marginal_witness(&self, spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
        let t = self.tabulate(spec)?;
        for &base in &t.by_size {
            let level = t.at(base);
            let witnesses = ItemSet::from_items(
                t.m,
                base.complement().iter().filter(|&b| t.at(base.with(b)) >= level),
            )
            .expect("items in range");
            for block in base.complement().subsets_by_size() {
                if block.is_empty() || !block.is_disjoint(&witnesses) {
                    continue;
                }
                if t.at(base.union(block)) >= level {
                    return Ok(ClassReport::fails(
                        Property::MarginalWitness,
                        Counterexample::MarginalWitness { base, block },
                    ));
                }
            }
        }
        Ok(ClassReport::holds(Property::MarginalWitness))
    }
}

fn modularity(
    t: &Tabulated,
    property: Property,
    ordered: impl Fn(Value, Value) -> bool,
) -> ClassReport {
    for &base in &t.by_size {
        let outside = base.complement();
        for extra in outside.subsets_by_size() {
            let superset = base.union(extra);
            for item in superset.complement().iter() {
                let small = t.at(base.with(item)) - t.at(base);
                let large = t.at(superset.with(item)) - t.at(superset);
                if !ordered(small, large) {
                    return ClassReport::fails(
                        property,
                        Counterexample::Marginal { base, superset, item },
                    );
                }
            }
        }
    }
    ClassReport::holds(property)
}

fn additivity(
    t: &Tabulated,
    property: Property,
    ordered: impl Fn(Value, Value) -> bool,
) -> ClassReport {
    for &first in &t.by_size {
        for second in first.complement().subsets_by_size() {
            if !ordered(t.at(first.union(second)), t.at(first) + t.at(second)) {
                return ClassReport::fails(property, Counterexample::DisjointPair { first, second });
            }
        }
    }
    ClassReport::holds(property)
}

fn sign(t: &Tabulated, property: Property, ok: impl Fn(Value) -> bool) -> ClassReport {
    match t.by_size.iter().find(|s| !ok(t.at(**s))) {
        Some(&set) => ClassReport::fails(property, Counterexample::Sign { set }),
        None => ClassReport::holds(property),
    }
}

pub fn verify_submodular(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().submodular(spec)
}

pub fn verify_supermodular(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().supermodular(spec)
}

pub fn verify_subadditive(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().subadditive(spec)
}

pub fn verify_superadditive(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().superadditive(spec)
}

pub fn verify_doubly_monotone(spec: &ValuationSpec) -> Result<DoublyMonotoneReport, VerifyError> {
    Verifier::default().doubly_monotone(spec)
}

pub fn verify_nonnegative(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().nonnegative(spec)
}

pub fn verify_nonpositive(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().nonpositive(spec)
}

pub fn verify_marginal_witness(spec: &ValuationSpec) -> Result<ClassReport, VerifyError> {
    Verifier::default().marginal_witness(spec)
}

/// How the agents value the grand bundle `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrandBundleSign {
    /// Every `v_i(M) ≥ 0` (includes the all-zero case).
    AllNonneg,
    /// Every `v_i(M) ≤ 0` and at least one is negative.
    AllNonpos,
    /// Lowest-index agents with a positive and with a negative grand bundle.
    Mixed { positive: usize, negative: usize },
}

pub fn grand_bundle_sign(instance: &Instance) -> GrandBundleSign {
    let full = instance.full();
    let values: Vec<Value> = (0..instance.agents()).map(|i| instance.value(i, full)).collect();
    let positive = values.iter().position(Value::is_positive);
    let negative = values.iter().position(Value::is_negative);
    match (positive, negative) {
        (Some(positive), Some(negative)) => GrandBundleSign::Mixed { positive, negative },
        (_, None) => GrandBundleSign::AllNonneg,
        (None, Some(_)) => GrandBundleSign::AllNonpos,
    }
}
