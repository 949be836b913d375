//! Set-function valuations: concrete families, the negation wrapper, the
//! [`Instance`] container and the oracle interface solvers consume.

mod classes;
mod verify;

pub use classes::{Class, ClassSet};
pub use verify::{
    grand_bundle_sign, verify_doubly_monotone, verify_marginal_witness, verify_nonnegative,
    verify_nonpositive, verify_subadditive, verify_submodular, verify_superadditive,
    verify_supermodular, ClassReport, Counterexample, DoublyMonotoneReport, GrandBundleSign,
    Property, VerifyError, Verifier, DEFAULT_VERIFY_LIMIT,
};

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{cut_value, density_value, Graph};
use crate::items::{ItemSet, MAX_ITEMS};
use crate::value::Value;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValuationError {
    #[error("table has {0} entries, which is not a power of two")]
    TableLength(usize),
    #[error("table over {0} items is too large to store")]
    TableTooLarge(usize),
    #[error("set {set} is outside the universe of {m} items")]
    OutOfRange { set: ItemSet, m: usize },
    #[error("instance needs at least one agent")]
    NoAgents,
    #[error("agent {agent} is defined over {found} items but the instance has {expected}")]
    UniverseMismatch {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("{0} items exceed the supported maximum of {MAX_ITEMS}")]
    TooManyItems(usize),
    #[error("hardness valuation needs positive weights")]
    NonPositiveWeight,
}

/// Largest universe for which a full table is accepted.
pub const MAX_TABLE_ITEMS: usize = 24;

/// Which agents of the three-agent hardness construction a valuation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HardnessRole {
    /// `v(∅) = 0`, otherwise `2·Σ_{j∈S} b_j − T`.
    FirstTwo,
    /// `v(S) = |S|`.
    Third,
}

impl HardnessRole {
    pub fn name(&self) -> &'static str {
        match self {
            HardnessRole::FirstTwo => "first_two",
            HardnessRole::Third => "third",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "first_two" => Some(HardnessRole::FirstTwo),
            "third" => Some(HardnessRole::Third),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValuationKind {
    Additive(Vec<Value>),
    /// `2^m` values indexed by item-set bitmask.
    Table(Vec<Value>),
    Cut(Arc<Graph>),
    Density(Arc<Graph>),
    Hardness {
        weights: Vec<u64>,
        role: HardnessRole,
    },
    Negated(Box<ValuationSpec>),
}

/// One agent's set function together with the classes it is declared to belong to.
///
/// Declared classes are trusted by solver dispatch; use the verifiers to
/// confirm them on small universes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValuationSpec {
    kind: ValuationKind,
    classes: ClassSet,
}

impl ValuationSpec {
    pub fn new(kind: ValuationKind, classes: ClassSet) -> Result<Self, ValuationError> {
        match &kind {
            ValuationKind::Table(values) => {
                let len = values.len();
                if !len.is_power_of_two() {
                    return Err(ValuationError::TableLength(len));
                }
                let m = len.trailing_zeros() as usize;
                if m > MAX_TABLE_ITEMS {
                    return Err(ValuationError::TableTooLarge(m));
                }
            }
            ValuationKind::Hardness { weights, .. } if weights.contains(&0) => {
                return Err(ValuationError::NonPositiveWeight);
            }
            _ => {}
        }
        if Self::universe_of(&kind) > MAX_ITEMS {
            return Err(ValuationError::TooManyItems(Self::universe_of(&kind)));
        }
        Ok(ValuationSpec { kind, classes })
    }

    pub fn additive(values: Vec<Value>) -> Self {
        Self::new(ValuationKind::Additive(values), ClassSet::of(&[Class::Additive]))
            .expect("additive valuation")
    }

    pub fn additive_ints(values: &[i64]) -> Self {
        Self::additive(values.iter().map(|&v| Value::from(v)).collect())
    }

    pub fn table(values: Vec<Value>, classes: ClassSet) -> Result<Self, ValuationError> {
        Self::new(ValuationKind::Table(values), classes)
    }

    /// Tabulates `f` over every subset of `0..m`.
    pub fn tabulate(m: usize, classes: ClassSet, f: impl Fn(ItemSet) -> Value) -> Self {
        let values = ItemSet::full(m).subsets().map(f).collect();
        Self::table(values, classes).expect("tabulated valuation")
    }

    pub fn cut(graph: Arc<Graph>) -> Self {
        Self::new(
            ValuationKind::Cut(graph),
            ClassSet::of(&[Class::Nonnegative, Class::Submodular]),
        )
        .expect("cut valuation")
    }

    pub fn density(graph: Arc<Graph>) -> Self {
        Self::new(ValuationKind::Density(graph), ClassSet::of(&[Class::Nonnegative]))
            .expect("density valuation")
    }

    pub fn hardness(weights: Vec<u64>, role: HardnessRole) -> Result<Self, ValuationError> {
        let classes = match role {
            HardnessRole::FirstTwo => ClassSet::of(&[Class::Supermodular]),
            HardnessRole::Third => ClassSet::of(&[Class::Additive]),
        };
        Self::new(ValuationKind::Hardness { weights, role }, classes)
    }

    /// The pointwise negation `S ↦ −v(S)`, with declared classes mirrored.
    ///
    /// Negating a negation unwraps it.
    pub fn negate(&self) -> ValuationSpec {
        match &self.kind {
            ValuationKind::Negated(inner) => (**inner).clone(),
            _ => ValuationSpec {
                classes: self.classes.mirrored(),
                kind: ValuationKind::Negated(Box::new(self.clone())),
            },
        }
    }

    pub fn with_classes(mut self, classes: ClassSet) -> Self {
        self.classes = classes;
        self
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn classes(&self) -> ClassSet {
        self.classes
    }

    /// True when the declared classes (closed under implication) include `class`.
    pub fn declares(&self, class: Class) -> bool {
        self.classes.implies(class)
    }

    /// Number of items the function is defined over.
    pub fn universe(&self) -> usize {
        Self::universe_of(&self.kind)
    }

    fn universe_of(kind: &ValuationKind) -> usize {
        match kind {
            ValuationKind::Additive(values) => values.len(),
            ValuationKind::Table(values) => values.len().trailing_zeros() as usize,
            ValuationKind::Cut(g) | ValuationKind::Density(g) => g.vertex_count(),
            ValuationKind::Hardness { weights, .. } => weights.len(),
            ValuationKind::Negated(inner) => inner.universe(),
        }
    }

    /// Checked evaluation.
    pub fn evaluate(&self, set: ItemSet) -> Result<Value, ValuationError> {
        let m = self.universe();
        if set.bits() >> m != 0 {
            return Err(ValuationError::OutOfRange { set, m });
        }
        Ok(self.value(set))
    }

    /// Evaluation without the universe check; `set` must lie within `0..universe()`.
    pub fn value(&self, set: ItemSet) -> Value {
        match &self.kind {
            ValuationKind::Additive(values) => set.iter().map(|e| values[e]).sum(),
            ValuationKind::Table(values) => values[set.bits() as usize],
            ValuationKind::Cut(g) => cut_value(g, set),
            ValuationKind::Density(g) => density_value(g, set),
            ValuationKind::Hardness { weights, role } => match role {
                HardnessRole::Third => Value::from(set.len()),
                HardnessRole::FirstTwo if set.is_empty() => Value::ZERO,
                HardnessRole::FirstTwo => {
                    let total: u64 = weights.iter().sum();
                    let inside: u64 = set.iter().map(|e| weights[e]).sum();
                    Value::from(2 * inside as i64 - total as i64)
                }
            },
            ValuationKind::Negated(inner) => -inner.value(set),
        }
    }
}

impl fmt::Debug for ValuationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            ValuationKind::Additive(v) => format!("Additive{v:?}"),
            ValuationKind::Table(v) => format!("Table[{} entries]", v.len()),
            ValuationKind::Cut(g) => format!("Cut({g:?})"),
            ValuationKind::Density(g) => format!("Density({g:?})"),
            ValuationKind::Hardness { weights, role } => {
                format!("Hardness({weights:?}, {})", role.name())
            }
            ValuationKind::Negated(inner) => format!("Negated({inner:?})"),
        };
        write!(f, "{kind} {}", self.classes)
    }
}

/// Read-only oracle access to `n` valuations over a common item universe.
pub trait Valuations {
    fn agents(&self) -> usize;
    fn items(&self) -> usize;
    fn value(&self, agent: usize, set: ItemSet) -> Value;
}

/// `n` agents' valuations over `m` items.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    m: usize,
    specs: Vec<ValuationSpec>,
}

impl Instance {
    pub fn new(m: usize, specs: Vec<ValuationSpec>) -> Result<Self, ValuationError> {
        if specs.is_empty() {
            return Err(ValuationError::NoAgents);
        }
        if m > MAX_ITEMS {
            return Err(ValuationError::TooManyItems(m));
        }
        for (agent, spec) in specs.iter().enumerate() {
            if spec.universe() != m {
                return Err(ValuationError::UniverseMismatch {
                    agent,
                    expected: m,
                    found: spec.universe(),
                });
            }
        }
        Ok(Instance { m, specs })
    }

    /// `n` copies of one valuation.
    pub fn identical(n: usize, spec: ValuationSpec) -> Result<Self, ValuationError> {
        Instance::new(spec.universe(), vec![spec; n])
    }

    pub fn specs(&self) -> &[ValuationSpec] {
        &self.specs
    }

    pub fn spec(&self, agent: usize) -> &ValuationSpec {
        &self.specs[agent]
    }

    /// Every agent's valuation negated; allocations keep their meaning.
    pub fn negated(&self) -> Instance {
        Instance {
            m: self.m,
            specs: self.specs.iter().map(ValuationSpec::negate).collect(),
        }
    }

    pub fn full(&self) -> ItemSet {
        ItemSet::full(self.m)
    }

    /// All agents carry structurally equal valuations.
    pub fn is_identical(&self) -> bool {
        self.specs.windows(2).all(|w| w[0].kind == w[1].kind)
    }

    /// Every agent declares `class`.
    pub fn all_declare(&self, class: Class) -> bool {
        self.specs.iter().all(|s| s.declares(class))
    }

    /// Agents reordered so that new agent `k` is old agent `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Instance {
        Instance {
            m: self.m,
            specs: perm.iter().map(|&k| self.specs[k].clone()).collect(),
        }
    }
}

impl Valuations for Instance {
    fn agents(&self) -> usize {
        self.specs.len()
    }

    fn items(&self) -> usize {
        self.m
    }

    fn value(&self, agent: usize, set: ItemSet) -> Value {
        debug_assert_eq!(set.bits() >> self.m, 0, "set outside universe");
        self.specs[agent].value(set)
    }
}

/// Wraps an oracle and counts every evaluation made through it.
pub struct Counted<'a, V: Valuations + ?Sized> {
    inner: &'a V,
    calls: Cell<u64>,
}

impl<'a, V: Valuations + ?Sized> Counted<'a, V> {
    pub fn new(inner: &'a V) -> Self {
        Counted {
            inner,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn inner(&self) -> &'a V {
        self.inner
    }
}

impl<V: Valuations + ?Sized> Valuations for Counted<'_, V> {
    fn agents(&self) -> usize {
        self.inner.agents()
    }

    fn items(&self) -> usize {
        self.inner.items()
    }

    fn value(&self, agent: usize, set: ItemSet) -> Value {
        self.calls.set(self.calls.get() + 1);
        self.inner.value(agent, set)
    }
}
