//! Strategies for the greedy step of the marginal-witness loop: pick an item
//! `g` of the pool with `v_p(A_p ∪ {g}) ≥ v_p(A_p)`.

use super::SolveError;
use crate::items::ItemSet;
use crate::valuation::{Counted, Instance, ValuationKind, Valuations, Verifier};
use crate::value::Value;

/// The poor agent's situation at the greedy step.
pub struct WitnessProbe<'a, 'b> {
    pub oracle: &'a Counted<'b, Instance>,
    pub agent: usize,
    pub bundle: ItemSet,
    pub pool: ItemSet,
    pub level: Value,
}

impl WitnessProbe<'_, '_> {
    /// Value after adding `item`, if it does not drop below the current level.
    pub fn try_item(&self, item: usize) -> Option<Value> {
        let value = self.oracle.value(self.agent, self.bundle.with(item));
        (value >= self.level).then_some(value)
    }
}

pub trait WitnessFinder: Send + Sync {
    fn name(&self) -> &'static str;

    /// Returns the chosen item and the agent's new bundle value.
    fn find(&self, probe: &WitnessProbe<'_, '_>) -> Option<(usize, Value)>;
}

/// Lowest-index pool item with a nonnegative marginal.
pub struct SingletonScan;

impl SingletonScan {
    pub const NAME: &'static str = "singleton-scan";
}

impl WitnessFinder for SingletonScan {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn find(&self, probe: &WitnessProbe<'_, '_>) -> Option<(usize, Value)> {
        probe
            .pool
            .iter()
            .find_map(|g| probe.try_item(g).map(|value| (g, value)))
    }
}

/// Scans each agent's goods before the rest of the pool.
///
/// Goods are read off additive item values, or found by exhaustive
/// verification on small universes; agents without a known split fall back
/// to a plain singleton scan.
pub struct GoodsFirst {
    goods: Vec<Option<ItemSet>>,
}

impl GoodsFirst {
    pub const NAME: &'static str = "goods-first";

    pub fn for_instance(instance: &Instance) -> Self {
        let goods = instance
            .specs()
            .iter()
            .map(|spec| match spec.kind() {
                ValuationKind::Additive(values) => ItemSet::from_items(
                    values.len(),
                    (0..values.len()).filter(|&e| !values[e].is_negative()),
                )
                .ok(),
                _ => Verifier::default()
                    .doubly_monotone(spec)
                    .ok()
                    .and_then(|r| r.split.map(|(goods, _)| goods)),
            })
            .collect();
        GoodsFirst { goods }
    }

    pub fn goods(&self, agent: usize) -> Option<ItemSet> {
        self.goods[agent]
    }
}

impl WitnessFinder for GoodsFirst {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn find(&self, probe: &WitnessProbe<'_, '_>) -> Option<(usize, Value)> {
        if let Some(goods) = self.goods[probe.agent] {
            let hit = probe
                .pool
                .intersection(goods)
                .iter()
                .find_map(|g| probe.try_item(g).map(|value| (g, value)));
            if hit.is_some() {
                return hit;
            }
        }
        SingletonScan.find(probe)
    }
}

/// Builds witness finders by name for a given instance.
pub struct WitnessFinderRegistry;

impl WitnessFinderRegistry {
    pub const NAMES: [&'static str; 2] = [SingletonScan::NAME, GoodsFirst::NAME];

    pub fn build(name: &str, instance: &Instance) -> Result<Box<dyn WitnessFinder>, SolveError> {
        match name {
            SingletonScan::NAME => Ok(Box::new(SingletonScan)),
            GoodsFirst::NAME => Ok(Box::new(GoodsFirst::for_instance(instance))),
            other => Err(SolveError::UnknownWitnessFinder(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::ValuationSpec;

    #[test]
    fn goods_come_first() {
        let inst = Instance::identical(1, ValuationSpec::additive_ints(&[0, -1, 2])).unwrap();
        let oracle = Counted::new(&inst);
        let probe = WitnessProbe {
            oracle: &oracle,
            agent: 0,
            bundle: ItemSet::empty(3),
            pool: ItemSet::from_items(3, [1, 2]).unwrap(),
            level: Value::ZERO,
        };
        assert_eq!(SingletonScan.find(&probe), Some((2, Value::from(2))));
        let goods_first = GoodsFirst::for_instance(&inst);
        assert_eq!(goods_first.goods(0), Some(ItemSet::from_items(3, [0, 2]).unwrap()));
        assert_eq!(goods_first.find(&probe), Some((2, Value::from(2))));
    }

    #[test]
    fn unknown_name() {
        let inst = Instance::identical(1, ValuationSpec::additive_ints(&[1])).unwrap();
        assert!(matches!(
            WitnessFinderRegistry::build("psychic", &inst),
            Err(SolveError::UnknownWitnessFinder(_))
        ));
    }
}
