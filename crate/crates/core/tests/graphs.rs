use std::sync::Arc;

use eq1::generate::{random_graph, rng};
use eq1::graph::{partition_cut, partition_density, Graph, PartitionMode, CUT_CALL_CONSTANT};
use eq1::{ItemSet, ValuationSpec, Value, DEFAULT_BUDGET};
use rand::Rng;

fn members(set: ItemSet, m: usize) -> Vec<usize> {
    (0..m).filter(|&v| set.contains(v)).collect()
}

/// Cut size by scanning the edge list.
fn naive_cut(g: &Graph, set: ItemSet) -> Value {
    Value::from(g.edges().iter().filter(|(u, v)| set.contains(*u) != set.contains(*v)).count())
}

fn naive_density(g: &Graph, set: ItemSet) -> Value {
    let inside = g.edges().iter().filter(|(u, v)| set.contains(*u) && set.contains(*v)).count();
    if set.is_empty() {
        Value::ZERO
    } else {
        Value::new(inside as i64, set.len() as i64)
    }
}

#[test]
fn cut_and_density_examples() {
    let path = Arc::new(Graph::path(4));
    let cut = ValuationSpec::cut(path.clone());
    let density = ValuationSpec::density(path.clone());
    let s = |items: &[usize]| ItemSet::from_items(4, items.iter().copied()).unwrap();
    assert_eq!(cut.value(s(&[1])), Value::from(2));
    assert_eq!(cut.value(s(&[0, 1])), Value::from(1));
    assert_eq!(cut.value(ItemSet::full(4)), Value::ZERO);
    assert_eq!(density.value(s(&[0, 1, 2])), Value::new(2, 3));
    assert_eq!(density.value(ItemSet::empty(4)), Value::ZERO);
    let k4 = ValuationSpec::density(Arc::new(Graph::complete(4)));
    assert_eq!(k4.value(ItemSet::full(4)), Value::new(3, 2));
}

#[test]
fn valuations_match_edge_scan() {
    let mut r = rng(41);
    for _ in 0..40 {
        let v = r.gen_range(1..=8);
        let g = Arc::new(random_graph(&mut r, v, 0.4));
        let cut = ValuationSpec::cut(g.clone());
        let density = ValuationSpec::density(g.clone());
        for bits in 0..1u64 << v {
            let set = ItemSet::from_bits(v, bits).unwrap();
            assert_eq!(cut.value(set), naive_cut(&g, set));
            assert_eq!(density.value(set), naive_density(&g, set));
        }
    }
}

#[test]
fn marginal_bounds() {
    let mut r = rng(42);
    for _ in 0..30 {
        let v = r.gen_range(1..=8);
        let g = random_graph(&mut r, v, 0.5);
        let delta = Value::from(g.max_degree());
        for bits in 0..1u64 << v {
            let set = ItemSet::from_bits(v, bits).unwrap();
            for x in (0..v).filter(|x| !set.contains(*x)) {
                let plus = set.with(x);
                assert!((naive_cut(&g, plus) - naive_cut(&g, set)).abs() <= delta);
                assert!((naive_density(&g, plus) - naive_density(&g, set)).abs() <= Value::ONE);
            }
        }
    }
}

#[test]
fn edge_list_round_trip() {
    let mut r = rng(43);
    for _ in 0..20 {
        let v = r.gen_range(0..=10);
        let g = random_graph(&mut r, v, 0.3);
        let back: Graph = g.to_edge_list().parse().unwrap();
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert_eq!(back.edges(), g.edges());
    }
    let g: Graph = "c triangle\np 3 3\n0 1\n1 2\n# closing edge\n0 2\n".parse().unwrap();
    assert_eq!(g.max_degree(), 2);
    assert!("p 3 2\n0 1\n".parse::<Graph>().is_err());
    assert!("0 1\n".parse::<Graph>().is_err());
    assert!("p 2 1\n0 0\n".parse::<Graph>().is_err());
}

#[test]
fn cut_partitions_within_max_degree() {
    let mut r = rng(44);
    for _ in 0..100 {
        let v = r.gen_range(1..=12);
        let k = r.gen_range(1..=v.min(4));
        let p = r.gen_range(0.1..0.7);
        let g = random_graph(&mut r, v, p);
        let result = partition_cut(&g, k).unwrap();
        assert_eq!(result.mode, PartitionMode::Cut);
        assert_eq!(result.parts.len(), k);
        assert!(result.parts.iter().all(|p| !p.is_empty()));
        let covered: usize = result.parts.iter().map(|p| p.len()).sum();
        assert_eq!(covered, v);
        let values: Vec<Value> = result.parts.iter().map(|p| naive_cut(&g, *p)).collect();
        assert_eq!(values, result.values);
        let spread = *values.iter().max().unwrap() - *values.iter().min().unwrap();
        assert!(spread <= Value::from(g.max_degree()), "{result}");
        assert!(result.oracle_calls <= CUT_CALL_CONSTANT * (k * v * v) as u64);
    }
}

#[test]
fn density_partitions_within_one() {
    let mut r = rng(45);
    for _ in 0..50 {
        let v = r.gen_range(1..=8);
        let k = r.gen_range(1..=v.min(3));
        let p = r.gen_range(0.2..0.9);
        let g = random_graph(&mut r, v, p);
        let result = partition_density(&g, k, DEFAULT_BUDGET).unwrap();
        assert!(result.parts.iter().all(|p| !p.is_empty()));
        let values: Vec<Value> = result.parts.iter().map(|p| naive_density(&g, *p)).collect();
        let spread = *values.iter().max().unwrap() - *values.iter().min().unwrap();
        assert!(spread <= Value::ONE, "{result}");
        let mut seen: Vec<usize> = result.parts.iter().flat_map(|p| members(*p, v)).collect();
        seen.sort();
        assert_eq!(seen, (0..v).collect::<Vec<_>>());
    }
}
