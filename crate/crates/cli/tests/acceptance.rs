//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Every count, bound and time limit is fixed here.

mod support;

use std::path::Path;
use std::time::{Duration, Instant};

use eq1::fairness::check_lower_witness;
use eq1::generate::{
    additive_mixed, coverage_table, doubly_monotone_table, random_graph, rng, subadditive_table, submodular_table,
    table_any, table_general, table_nonneg,
};
use eq1::graph::{partition_cut, partition_density, CUT_CALL_CONSTANT};
use eq1::oracle::{Allocations, DEFAULT_BUDGET};
use eq1::reductions::{nonexistence_instance, restricted_to_instance, PartitionInput};
use eq1::solver::{solve_identical_subadditive, solve_marginal_witness, solve_nonnegative, solve_two_agents};
use eq1::valuation::verify_marginal_witness;
use eq1::{
    check_ef1, check_eq1, exists_eq1_bruteforce, Instance, ItemSet, SolveOptions, SolveResult, ValuationSpec,
    Valuations, Value,
};
use eq1_cli::{cmd_brute, cmd_check, cmd_solve, CheckMode, InstanceFile, SolveArgs};
use rand::Rng;
use support::{dp_bipartition, fixture, literal_ef1, literal_eq1, naive_marginal_witness};
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> SolveOptions {
    SolveOptions::default().with_invariants()
}

fn brute_file(dir: &Path, name: &str, inst: &Instance) -> Result<eq1::ExistenceReport, String> {
    let path = dir.join(name);
    std::fs::write(&path, InstanceFile::from_instance(inst).to_toml()).map_err(|e| e.to_string())?;
    cmd_brute(&path, DEFAULT_BUDGET).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let three = brute_file(dir.path(), "three.toml", &nonexistence_instance(0))?;
    ensure(three.total_checked == 243 && three.eq1_count == 0, || {
        format!("3 agents: {} EQ1 of {}", three.eq1_count, three.total_checked)
    })?;
    let four = brute_file(dir.path(), "four.toml", &nonexistence_instance(1))?;
    ensure(four.total_checked == 1024 && four.eq1_count == 0, || {
        format!(
            "3 agents: 0 EQ1 of 243; 4 agents: {} EQ1 of {} (e.g. {})",
            four.eq1_count,
            four.total_checked,
            four.witness_allocation.as_ref().map(|a| a.to_string()).unwrap_or_default()
        )
    })?;
    Ok("0 EQ1 of 243 and 0 of 1024".into())
}

/// Nondecreasing sequences over `1..=max` of length `len`.
fn multisets(len: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![1u64; len];
    loop {
        out.push(cur.clone());
        let Some(k) = (0..len).rev().find(|&k| cur[k] < max) else {
            return out;
        };
        let next = cur[k] + 1;
        for x in &mut cur[k..] {
            *x = next;
        }
    }
}

fn criterion_2() -> Outcome {
    let mut inputs = Vec::new();
    for m in 5..=7 {
        for values in multisets(m, 5) {
            let input = PartitionInput::new(values).map_err(|e| e.to_string())?;
            if input.check_restricted().is_ok() {
                inputs.push(input);
            }
        }
    }
    inputs.truncate(3000);
    let mut yes = 0;
    for input in &inputs {
        let inst = restricted_to_instance(input).map_err(|e| e.to_string())?;
        let split = dp_bipartition(input.values());
        let exists = exists_eq1_bruteforce(&inst, DEFAULT_BUDGET).map_err(|e| e.to_string())?.exists;
        ensure(exists == split, || format!("{:?}: split {split}, EQ1 {exists}", input.values()))?;
        yes += split as usize;
    }
    Ok(format!("{} inputs agree ({yes} yes)", inputs.len()))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut max_calls = 0;
    for case in 0..1000 {
        let m = case % 7;
        let inst = Instance::new(m, vec![table_general(&mut r, m, 6), table_general(&mut r, m, 6)]).unwrap();
        let result = solve_two_agents(&inst, &opts()).map_err(|e| format!("case {case}: {e}"))?;
        ensure(check_eq1(&inst, &result.allocation).unwrap().is_eq1, || format!("case {case}: not EQ1"))?;
        ensure(literal_eq1(&inst, &result.allocation), || format!("case {case}: reference check disagrees"))?;
        ensure(result.oracle_calls <= 4 * m as u64 + 4, || {
            format!("case {case}: {} calls for m = {m}", result.oracle_calls)
        })?;
        max_calls = max_calls.max(result.oracle_calls);
    }
    Ok(format!("1000 instances, at most {max_calls} oracle calls"))
}

fn certified(inst: &Instance, result: &SolveResult, label: &str) -> Result<(), String> {
    ensure(check_eq1(inst, &result.allocation).unwrap().is_eq1, || format!("{label}: not EQ1"))?;
    ensure(literal_eq1(inst, &result.allocation), || format!("{label}: reference check disagrees"))?;
    let theta = result.witness.as_ref().ok_or_else(|| format!("{label}: no witness"))?.theta;
    check_lower_witness(inst, &result.allocation, theta).map_err(|e| format!("{label}: θ = {theta}: {e}"))?;
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    for case in 0..500 {
        let n = 2 + case % 3;
        let m = 1 + case % 8;
        let inst = additive_mixed(&mut r, n, m, -5, 5).unwrap();
        let result = solve_marginal_witness(&inst, &opts()).map_err(|e| format!("additive {case}: {e}"))?;
        certified(&inst, &result, &format!("additive {case}"))?;
    }
    for case in 0..200 {
        let n = 2 + case % 3;
        let m = 1 + case % 8;
        let inst = if case % 2 == 0 {
            let g = std::sync::Arc::new(random_graph(&mut r, m, 0.4));
            Instance::identical(n, ValuationSpec::cut(g)).unwrap()
        } else {
            Instance::new(m, (0..n).map(|_| coverage_table(&mut r, m)).collect()).unwrap()
        };
        let result = solve_marginal_witness(&inst, &opts()).map_err(|e| format!("submodular {case}: {e}"))?;
        certified(&inst, &result, &format!("submodular {case}"))?;
    }
    Ok("500 doubly monotone + 200 submodular, invariants checked every step".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    for case in 0..300 {
        let n = 1 + case % 3;
        let m = case % 8;
        let inst = Instance::new(m, (0..n).map(|_| table_nonneg(&mut r, m, 6)).collect()).unwrap();
        let result = solve_nonnegative(&inst, &opts()).map_err(|e| format!("case {case}: {e}"))?;
        ensure(check_eq1(&inst, &result.allocation).unwrap().is_eq1, || format!("case {case}: not EQ1"))?;
        ensure(literal_eq1(&inst, &result.allocation), || format!("case {case}: reference check disagrees"))?;
        if m >= n {
            ensure(result.allocation.bundles().iter().all(|b| !b.is_empty()), || {
                format!("case {case}: empty bundle")
            })?;
        }
    }
    Ok("300 instances, rich-agent invariant checked every step".into())
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    for case in 0..200 {
        let n = 1 + case % 3;
        let m = 1 + case % 6;
        let spec = subadditive_table(&mut r, m).map_err(|e| e.to_string())?;
        ensure(!spec.value(ItemSet::full(m)).is_negative(), || format!("case {case}: v(M) < 0"))?;
        let inst = Instance::identical(n, spec).unwrap();
        let result = solve_identical_subadditive(&inst, &opts()).map_err(|e| format!("case {case}: {e}"))?;
        let a = &result.allocation;
        ensure(check_eq1(&inst, a).unwrap().is_eq1 && literal_eq1(&inst, a), || format!("case {case}: not EQ1"))?;
        ensure(check_ef1(&inst, a).unwrap() && literal_ef1(&inst, a), || format!("case {case}: not EF1"))?;
    }
    Ok("200 instances EQ1 and EF1".into())
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut checked = 0u64;
    for case in 0..200 {
        let n = 1 + case % 3;
        let m = case % 6;
        let inst = Instance::new(m, (0..n).map(|_| table_any(&mut r, m, 4)).collect()).unwrap();
        let neg = inst.negated();
        for a in Allocations::new(n, m) {
            let (x, y) = (check_eq1(&inst, &a).unwrap().is_eq1, check_eq1(&neg, &a).unwrap().is_eq1);
            ensure(x == y, || format!("case {case} {a}: {x} vs {y}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} allocations agree"))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    for case in 0..200 {
        let m = case % 6;
        let sub = submodular_table(&mut r, m, 3);
        ensure(verify_marginal_witness(&sub).unwrap().holds && naive_marginal_witness(&sub), || {
            format!("submodular {case} fails")
        })?;
        let dm = doubly_monotone_table(&mut r, m);
        ensure(verify_marginal_witness(&dm).unwrap().holds && naive_marginal_witness(&dm), || {
            format!("doubly monotone {case} fails")
        })?;
    }
    Ok("400 tables have the marginal-witness property".into())
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let v = r.gen_range(1..=12usize);
        let k = r.gen_range(1..=v.min(4));
        let g = random_graph(&mut r, v, 0.4);
        let res = partition_cut(&g, k).map_err(|e| format!("cut {case}: {e}"))?;
        ensure(res.parts.iter().all(|p| !p.is_empty()), || format!("cut {case}: empty part"))?;
        ensure(res.spread <= Value::from(g.max_degree()), || {
            format!("cut {case}: spread {} > Δ = {}", res.spread, g.max_degree())
        })?;
        let cap = CUT_CALL_CONSTANT * (k * v * v) as u64;
        ensure(res.oracle_calls <= cap, || format!("cut {case}: {} calls > {cap}", res.oracle_calls))?;
        worst = worst.max(res.oracle_calls as f64 / (k * v * v) as f64);
    }
    for case in 0..50 {
        let v = r.gen_range(1..=8usize);
        let k = r.gen_range(1..=v.min(3));
        let g = random_graph(&mut r, v, 0.5);
        let res = partition_density(&g, k, DEFAULT_BUDGET).map_err(|e| format!("density {case}: {e}"))?;
        ensure(res.parts.iter().all(|p| !p.is_empty()), || format!("density {case}: empty part"))?;
        ensure(res.spread <= Value::ONE, || format!("density {case}: spread {}", res.spread))?;
    }
    Ok(format!(
        "cut spread ≤ Δ, calls ≤ {CUT_CALL_CONSTANT}·k·|V|² (worst ratio {worst:.2}); density spread ≤ 1"
    ))
}

fn criterion_10() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let mut names = Vec::new();
    for name in [
        "neg_two_agent_general.toml",
        "neg_supermodular.toml",
        "neg_doubly_monotone.toml",
        "neg_identical_superadditive.toml",
    ] {
        let path = fixture(name);
        let inst = InstanceFile::load(&path).unwrap().to_instance().unwrap();
        ensure((0..inst.agents()).all(|i| inst.value(i, inst.full()).is_negative()), || {
            format!("{name}: grand bundle not negative for every agent")
        })?;
        let solution = cmd_solve(&path, &SolveArgs::default()).map_err(|e| format!("{name}: {e}"))?;
        ensure(solution.solver.starts_with("negated "), || format!("{name}: solved by {}", solution.solver))?;
        let sol_path = dir.path().join("solution.toml");
        std::fs::write(&sol_path, solution.to_toml()).unwrap();
        let check = cmd_check(&path, &sol_path, CheckMode::Eq1).map_err(|e| e.to_string())?;
        ensure(check.pass, || format!("{name}: {}", check.text))?;
        names.push(solution.solver);
    }
    Ok(names.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("non-existence reproduction", criterion_1, 1),
        ("reduction characterization", criterion_2, 60),
        ("two-agent completeness", criterion_3, 10),
        ("marginal-witness solver", criterion_4, 30),
        ("nonnegative solver", criterion_5, 60),
        ("identical subadditive", criterion_6, 60),
        ("negation transfer", criterion_7, 30),
        ("marginal-witness property", criterion_8, 30),
        ("graph bounds", criterion_9, 60),
        ("dispatch via negation", criterion_10, 5),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}, but took {elapsed:.2?} (limit {limit}s)"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
