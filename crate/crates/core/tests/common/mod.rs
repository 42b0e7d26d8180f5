#![allow(dead_code)]

use adcminer_core::approx::ApproxFunction;
use adcminer_core::{Dataset, EvidenceSet, PredicateSet, PredicateSpace};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TABLE1_HEADER: [&str; 5] = ["Name", "State", "Zip", "Income", "Tax"];

pub const TABLE1_ROWS: [[&str; 5]; 15] = [
    ["Alice", "NY", "11803", "28000", "2400"],
    ["Mark", "NY", "10102", "42000", "4700"],
    ["Bob", "NY", "13914", "93000", "11800"],
    ["Mary", "NY", "10437", "58000", "6700"],
    ["Alice", "NY", "10437", "26000", "2100"],
    ["Julia", "WA", "98112", "27000", "1400"],
    ["Jimmy", "WA", "98112", "24000", "1600"],
    ["Sam", "WA", "98112", "49000", "6800"],
    ["Jeff", "WA", "98112", "56000", "7800"],
    ["Gary", "WA", "98112", "50000", "7200"],
    ["Ron", "WA", "98112", "58000", "8000"],
    ["Jennifer", "WA", "98112", "61000", "8500"],
    ["Adam", "WA", "98112", "20000", "1000"],
    ["Tim", "IL", "62078", "39000", "5000"],
    ["Sarah", "IL", "98112", "54000", "5000"],
];

pub fn dataset(header: &[&str], rows: &[Vec<String>]) -> Dataset {
    Dataset::from_records(header.iter().map(|s| s.to_string()).collect(), rows, "").unwrap()
}

pub fn table1() -> Dataset {
    let rows: Vec<Vec<String>> = TABLE1_ROWS
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    dataset(&TABLE1_HEADER, &rows)
}

/// Hitting set of a DC given as `(left, op, right)` cross-tuple predicates.
pub fn dc_hitting_set(ps: &PredicateSpace, dc: &[(&str, &str, &str)]) -> PredicateSet {
    use adcminer_core::{Operator, Pattern};
    let ids = dc.iter().map(|&(l, op, r)| {
        let op = Operator::from_symbol(op).unwrap();
        let id = ps
            .find_named(Pattern::CrossTuple, l, op, r)
            .unwrap_or_else(|| panic!("t.{l} {op} t'.{r} not in the space"));
        ps.complement(id)
    });
    PredicateSet::from_ids(ps.len(), ids)
}

/// φ₁ = ¬(t.State = t'.State ∧ t.Income > t'.Income ∧ t.Tax <= t'.Tax)
pub const PHI1: [(&str, &str, &str); 3] = [
    ("State", "=", "State"),
    ("Income", ">", "Income"),
    ("Tax", "<=", "Tax"),
];

/// φ₂ = ¬(t.Zip = t'.Zip ∧ t.State != t'.State)
pub const PHI2: [(&str, &str, &str); 2] = [("Zip", "=", "Zip"), ("State", "!=", "State")];

/// Every subset of `0..universe`, as bitmasks over at most 20 elements.
pub fn brute_force_mhs(universe: usize, family: &[PredicateSet]) -> Vec<PredicateSet> {
    assert!(universe <= 20);
    let masks: Vec<u32> = family
        .iter()
        .map(|f| f.iter().fold(0u32, |m, e| m | 1 << e))
        .collect();
    let hits = |s: u32| masks.iter().all(|&f| f & s != 0);
    let mut out = Vec::new();
    for s in 0u32..1 << universe {
        if hits(s) && (0..universe).all(|e| s & 1 << e == 0 || !hits(s & !(1 << e))) {
            out.push(PredicateSet::from_ids(
                universe,
                (0..universe).filter(|&e| s & 1 << e != 0),
            ));
        }
    }
    out
}

/// All hitting sets with at most one predicate per redundancy group.
pub fn nontrivial_subsets(ps: &PredicateSpace) -> Vec<PredicateSet> {
    let mut out = vec![PredicateSet::new(ps.len())];
    for g in ps.groups() {
        let mut next = Vec::with_capacity(out.len() * (g.len() + 1));
        for s in &out {
            next.push(s.clone());
            for id in g.ids() {
                let mut t = s.clone();
                t.insert(id);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Number of nontrivial hitting sets, saturating.
pub fn nontrivial_count(ps: &PredicateSpace) -> u64 {
    ps.groups()
        .iter()
        .fold(1u64, |acc, g| acc.saturating_mul(g.len() as u64 + 1))
}

/// Nontrivial `h` accepted by `f` with no accepted proper subset.
pub fn minimal_adc_oracle(
    e: &EvidenceSet,
    ps: &PredicateSpace,
    f: &dyn ApproxFunction,
    epsilon: f64,
) -> Vec<PredicateSet> {
    let accepted: Vec<PredicateSet> = nontrivial_subsets(ps)
        .into_iter()
        .filter(|h| f.accepts(&e.uncovered(h), epsilon))
        .collect();
    let mut out: Vec<PredicateSet> = accepted
        .iter()
        .filter(|h| !accepted.iter().any(|g| g != *h && g.is_subset(h)))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Random toy relation: 2 to 8 rows, 1 to 4 columns over tiny domains,
/// occasionally with nulls.
pub fn random_toy(rng: &mut ChaCha8Rng) -> Dataset {
    let rows = rng.random_range(2..=8);
    let cols = rng.random_range(1..=4);
    let header: Vec<String> = (0..cols).map(|c| format!("c{c}")).collect();
    let kinds: Vec<bool> = (0..cols).map(|_| rng.random_bool(0.5)).collect();
    let with_nulls = rng.random_bool(0.2);
    let records: Vec<Vec<String>> = (0..rows)
        .map(|_| {
            kinds
                .iter()
                .map(|&numeric| {
                    if with_nulls && rng.random_bool(0.1) {
                        String::new()
                    } else if numeric {
                        rng.random_range(0..4).to_string()
                    } else {
                        ["x", "y", "z"].choose(rng).unwrap().to_string()
                    }
                })
                .collect()
        })
        .collect();
    Dataset::from_records(header, &records, "").unwrap()
}

/// Toy datasets with small enough predicate spaces for the subset oracle.
pub fn oracle_toys(count: usize, seed: u64) -> Vec<(Dataset, PredicateSpace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = random_toy(&mut rng);
        let ps = PredicateSpace::generate(&d, 1.0).unwrap();
        if nontrivial_count(&ps) <= 20_000 {
            out.push((d, ps));
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
