//! Evidence sets: the bag of `Sat(t, t')` over all ordered pairs of distinct
//! tuples, stored once per distinct set together with its multiplicity.
//!
//! The pair scan is split into row ranges so callers can fan the work out
//! over threads: [`scan_rows`] produces a [`PartialEvidence`] for the ordered
//! pairs whose first tuple falls in the range, and [`merge`] combines the
//! partials into a canonical (sorted) [`EvidenceSet`] and [`Vios`] index. The
//! result does not depend on how rows were partitioned.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use hashbrown::HashMap;

use crate::bitset::{word_count, PredicateSet};
use crate::dataset::{ColumnData, Dataset, NULL_CODE};
use crate::error::{Error, Result};
use crate::predicate::{Pattern, PredicateSpace};

// Per-group bit patterns, indexed by offset in `Operator::ALL`
// (=, !=, >, <, >=, <=).
const NUM_LESS: u64 = 0b101010;
const NUM_EQUAL: u64 = 0b110001;
const NUM_GREATER: u64 = 0b010110;
const TEXT_EQUAL: u64 = 0b01;
const TEXT_DIFFER: u64 = 0b10;

enum Operands<'a> {
    Numeric(&'a [f64], &'a [f64]),
    Text(&'a [u32], &'a [u32]),
}

struct GroupEval<'a> {
    operands: Operands<'a>,
    same_tuple: bool,
    word: usize,
    shift: u32,
    width: u32,
}

/// Compiled evaluator for `Sat(t, t')` over one dataset and predicate space.
pub struct SatPlan<'a> {
    groups: Vec<GroupEval<'a>>,
    predicate_count: usize,
    words: usize,
}

impl<'a> SatPlan<'a> {
    pub fn new(d: &'a Dataset, ps: &PredicateSpace) -> Self {
        let groups = ps
            .groups()
            .iter()
            .map(|g| {
                let operands = match (d.data(g.left), d.data(g.right)) {
                    (ColumnData::Numeric(l), ColumnData::Numeric(r)) => Operands::Numeric(l, r),
                    (ColumnData::Text(l), ColumnData::Text(r)) => Operands::Text(l, r),
                    _ => unreachable!("predicate over mixed column types"),
                };
                GroupEval {
                    operands,
                    same_tuple: g.pattern == Pattern::SameTuple,
                    word: g.first / 64,
                    shift: (g.first % 64) as u32,
                    width: g.len() as u32,
                }
            })
            .collect();
        SatPlan {
            groups,
            predicate_count: ps.len(),
            words: word_count(ps.len()),
        }
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Writes the words of `Sat(t, t2)` into `out` (cleared first).
    #[inline]
    pub fn eval_into(&self, t: usize, t2: usize, out: &mut [u64]) {
        out.fill(0);
        for g in &self.groups {
            let r = if g.same_tuple { t } else { t2 };
            let mask = match g.operands {
                Operands::Numeric(lhs, rhs) => {
                    let (a, b) = (lhs[t], rhs[r]);
                    if a.is_nan() || b.is_nan() {
                        continue;
                    }
                    match a.total_cmp(&b) {
                        core::cmp::Ordering::Less => NUM_LESS,
                        core::cmp::Ordering::Equal => NUM_EQUAL,
                        core::cmp::Ordering::Greater => NUM_GREATER,
                    }
                }
                Operands::Text(lhs, rhs) => {
                    let (a, b) = (lhs[t], rhs[r]);
                    if a == NULL_CODE || b == NULL_CODE {
                        continue;
                    }
                    if a == b {
                        TEXT_EQUAL
                    } else {
                        TEXT_DIFFER
                    }
                }
            };
            out[g.word] |= mask << g.shift;
            if g.shift + g.width > 64 {
                out[g.word + 1] |= mask >> (64 - g.shift);
            }
        }
    }

    pub fn eval(&self, t: usize, t2: usize) -> PredicateSet {
        let mut words = vec![0; self.words];
        self.eval_into(t, t2, &mut words);
        PredicateSet::from_words(self.predicate_count, &words)
    }
}

/// `Sat(t, t2)`: the predicates satisfied by the ordered pair `<t, t2>`.
pub fn sat(d: &Dataset, ps: &PredicateSpace, t: usize, t2: usize) -> PredicateSet {
    SatPlan::new(d, ps).eval(t, t2)
}

/// Evidence gathered from the ordered pairs whose first tuple lies in a row
/// range. Set ids are local to the partial.
#[derive(Debug, Clone, Default)]
pub struct PartialEvidence {
    keys: Vec<Box<[u64]>>,
    multiplicity: Vec<u64>,
    /// `(tuple, local set id, incidence)`.
    incidence: Vec<(u32, u32, u32)>,
}

/// Scans every ordered pair `<t, t'>` with `t` in `rows` and `t' != t`.
///
/// For each `t` the reverse pairs `<t', t>` are evaluated as well so that the
/// full incidence of `t` is known locally; they do not add to multiplicities.
pub fn scan_rows(plan: &SatPlan<'_>, n: usize, rows: Range<usize>) -> PartialEvidence {
    let mut ids: HashMap<Box<[u64]>, u32> = HashMap::new();
    let mut part = PartialEvidence::default();
    let mut scratch = vec![0u64; plan.words()];
    let mut row_counts: Vec<u32> = Vec::new();
    let mut touched: Vec<u32> = Vec::new();

    let mut lookup = |words: &[u64], part: &mut PartialEvidence, row_counts: &mut Vec<u32>| -> u32 {
        if let Some(&id) = ids.get(words) {
            return id;
        }
        let id = part.keys.len() as u32;
        let key: Box<[u64]> = words.into();
        part.keys.push(key.clone());
        part.multiplicity.push(0);
        row_counts.push(0);
        ids.insert(key, id);
        id
    };

    for t in rows {
        for t2 in 0..n {
            if t2 == t {
                continue;
            }
            plan.eval_into(t, t2, &mut scratch);
            let id = lookup(&scratch, &mut part, &mut row_counts) as usize;
            part.multiplicity[id] += 1;
            if row_counts[id] == 0 {
                touched.push(id as u32);
            }
            row_counts[id] += 1;

            plan.eval_into(t2, t, &mut scratch);
            let id = lookup(&scratch, &mut part, &mut row_counts) as usize;
            if row_counts[id] == 0 {
                touched.push(id as u32);
            }
            row_counts[id] += 1;
        }
        for &id in &touched {
            part.incidence
                .push((t as u32, id, core::mem::take(&mut row_counts[id as usize])));
        }
        touched.clear();
    }
    part
}

/// Combines partials covering disjoint row ranges into canonical form:
/// distinct sets sorted, incidence lists sorted by tuple id.
pub fn merge(
    parts: Vec<PartialEvidence>,
    tuple_count: usize,
    predicate_count: usize,
) -> (EvidenceSet, Vios) {
    let mut all: Vec<&[u64]> = parts
        .iter()
        .flat_map(|p| p.keys.iter().map(|k| &k[..]))
        .collect();
    all.sort_unstable();
    all.dedup();
    let index: HashMap<&[u64], usize> = all.iter().enumerate().map(|(i, k)| (*k, i)).collect();

    let mut multiplicity = vec![0u64; all.len()];
    let mut per_set: Vec<Vec<(u32, u32)>> = vec![Vec::new(); all.len()];
    for p in &parts {
        let global: Vec<usize> = p.keys.iter().map(|k| index[&k[..]]).collect();
        for (local, &m) in p.multiplicity.iter().enumerate() {
            multiplicity[global[local]] += m;
        }
        for &(t, local, count) in &p.incidence {
            per_set[global[local as usize]].push((t, count));
        }
    }
    for list in &mut per_set {
        list.sort_unstable();
    }
    let sets = all
        .iter()
        .map(|k| PredicateSet::from_words(predicate_count, k))
        .collect();
    let total_pairs = multiplicity.iter().sum();
    (
        EvidenceSet {
            predicate_count,
            sets,
            multiplicity,
            tuple_count,
            total_pairs,
        },
        Vios { per_set },
    )
}

/// Sequential evidence construction over the whole dataset.
pub fn build_evidence(d: &Dataset, ps: &PredicateSpace) -> Result<(EvidenceSet, Vios)> {
    let n = d.row_count();
    if n < 2 {
        return Err(Error::InsufficientTuples(n));
    }
    let plan = SatPlan::new(d, ps);
    let part = scan_rows(&plan, n, 0..n);
    Ok(merge(vec![part], n, ps.len()))
}

/// `Evi(D)` with bag semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceSet {
    predicate_count: usize,
    sets: Vec<PredicateSet>,
    multiplicity: Vec<u64>,
    tuple_count: usize,
    total_pairs: u64,
}

impl EvidenceSet {
    /// Reassembles an evidence set from stored parts (e.g. a cache file).
    pub fn from_parts(
        predicate_count: usize,
        tuple_count: usize,
        sets: Vec<PredicateSet>,
        multiplicity: Vec<u64>,
    ) -> Result<Self> {
        if sets.len() != multiplicity.len() {
            return Err(Error::InvalidParameter {
                name: "evidence set",
                reason: "set and multiplicity counts differ",
            });
        }
        if multiplicity.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParameter {
                name: "evidence set",
                reason: "zero multiplicity",
            });
        }
        let total_pairs = multiplicity.iter().sum();
        Ok(EvidenceSet {
            predicate_count,
            sets,
            multiplicity,
            tuple_count,
            total_pairs,
        })
    }

    /// Number of distinct sets.
    #[inline]
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn predicate_count(&self) -> usize {
        self.predicate_count
    }

    pub fn tuple_count(&self) -> usize {
        self.tuple_count
    }

    #[inline]
    pub fn set(&self, i: usize) -> &PredicateSet {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[PredicateSet] {
        &self.sets
    }

    #[inline]
    pub fn multiplicity(&self, i: usize) -> u64 {
        self.multiplicity[i]
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicity
    }

    /// Sum of multiplicities.
    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    /// `|D|·(|D|-1)`: ordered pairs of distinct tuples.
    pub fn pair_universe(&self) -> u64 {
        let n = self.tuple_count as u64;
        n * n.saturating_sub(1)
    }

    /// Indices of the distinct sets not hit by `h`.
    pub fn uncovered(&self, h: &PredicateSet) -> Vec<usize> {
        (0..self.sets.len())
            .filter(|&i| !self.sets[i].intersects(h))
            .collect()
    }

    /// Pair weight of the sets not hit by `h`.
    pub fn uncovered_weight(&self, h: &PredicateSet) -> u64 {
        self.sets
            .iter()
            .zip(&self.multiplicity)
            .filter(|(s, _)| !s.intersects(h))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Total multiplicity of the given set indices.
    #[inline]
    pub fn weight_of(&self, indices: &[usize]) -> u64 {
        indices.iter().map(|&i| self.multiplicity[i]).sum()
    }
}

/// Per distinct evidence set, the tuples involved in its pairs and how often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vios {
    per_set: Vec<Vec<(u32, u32)>>,
}

impl Vios {
    /// `per_set[s]` lists `(tuple, incidence)`; lists are sorted here.
    pub fn from_parts(mut per_set: Vec<Vec<(u32, u32)>>) -> Self {
        for list in &mut per_set {
            list.sort_unstable();
        }
        Vios { per_set }
    }

    pub fn set_count(&self) -> usize {
        self.per_set.len()
    }

    /// `(tuple, incidence)` pairs for set `s`, sorted by tuple.
    #[inline]
    pub fn entries(&self, s: usize) -> &[(u32, u32)] {
        &self.per_set[s]
    }

    pub fn incidence(&self, s: usize, tuple: usize) -> u32 {
        let list = &self.per_set[s];
        list.binary_search_by_key(&(tuple as u32), |&(t, _)| t)
            .map(|i| list[i].1)
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::Operator;
    use alloc::string::{String, ToString};

    fn dataset(names: &[&str], rows: &[&[&str]]) -> Dataset {
        let names = names.iter().map(|s| s.to_string()).collect();
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Dataset::from_records(names, &rows, "NULL").unwrap()
    }

    #[test]
    fn identical_rows_give_one_set_with_multiplicity_two() {
        let d = dataset(&["A", "B"], &[&["1", "x"], &["1", "x"]]);
        let ps = PredicateSpace::generate(&d, 0.3).unwrap();
        let (e, v) = build_evidence(&d, &ps).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.multiplicity(0), 2);
        assert_eq!(e.total_pairs(), 2);
        assert_eq!(e.pair_universe(), 2);
        assert_eq!(v.incidence(0, 0), 2);
        assert_eq!(v.incidence(0, 1), 2);
        let s = e.set(0);
        for (op, expected) in [
            (Operator::Eq, true),
            (Operator::Neq, false),
            (Operator::Gt, false),
            (Operator::Lt, false),
            (Operator::Geq, true),
            (Operator::Leq, true),
        ] {
            let id = ps.find_named(Pattern::CrossTuple, "A", op, "A").unwrap();
            assert_eq!(s.contains(id), expected, "{op:?}");
        }
    }

    #[test]
    fn insufficient_tuples() {
        let d = dataset(&["A"], &[&["1"]]);
        let ps = PredicateSpace::generate(&d, 0.3).unwrap();
        assert_eq!(
            build_evidence(&d, &ps).unwrap_err(),
            Error::InsufficientTuples(1)
        );
    }

    #[test]
    fn nulls_satisfy_nothing() {
        let d = dataset(&["A", "S"], &[&["NULL", "NULL"], &["1", "x"]]);
        let ps = PredicateSpace::generate(&d, 0.3).unwrap();
        assert!(sat(&d, &ps, 0, 1).is_empty());
        assert!(sat(&d, &ps, 1, 0).is_empty());
    }

    #[test]
    fn uncovered_weight_extremes() {
        let d = dataset(&["A", "B"], &[&["1", "a"], &["2", "a"], &["3", "b"]]);
        let ps = PredicateSpace::generate(&d, 0.3).unwrap();
        let (e, _) = build_evidence(&d, &ps).unwrap();
        assert_eq!(e.uncovered_weight(&PredicateSet::full(ps.len())), 0);
        assert_eq!(e.uncovered_weight(&PredicateSet::new(ps.len())), 6);
    }

    #[test]
    fn group_straddling_a_word_boundary() {
        // 11 numeric columns compared only with themselves: 66 predicates, so
        // group 10 spans bits 60..66.
        let names: Vec<String> = (0..11).map(|i| alloc::format!("c{i}")).collect();
        let r0: Vec<String> = (0..11).map(|i| (i * 100).to_string()).collect();
        let r1: Vec<String> = (0..11).map(|i| (i * 100 + 1).to_string()).collect();
        let d = Dataset::from_records(names, &[r0, r1], "").unwrap();
        let ps = PredicateSpace::generate(&d, 1.0).unwrap();
        assert_eq!(ps.len(), 66);
        let s = sat(&d, &ps, 0, 1);
        let lt = ps.find(Pattern::CrossTuple, 10, 10, Operator::Lt).unwrap();
        let leq = ps.find(Pattern::CrossTuple, 10, 10, Operator::Leq).unwrap();
        let neq = ps.find(Pattern::CrossTuple, 10, 10, Operator::Neq).unwrap();
        assert_eq!(s.len(), 33);
        assert!(s.contains(lt) && s.contains(leq) && s.contains(neq));
    }

    #[test]
    fn partition_does_not_change_result() {
        let d = dataset(
            &["A", "B", "S"],
            &[
                &["1", "2", "x"],
                &["2", "2", "y"],
                &["3", "1", "x"],
                &["1", "3", "z"],
                &["2", "1", "y"],
            ],
        );
        let ps = PredicateSpace::generate(&d, 0.3).unwrap();
        let whole = build_evidence(&d, &ps).unwrap();
        let plan = SatPlan::new(&d, &ps);
        let parts = vec![
            scan_rows(&plan, 5, 3..5),
            scan_rows(&plan, 5, 0..1),
            scan_rows(&plan, 5, 1..3),
        ];
        assert_eq!(merge(parts, 5, ps.len()), whole);
    }
}
