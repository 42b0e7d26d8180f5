//! Approximation functions.
//!
//! Every function is evaluated in hitting-set space: a candidate `h` is the
//! complement of a DC's predicate set, and an evidence set is violating iff it
//! does not intersect `h`. Since all functions here depend only on *which*
//! distinct evidence sets are violating, they take the list of uncovered set
//! indices, which the enumerator maintains incrementally.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bitset::PredicateSet;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evidence::{EvidenceSet, SatPlan, Vios};
use crate::predicate::PredicateSpace;

/// Largest dataset accepted by [`exact_f3_bruteforce`].
pub const EXACT_ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    /// Fraction of ordered tuple pairs satisfying the DC.
    F1,
    /// Fraction of tuples involved in no violation.
    F2,
    /// Greedy surrogate for the cardinality-repair function.
    F3Greedy,
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(FunctionKind::F1),
            "f2" => Ok(FunctionKind::F2),
            "f3" => Ok(FunctionKind::F3Greedy),
            _ => Err(Error::InvalidParameter {
                name: "function",
                reason: "expected f1, f2 or f3",
            }),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionKind::F1 => "f1",
            FunctionKind::F2 => "f2",
            FunctionKind::F3Greedy => "f3",
        })
    }
}

/// A valid approximation function `f`, seen through `1 - f`.
pub trait ApproxFunction {
    /// `1 - f(D, S)` for the candidate leaving `uncovered` unhit.
    fn violation(&self, uncovered: &[usize]) -> f64;

    /// `1 - f(D, S) <= epsilon`.
    fn accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        self.violation(uncovered) <= epsilon
    }

    /// Acceptance test used to prune whole branches. It must hold whenever
    /// `accepts` holds for some candidate covering no more sets.
    fn prune_accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        self.accepts(uncovered, epsilon)
    }
}

/// `f1`: fraction of the `|D|(|D|-1)` ordered pairs satisfying the DC.
#[derive(Debug, Clone, Copy)]
pub struct PairFraction<'a> {
    evidence: &'a EvidenceSet,
}

impl<'a> PairFraction<'a> {
    pub fn new(evidence: &'a EvidenceSet) -> Result<Self> {
        if evidence.pair_universe() == 0 {
            return Err(Error::EmptyPairUniverse);
        }
        Ok(PairFraction { evidence })
    }
}

impl ApproxFunction for PairFraction<'_> {
    fn violation(&self, uncovered: &[usize]) -> f64 {
        self.evidence.weight_of(uncovered) as f64 / self.evidence.pair_universe() as f64
    }
}

/// `1 - f1 <= 2ε` is implied by `1 - f2 <= ε` and by `1 - f3 <= ε`, and also
/// by the greedy surrogate accepting (every tuple lies in `2(|D|-1)` ordered
/// pairs, so `u <= c <= 2|R|(|D|-1)`). A failed check rejects exactly.
fn within_double_epsilon(evidence: &EvidenceSet, uncovered: &[usize], epsilon: f64) -> bool {
    evidence.weight_of(uncovered) as f64 / evidence.pair_universe() as f64 <= 2.0 * epsilon
}

/// `f2`: fraction of tuples not involved in any violating pair.
#[derive(Debug, Clone, Copy)]
pub struct CleanTupleFraction<'a> {
    evidence: &'a EvidenceSet,
    vios: &'a Vios,
}

impl<'a> CleanTupleFraction<'a> {
    pub fn new(evidence: &'a EvidenceSet, vios: &'a Vios) -> Self {
        CleanTupleFraction { evidence, vios }
    }

    /// Tuples appearing in at least one pair of an uncovered set.
    pub fn problematic(&self, uncovered: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.evidence.tuple_count()];
        for &s in uncovered {
            for &(t, _) in self.vios.entries(s) {
                seen[t as usize] = true;
            }
        }
        (0..seen.len()).filter(|&t| seen[t]).collect()
    }
}

impl ApproxFunction for CleanTupleFraction<'_> {
    fn violation(&self, uncovered: &[usize]) -> f64 {
        self.problematic(uncovered).len() as f64 / self.evidence.tuple_count() as f64
    }

    fn accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        within_double_epsilon(self.evidence, uncovered, epsilon) && self.violation(uncovered) <= epsilon
    }
}

/// Outcome of the greedy tuple-removal pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRemoval {
    /// Removed tuples, in selection order.
    pub removed: Vec<usize>,
    /// Violating pair weight `u`.
    pub violations: u64,
    /// `c`: sum of `v(t)` over the removed tuples. Pairs with both ends
    /// removed count twice.
    pub covered: u64,
}

/// Greedy surrogate for `f3`: removes tuples in decreasing order of their
/// violation count until the removed counts reach the total violation count.
/// Ties go to the lower tuple id.
#[derive(Debug, Clone, Copy)]
pub struct GreedyRepair<'a> {
    evidence: &'a EvidenceSet,
    vios: &'a Vios,
}

impl<'a> GreedyRepair<'a> {
    pub fn new(evidence: &'a EvidenceSet, vios: &'a Vios) -> Self {
        GreedyRepair { evidence, vios }
    }

    pub fn removal(&self, uncovered: &[usize]) -> GreedyRemoval {
        let mut v = vec![0u64; self.evidence.tuple_count()];
        for &s in uncovered {
            for &(t, c) in self.vios.entries(s) {
                v[t as usize] += u64::from(c);
            }
        }
        let u = self.evidence.weight_of(uncovered);
        let mut order: Vec<usize> = (0..v.len()).filter(|&t| v[t] > 0).collect();
        order.sort_by(|&a, &b| v[b].cmp(&v[a]).then(a.cmp(&b)));
        let mut covered = 0;
        let mut removed = Vec::new();
        for t in order {
            if covered >= u {
                break;
            }
            covered += v[t];
            removed.push(t);
        }
        GreedyRemoval {
            removed,
            violations: u,
            covered,
        }
    }
}

impl ApproxFunction for GreedyRepair<'_> {
    /// `|R| / |D|`. Not a certified `1 - f3` value.
    fn violation(&self, uncovered: &[usize]) -> f64 {
        self.removal(uncovered).removed.len() as f64 / self.evidence.tuple_count() as f64
    }

    fn accepts(&self, uncovered: &[usize], epsilon: f64) -> bool {
        within_double_epsilon(self.evidence, uncovered, epsilon) && self.violation(uncovered) <= epsilon
    }
}

/// Boxed function for a [`FunctionKind`].
pub fn function_for<'a>(
    kind: FunctionKind,
    evidence: &'a EvidenceSet,
    vios: &'a Vios,
) -> Result<Box<dyn ApproxFunction + 'a>> {
    Ok(match kind {
        FunctionKind::F1 => Box::new(PairFraction::new(evidence)?),
        FunctionKind::F2 => Box::new(CleanTupleFraction::new(evidence, vios)),
        FunctionKind::F3Greedy => Box::new(GreedyRepair::new(evidence, vios)),
    })
}

/// `f1(D, S)` for hitting set `h`.
pub fn f1_score(e: &EvidenceSet, h: &PredicateSet) -> Result<f64> {
    let f = PairFraction::new(e)?;
    Ok(1.0 - f.violation(&e.uncovered(h)))
}

/// `f2(D, S)` for hitting set `h`.
pub fn f2_score(e: &EvidenceSet, v: &Vios, h: &PredicateSet) -> f64 {
    1.0 - CleanTupleFraction::new(e, v).violation(&e.uncovered(h))
}

/// Greedy acceptance of `h` at `epsilon`, with the size of the removal set.
pub fn greedy_f3_accept(e: &EvidenceSet, v: &Vios, h: &PredicateSet, epsilon: f64) -> (bool, usize) {
    let removed = GreedyRepair::new(e, v).removal(&e.uncovered(h)).removed.len();
    (removed as f64 / e.tuple_count() as f64 <= epsilon, removed)
}

/// `1 - f1 <= 2ε`. When false, neither `f2` nor `f3` can accept at `epsilon`.
pub fn prefilter_2eps(e: &EvidenceSet, h: &PredicateSet, epsilon: f64) -> bool {
    within_double_epsilon(e, &e.uncovered(h), epsilon)
}

/// Minimum number of tuples whose removal leaves no pair violating the DC of
/// `h`, by exhaustive search. Exponential; for tiny datasets only.
pub fn min_repair_removals(d: &Dataset, ps: &PredicateSpace, h: &PredicateSet) -> Result<usize> {
    let n = d.row_count();
    if n > EXACT_ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            rows: n,
            limit: EXACT_ORACLE_LIMIT,
        });
    }
    let plan = SatPlan::new(d, ps);
    let mut edges: Vec<u64> = Vec::new();
    for t in 0..n {
        for t2 in 0..n {
            if t != t2 && !plan.eval(t, t2).intersects(h) {
                edges.push(1 << t | 1 << t2);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    for k in 0..=n {
        if combinations(n, k).any(|removed| edges.iter().all(|&e| e & removed != 0)) {
            return Ok(k);
        }
    }
    unreachable!("removing every tuple satisfies any DC")
}

/// Exact `f3(D, S)`: size of a cardinality repair over `|D|`.
pub fn exact_f3_bruteforce(d: &Dataset, ps: &PredicateSpace, h: &PredicateSet) -> Result<f64> {
    let k = min_repair_removals(d, ps, h)?;
    let n = d.row_count();
    if n == 0 {
        return Ok(1.0);
    }
    Ok((n - k) as f64 / n as f64)
}

/// All `k`-subsets of `0..n` as bitmasks (Gosper's hack).
fn combinations(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = if k == 0 { Some(0) } else { Some((1u64 << k) - 1) };
    core::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit && k > 0 {
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn kind_tokens() {
        assert_eq!("f1".parse::<FunctionKind>().unwrap(), FunctionKind::F1);
        assert_eq!("f3".parse::<FunctionKind>().unwrap(), FunctionKind::F3Greedy);
        assert!("f4".parse::<FunctionKind>().is_err());
        assert_eq!(FunctionKind::F2.to_string(), "f2");
    }

    #[test]
    fn gosper_counts() {
        let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        for n in 0..8 {
            for k in 0..=n {
                let all: Vec<u64> = combinations(n, k).collect();
                assert_eq!(all.len() as u64, binom(n as u64, k as u64), "n={n} k={k}");
                assert!(all.iter().all(|m| m.count_ones() as usize == k && *m < 1 << n));
            }
        }
    }
}
