//! Mutable search state shared by MMCS and the approximate enumerator, with
//! undo logs for exact backtracking.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::bitset::PredicateSet;

/// Subset of `0..n` with O(1) membership, removal and LIFO restoration.
#[derive(Debug, Clone)]
struct SparseSet {
    dense: Vec<usize>,
    pos: Vec<usize>,
    len: usize,
}

impl SparseSet {
    fn full(n: usize) -> Self {
        SparseSet {
            dense: (0..n).collect(),
            pos: (0..n).collect(),
            len: n,
        }
    }

    #[inline]
    fn contains(&self, x: usize) -> bool {
        self.pos[x] < self.len
    }

    /// Removes `x`, returning its former position.
    #[inline]
    fn remove(&mut self, x: usize) -> usize {
        let p = self.pos[x];
        let last = self.len - 1;
        self.swap(p, last);
        self.len = last;
        p
    }

    /// Undoes the most recent un-undone `remove(x)` that returned `p`.
    #[inline]
    fn restore(&mut self, p: usize) {
        let last = self.len;
        self.len += 1;
        self.swap(p, last);
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.dense.swap(a, b);
        self.pos[self.dense[a]] = a;
        self.pos[self.dense[b]] = b;
    }

    #[inline]
    fn as_slice(&self) -> &[usize] {
        &self.dense[..self.len]
    }
}

/// Undo record of [`SearchState::update_crit_uncov`].
#[derive(Debug, Default)]
pub struct CritUncovLog {
    element: usize,
    /// Former positions of the sets moved out of `uncov`, in removal order.
    uncov_positions: Vec<usize>,
    /// `(u, position)` of sets dropped from `crit[u]` via `swap_remove`.
    crit_removed: Vec<(usize, usize, usize)>,
}

/// `S`, `crit`, `uncov`, `cand` and `canHit` over a family of element sets.
#[derive(Debug, Clone)]
pub struct SearchState<'a> {
    family: &'a [PredicateSet],
    occurrences: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    crit: Vec<Vec<usize>>,
    uncov: SparseSet,
    cand: PredicateSet,
    can_hit: Vec<bool>,
}

/// Order-independent copy of a state, for equality checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSnapshot {
    pub chosen: Vec<usize>,
    pub crit: Vec<Vec<usize>>,
    pub uncov: Vec<usize>,
    pub cand: PredicateSet,
    pub can_hit: Vec<bool>,
}

impl<'a> SearchState<'a> {
    /// Initial state: `S = ∅`, every set uncovered and hittable, every
    /// element of `0..universe` a candidate.
    pub fn new(universe: usize, family: &'a [PredicateSet]) -> Self {
        let mut occurrences = vec![Vec::new(); universe];
        for (i, f) in family.iter().enumerate() {
            for e in f.iter() {
                occurrences[e].push(i);
            }
        }
        SearchState {
            family,
            occurrences,
            chosen: Vec::new(),
            crit: vec![Vec::new(); universe],
            uncov: SparseSet::full(family.len()),
            cand: PredicateSet::full(universe),
            can_hit: vec![true; family.len()],
        }
    }

    pub fn family(&self) -> &'a [PredicateSet] {
        self.family
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn crit(&self, e: usize) -> &[usize] {
        &self.crit[e]
    }

    /// Indices of the sets not hit by `S`, in no particular order.
    pub fn uncov(&self) -> &[usize] {
        self.uncov.as_slice()
    }

    pub fn is_uncovered(&self, f: usize) -> bool {
        self.uncov.contains(f)
    }

    pub fn cand(&self) -> &PredicateSet {
        &self.cand
    }

    pub fn can_hit(&self, f: usize) -> bool {
        self.can_hit[f]
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let mut uncov = self.uncov().to_vec();
        uncov.sort_unstable();
        StateSnapshot {
            chosen: self.chosen.clone(),
            crit: self
                .crit
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort_unstable();
                    c
                })
                .collect(),
            uncov,
            cand: self.cand.clone(),
            can_hit: self.can_hit.clone(),
        }
    }

    /// Accounts for adding `e` to `S`: uncovered sets containing `e` become
    /// critical for `e`, and sets containing `e` stop being critical for the
    /// current members of `S`. Does not push `e`; see [`Self::push`].
    pub fn update_crit_uncov(&mut self, e: usize) -> CritUncovLog {
        let mut log = CritUncovLog {
            element: e,
            ..CritUncovLog::default()
        };
        for &f in &self.occurrences[e] {
            if self.uncov.contains(f) {
                log.uncov_positions.push(self.uncov.remove(f));
                self.crit[e].push(f);
            }
        }
        for &u in &self.chosen {
            let list = &mut self.crit[u];
            let mut i = 0;
            while i < list.len() {
                let f = list[i];
                if self.family[f].contains(e) {
                    list.swap_remove(i);
                    log.crit_removed.push((u, i, f));
                } else {
                    i += 1;
                }
            }
        }
        log
    }

    pub fn undo_crit_uncov(&mut self, log: CritUncovLog) {
        for &(u, i, f) in log.crit_removed.iter().rev() {
            let list = &mut self.crit[u];
            list.push(f);
            let last = list.len() - 1;
            list.swap(i, last);
        }
        for &p in log.uncov_positions.iter().rev() {
            self.crit[log.element].pop();
            self.uncov.restore(p);
        }
    }

    /// Whether every member of `S ∪ {extra}` is critical for some set.
    pub fn all_critical(&self, extra: usize) -> bool {
        !self.crit[extra].is_empty() && self.chosen.iter().all(|&u| !self.crit[u].is_empty())
    }

    pub fn push(&mut self, e: usize) {
        self.chosen.push(e);
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.chosen.pop()
    }

    /// `cand = cand \ set`; returns the removed elements.
    pub fn remove_from_cand(&mut self, set: &PredicateSet) -> Vec<usize> {
        let removed = self.cand.intersection(set).to_vec();
        for &e in &removed {
            self.cand.remove(e);
        }
        removed
    }

    pub fn insert_cand(&mut self, e: usize) {
        self.cand.insert(e);
    }

    pub fn restore_cand(&mut self, removed: &[usize]) {
        for &e in removed {
            self.cand.insert(e);
        }
    }

    /// Marks every uncovered set disjoint from `cand` as not hittable.
    /// Returns the sets whose flag changed.
    pub fn update_can_cover(&mut self) -> Vec<usize> {
        let mut changed = Vec::new();
        for &f in self.uncov.as_slice() {
            if self.can_hit[f] && !self.family[f].intersects(&self.cand) {
                self.can_hit[f] = false;
                changed.push(f);
            }
        }
        changed
    }

    pub fn undo_can_cover(&mut self, changed: &[usize]) {
        for &f in changed {
            self.can_hit[f] = true;
        }
    }

    /// Removes from `cand` the other members of `e`'s redundancy group.
    pub fn remove_redundant(&mut self, e: usize, group: Range<usize>) -> Vec<usize> {
        group.filter(|&p| p != e && self.cand.remove(p)).collect()
    }

    /// Sets not hit by `S ∪ cand`, appended to `out`.
    pub fn uncovered_with_cand(&self, out: &mut Vec<usize>) {
        out.extend(
            self.uncov
                .as_slice()
                .iter()
                .copied()
                .filter(|&f| !self.family[f].intersects(&self.cand)),
        );
    }

    /// Sets not hit by `S \ {u}` (for `u ∈ S`), appended to `out`.
    pub fn uncovered_without(&self, u: usize, out: &mut Vec<usize>) {
        out.extend_from_slice(self.uncov.as_slice());
        out.extend_from_slice(&self.crit[u]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(universe: usize, sets: &[&[usize]]) -> Vec<PredicateSet> {
        sets.iter()
            .map(|s| PredicateSet::from_ids(universe, s.iter().copied()))
            .collect()
    }

    #[test]
    fn sparse_set_restores_exact_order() {
        let mut s = SparseSet::full(5);
        let p1 = s.remove(1);
        let p3 = s.remove(3);
        let p0 = s.remove(0);
        assert_eq!(s.as_slice().len(), 2);
        assert!(!s.contains(1) && s.contains(2));
        s.restore(p0);
        s.restore(p3);
        s.restore(p1);
        assert_eq!(s.as_slice(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn crit_uncov_update_and_undo() {
        // a=0 b=1 c=2; family {a,b} {b,c}
        let fam = family(3, &[&[0, 1], &[1, 2]]);
        let mut st = SearchState::new(3, &fam);
        let before = st.snapshot();

        let log_a = st.update_crit_uncov(0);
        assert_eq!(st.crit(0), &[0]);
        assert_eq!(st.uncov(), &[1]);
        st.push(0);
        let after_a = st.snapshot();

        // Adding b takes over set 0 from a, leaving a non-critical.
        let log_b = st.update_crit_uncov(1);
        assert!(st.crit(0).is_empty());
        assert_eq!(st.crit(1), &[1]);
        assert!(st.uncov().is_empty());
        assert!(!st.all_critical(1));

        st.undo_crit_uncov(log_b);
        assert_eq!(st.snapshot(), after_a);
        st.pop();
        st.undo_crit_uncov(log_a);
        assert_eq!(st.snapshot(), before);
    }

    #[test]
    fn element_in_no_uncovered_set_is_not_critical() {
        let fam = family(3, &[&[0, 1]]);
        let mut st = SearchState::new(3, &fam);
        let log = st.update_crit_uncov(2);
        assert!(st.crit(2).is_empty());
        assert!(!st.all_critical(2));
        st.undo_crit_uncov(log);
    }

    #[test]
    fn can_cover_marks_sets_disjoint_from_cand() {
        let fam = family(4, &[&[0, 1], &[2], &[3]]);
        let mut st = SearchState::new(4, &fam);
        assert!(st.update_can_cover().is_empty());

        let removed = st.remove_from_cand(&PredicateSet::full(4));
        let changed = st.update_can_cover();
        assert_eq!(changed, vec![0, 1, 2]);
        assert!((0..3).all(|f| !st.can_hit(f)));
        st.undo_can_cover(&changed);
        st.restore_cand(&removed);
        assert_eq!(st.snapshot(), SearchState::new(4, &fam).snapshot());

        let removed = st.remove_from_cand(&fam[1]);
        let changed = st.update_can_cover();
        assert_eq!(changed, vec![1]);
        st.undo_can_cover(&changed);
        st.restore_cand(&removed);
    }

    #[test]
    fn redundant_removal_skips_absent_members() {
        let fam = family(8, &[&[0]]);
        let mut st = SearchState::new(8, &fam);
        st.remove_from_cand(&PredicateSet::from_ids(8, [4]));
        let removed = st.remove_redundant(2, 0..6);
        assert_eq!(removed, vec![0, 1, 3, 5]);
        assert!(st.cand().contains(2));
        assert!(st.cand().contains(6));
        st.restore_cand(&removed);
        assert_eq!(st.cand().len(), 7);
    }

    #[test]
    fn uncovered_views() {
        let fam = family(3, &[&[0], &[0, 1], &[2]]);
        let mut st = SearchState::new(3, &fam);
        let _log = st.update_crit_uncov(0);
        st.push(0);
        let mut out = Vec::new();
        st.uncovered_without(0, &mut out);
        out.sort_unstable();
        assert_eq!(out, vec![0, 1, 2]);
        out.clear();
        st.remove_from_cand(&PredicateSet::from_ids(3, [2]));
        st.uncovered_with_cand(&mut out);
        assert_eq!(out, vec![2]);
    }
}
