//! Exact minimal hitting set enumeration.

use alloc::vec::Vec;

use super::state::SearchState;
use crate::bitset::PredicateSet;

/// Every minimal hitting set of `family` over `0..universe`, each once, in
/// discovery order. Branches on the uncovered set with the fewest candidates
/// (lowest index on ties).
pub fn mmcs(universe: usize, family: &[PredicateSet]) -> Vec<PredicateSet> {
    let mut state = SearchState::new(universe, family);
    let mut out = Vec::new();
    recurse(&mut state, universe, &mut out);
    out
}

fn recurse(state: &mut SearchState<'_>, universe: usize, out: &mut Vec<PredicateSet>) {
    if state.uncov().is_empty() {
        out.push(PredicateSet::from_ids(universe, state.chosen().iter().copied()));
        return;
    }
    let family = state.family();
    let f = state
        .uncov()
        .iter()
        .copied()
        .min_by_key(|&f| (family[f].intersection_len(state.cand()), f))
        .expect("uncov is non-empty");
    let c = state.remove_from_cand(&family[f]);
    for &e in &c {
        let log = state.update_crit_uncov(e);
        if state.all_critical(e) {
            state.push(e);
            recurse(state, universe, out);
            state.pop();
            state.insert_cand(e);
        }
        state.undo_crit_uncov(log);
    }
    // Elements re-admitted inside the loop are in `c` as well.
    state.restore_cand(&c);
}
