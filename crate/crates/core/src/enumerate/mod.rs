//! Minimal (approximate) hitting set enumeration.
//!
//! A DC corresponds to the hitting set `h` made of the complements of its
//! predicates: a pair violates the DC iff its evidence set misses `h`.
//! [`adc_enum`] therefore enumerates the inclusion-minimal `h` accepted by an
//! approximation function, and each emission is turned into a DC by the
//! caller via [`PredicateSpace::complement_set`].

mod mmcs;
mod state;

use alloc::vec::Vec;
use core::ops::ControlFlow;

pub use mmcs::mmcs;
pub use state::{CritUncovLog, SearchState, StateSnapshot};

use crate::approx::ApproxFunction;
use crate::bitset::PredicateSet;
use crate::evidence::EvidenceSet;
use crate::predicate::PredicateSpace;

/// One minimal approximate hitting set.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    pub hitting_set: PredicateSet,
    /// `1 - f(D, h)`.
    pub violation: f64,
    /// Number of ordered pairs violating the DC.
    pub violating_pairs: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub emitted: usize,
    /// Calls of the recursive step.
    pub iterations: u64,
    /// Set when the empty hitting set (the DC with every predicate) is
    /// already accepted, in which case nothing is emitted.
    pub empty_accepted: bool,
    /// Set when the sink stopped the enumeration.
    pub cancelled: bool,
}

/// Whether no `S \ {u}` is accepted. `S` must be the chosen set of `state`.
pub fn is_minimal(f: &dyn ApproxFunction, epsilon: f64, state: &SearchState<'_>, buf: &mut Vec<usize>) -> bool {
    state.chosen().iter().all(|&u| {
        buf.clear();
        state.uncovered_without(u, buf);
        !f.accepts(buf, epsilon)
    })
}

/// Whether `S ∪ cand` is accepted, using the function's pruning test.
pub fn will_cover(f: &dyn ApproxFunction, epsilon: f64, state: &SearchState<'_>, buf: &mut Vec<usize>) -> bool {
    buf.clear();
    state.uncovered_with_cand(buf);
    f.prune_accepts(buf, epsilon)
}

struct Enumerator<'a, 'f, F> {
    ps: &'a PredicateSpace,
    evidence: &'a EvidenceSet,
    f: &'f dyn ApproxFunction,
    epsilon: f64,
    sink: F,
    stats: EnumStats,
    buf: Vec<usize>,
}

/// Emits every minimal `h` with at most one predicate per redundancy group
/// and `1 - f(D, h) <= epsilon`, each once.
pub fn adc_enum<F>(
    evidence: &EvidenceSet,
    ps: &PredicateSpace,
    f: &dyn ApproxFunction,
    epsilon: f64,
    sink: F,
) -> EnumStats
where
    F: FnMut(&Emission) -> ControlFlow<()>,
{
    let mut state = SearchState::new(ps.len(), evidence.sets());
    if f.accepts(state.uncov(), epsilon) {
        log::warn!("epsilon exceeds total violation rate; empty DC accepted");
        return EnumStats {
            empty_accepted: true,
            iterations: 1,
            ..EnumStats::default()
        };
    }
    let mut en = Enumerator {
        ps,
        evidence,
        f,
        epsilon,
        sink,
        stats: EnumStats::default(),
        buf: Vec::new(),
    };
    en.recurse(&mut state);
    en.stats
}

impl<F> Enumerator<'_, '_, F>
where
    F: FnMut(&Emission) -> ControlFlow<()>,
{
    fn recurse(&mut self, state: &mut SearchState<'_>) {
        self.stats.iterations += 1;
        if self.f.accepts(state.uncov(), self.epsilon) {
            // A non-minimal accepted S has an accepted S \ {u}, which every
            // superset of S contains as well: nothing below can be minimal.
            if is_minimal(self.f, self.epsilon, state, &mut self.buf) {
                self.emit(state);
            }
            return;
        }

        let family = state.family();
        let mut chosen: Option<(usize, usize)> = None;
        for &f in state.uncov() {
            if !state.can_hit(f) {
                continue;
            }
            let k = family[f].intersection_len(state.cand());
            let better = match chosen {
                None => true,
                Some((bk, bf)) => k > bk || (k == bk && f < bf),
            };
            if better {
                chosen = Some((k, f));
            }
        }
        let Some((_, f)) = chosen else {
            return;
        };
        let set = &family[f];

        // Branch that leaves F unhit.
        let removed = state.remove_from_cand(set);
        let marked = state.update_can_cover();
        if will_cover(self.f, self.epsilon, state, &mut self.buf) {
            self.recurse(state);
        }
        state.undo_can_cover(&marked);
        state.restore_cand(&removed);
        if self.stats.cancelled {
            return;
        }

        // Branches that hit F.
        let c = state.remove_from_cand(set);
        for &e in &c {
            let log = state.update_crit_uncov(e);
            if state.all_critical(e) {
                let redundant = state.remove_redundant(e, self.ps.redundancy_group(e));
                state.push(e);
                self.recurse(state);
                state.pop();
                state.restore_cand(&redundant);
                state.insert_cand(e);
            }
            state.undo_crit_uncov(log);
            if self.stats.cancelled {
                break;
            }
        }
        state.restore_cand(&c);
    }

    fn emit(&mut self, state: &SearchState<'_>) {
        let uncov = state.uncov();
        let emission = Emission {
            hitting_set: PredicateSet::from_ids(self.ps.len(), state.chosen().iter().copied()),
            violation: self.f.violation(uncov),
            violating_pairs: self.evidence.weight_of(uncov),
        };
        self.stats.emitted += 1;
        if (self.sink)(&emission).is_break() {
            self.stats.cancelled = true;
        }
    }
}

/// Collects every emission of [`adc_enum`], sorted by [`sort_emissions`].
pub fn adc_enum_collect(
    evidence: &EvidenceSet,
    ps: &PredicateSpace,
    f: &dyn ApproxFunction,
    epsilon: f64,
) -> (Vec<Emission>, EnumStats) {
    let mut out = Vec::new();
    let stats = adc_enum(evidence, ps, f, epsilon, |em| {
        out.push(em.clone());
        ControlFlow::Continue(())
    });
    sort_emissions(&mut out);
    (out, stats)
}

/// Orders emissions by hitting set size, then by ascending predicate ids.
pub fn sort_emissions(emissions: &mut [Emission]) {
    emissions.sort_by(|a, b| {
        a.hitting_set
            .len()
            .cmp(&b.hitting_set.len())
            .then_with(|| a.hitting_set.iter().cmp(b.hitting_set.iter()))
    });
}
