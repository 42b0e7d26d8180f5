//! Evidence construction over scoped threads.

use std::num::NonZeroUsize;
use std::thread;

use adcminer_core::evidence::{merge, scan_rows, PartialEvidence, SatPlan};
use adcminer_core::{Dataset, Error, EvidenceSet, PredicateSpace, Vios};

/// Default worker count: available parallelism, or 1.
pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Splits the rows into chunks scanned by `threads` workers and merges the
/// partials. The result is identical for every thread count.
pub fn build_evidence_parallel(
    d: &Dataset,
    ps: &PredicateSpace,
    threads: usize,
) -> Result<(EvidenceSet, Vios), Error> {
    let n = d.row_count();
    if n < 2 {
        return Err(Error::InsufficientTuples(n));
    }
    let threads = threads.clamp(1, n);
    let plan = SatPlan::new(d, ps);
    if threads == 1 {
        return Ok(merge(vec![scan_rows(&plan, n, 0..n)], n, ps.len()));
    }
    // Every row carries the same number of pairs, so equal row chunks
    // balance the load.
    let chunk = n.div_ceil(threads);
    let parts: Vec<PartialEvidence> = thread::scope(|s| {
        let handles: Vec<_> = (0..n)
            .step_by(chunk)
            .map(|start| {
                let plan = &plan;
                s.spawn(move || scan_rows(plan, n, start..(start + chunk).min(n)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("evidence worker panicked"))
            .collect()
    });
    Ok(merge(parts, n, ps.len()))
}
