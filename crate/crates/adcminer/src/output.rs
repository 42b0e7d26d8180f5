//! Rendering of discovered DCs as text lines and JSON records.

use adcminer_core::sampling::Estimate;
use adcminer_core::{Error, Pattern, PredicateId, PredicateSet, PredicateSpace};
use serde_json::{json, Value};

/// Sampling diagnostics attached to a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDiagnostics {
    pub estimate: Estimate,
    pub halfwidth: f64,
    pub chebyshev_bound: Option<f64>,
    pub accepted: bool,
}

/// Scores attached to a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcStats {
    /// `f(D, φ)` (the adjusted score when sampling with `f1`).
    pub score: f64,
    pub violating_pairs: u64,
    pub pair_universe: u64,
    pub sample: Option<SampleDiagnostics>,
}

/// Predicates of the DC for hitting set `h`, in output order: by operator,
/// then same-tuple after cross-tuple, then by column indices.
pub fn dc_predicates(ps: &PredicateSpace, h: &PredicateSet) -> Result<Vec<PredicateId>, Error> {
    if h.is_empty() {
        return Err(Error::TrivialDc);
    }
    let mut ids: Vec<PredicateId> = h.iter().map(|p| ps.complement(p)).collect();
    ids.sort_by_key(|&id| {
        let p = ps.predicate(id);
        (p.op, p.pattern, p.left, p.right)
    });
    Ok(ids)
}

/// `¬(p1 ∧ p2 ∧ …)`.
pub fn render_dc(ps: &PredicateSpace, h: &PredicateSet) -> Result<String, Error> {
    let parts: Vec<String> = dc_predicates(ps, h)?
        .into_iter()
        .map(|id| ps.render(id))
        .collect();
    Ok(format!("¬({})", parts.join(" ∧ ")))
}

/// One JSON object per DC.
pub fn dc_record(ps: &PredicateSpace, h: &PredicateSet, stats: &DcStats) -> Result<Value, Error> {
    let predicates: Vec<Value> = dc_predicates(ps, h)?
        .into_iter()
        .map(|id| {
            let p = ps.predicate(id);
            json!({
                "left": ps.column_names()[p.left],
                "op": p.op.symbol(),
                "right": ps.column_names()[p.right],
                "same_tuple": p.pattern == Pattern::SameTuple,
            })
        })
        .collect();
    let mut rec = json!({
        "dc": render_dc(ps, h)?,
        "predicates": predicates,
        "score": stats.score,
        "violating_pairs": stats.violating_pairs,
        "pair_universe": stats.pair_universe,
    });
    if let Some(s) = &stats.sample {
        rec["sample"] = json!({
            "p_hat": s.estimate.p_hat,
            "n": s.estimate.n,
            "halfwidth": s.halfwidth,
            "chebyshev_bound": s.chebyshev_bound,
            "decision": if s.accepted { "accept" } else { "reject" },
        });
    }
    Ok(rec)
}
