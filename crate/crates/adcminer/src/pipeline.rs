//! Load → predicate space → (sample) → evidence → enumerate → emit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use adcminer_core::approx::{function_for, ApproxFunction};
use adcminer_core::enumerate::{adc_enum, EnumStats};
use adcminer_core::sampling::{
    chebyshev_tail_bound, check_alpha, draw_sample, normal_ci_halfwidth, AdjustedPairFraction, Estimate,
    SampleSpec,
};
use adcminer_core::{EvidenceSet, FunctionKind, PredicateSpace, Vios};
use serde_json::{json, Value};

use crate::cache::{fingerprint, load_cache, store_cache};
use crate::csvio::load_csv;
use crate::error::{Phase, RunError};
use crate::output::{dc_record, render_dc, DcStats, SampleDiagnostics};
use crate::parallel::{build_evidence_parallel, default_threads};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "jsonl" => Ok(OutputFormat::Jsonl),
            _ => Err(format!("unknown format {s:?}, expected text or jsonl")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub has_header: bool,
    pub null_token: String,
    pub function: FunctionKind,
    pub epsilon: f64,
    pub sample_fraction: f64,
    pub alpha: f64,
    pub seed: u64,
    pub common_threshold: f64,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub evidence_cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            has_header: true,
            null_token: String::new(),
            function: FunctionKind::F1,
            epsilon: 0.01,
            sample_fraction: 1.0,
            alpha: 0.025,
            seed: 0,
            common_threshold: 0.3,
            output: None,
            format: OutputFormat::Text,
            threads: None,
            evidence_cache: None,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |message: &str| {
            Err(RunError::Invalid {
                phase: Phase::Config,
                message: message.to_string(),
            })
        };
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.common_threshold) {
            return bad("common-value threshold must lie in [0, 1]");
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return bad("sample fraction must lie in (0, 1]");
        }
        if check_alpha(self.alpha).is_err() {
            return bad("alpha must lie in (0, 0.5)");
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive");
        }
        Ok(())
    }

    fn sampling(&self) -> bool {
        self.sample_fraction < 1.0
    }
}

/// Wall time per phase, in milliseconds.
#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub phases: Vec<(&'static str, f64)>,
}

impl Timings {
    fn record(&mut self, phase: &'static str, since: Instant) {
        self.phases.push((phase, since.elapsed().as_secs_f64() * 1e3));
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .phases
            .iter()
            .map(|&(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({ "wall_ms": map })
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Rendered DCs in emission order.
    pub dcs: Vec<String>,
    /// Deterministic summary, also written as the output footer.
    pub stats: Value,
    pub enum_stats: EnumStats,
    pub timings: Timings,
    pub evidence_from_cache: bool,
}

/// Runs the pipeline, writing to the configured output.
pub fn run(config: &RunConfig) -> Result<RunReport, RunError> {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(RunError::io(Phase::Output))?;
            run_to(config, BufWriter::new(file))
        }
        None => run_to(config, io::stdout().lock()),
    }
}

/// Runs the pipeline, writing DCs and the stats footer to `out`.
pub fn run_to<W: Write>(config: &RunConfig, mut out: W) -> Result<RunReport, RunError> {
    config.validate()?;
    let mut timings = Timings::default();

    let t = Instant::now();
    let full = load_csv(&config.input, config.has_header, &config.null_token)?;
    timings.record("load", t);

    let t = Instant::now();
    let ps = PredicateSpace::generate(&full, config.common_threshold)
        .map_err(RunError::core(Phase::PredicateSpace))?;
    timings.record("predicate_space", t);

    let t = Instant::now();
    let data = if config.sampling() {
        let spec = SampleSpec::new(config.sample_fraction, config.seed).map_err(RunError::core(Phase::Sample))?;
        draw_sample(&full, &spec).map_err(RunError::core(Phase::Sample))?
    } else {
        full.clone()
    };
    timings.record("sample", t);
    if config.sampling() && config.function != FunctionKind::F1 {
        log::warn!(
            "no statistical guarantee: {} is evaluated directly on a {}-row sample",
            config.function,
            data.row_count()
        );
    }

    let t = Instant::now();
    let threads = config.threads.unwrap_or_else(default_threads);
    let (evidence, vios, from_cache) = evidence_for(config, &data, &ps, threads)?;
    timings.record("evidence", t);

    let t = Instant::now();
    let adjusted;
    let boxed;
    let f: &dyn ApproxFunction = if config.sampling() && config.function == FunctionKind::F1 {
        adjusted = AdjustedPairFraction::new(&evidence, config.alpha).map_err(RunError::core(Phase::Enumerate))?;
        &adjusted
    } else {
        boxed = function_for(config.function, &evidence, &vios).map_err(RunError::core(Phase::Enumerate))?;
        boxed.as_ref()
    };

    let mut dcs = Vec::new();
    let mut failure: Option<RunError> = None;
    let mut extreme = 0usize;
    let enum_stats = adc_enum(&evidence, &ps, f, config.epsilon, |em| {
        let violating = em.violating_pairs;
        let universe = evidence.pair_universe();
        let sample = config.sampling().then(|| {
            let estimate = Estimate::new(violating, universe);
            let halfwidth = normal_ci_halfwidth(estimate.p_hat, estimate.n, config.alpha);
            if estimate.p_hat > 0.0 && !(0.01..=0.99).contains(&estimate.p_hat) {
                extreme += 1;
            }
            SampleDiagnostics {
                estimate,
                halfwidth,
                chebyshev_bound: (halfwidth > 0.0)
                    .then(|| chebyshev_tail_bound(estimate.p_hat, data.row_count(), halfwidth).ok())
                    .flatten(),
                accepted: true,
            }
        });
        let stats = DcStats {
            score: 1.0 - em.violation,
            violating_pairs: violating,
            pair_universe: universe,
            sample,
        };
        let written = write_dc(&mut out, config.format, &ps, &em.hitting_set, &stats);
        match written {
            Ok(line) => {
                dcs.push(line);
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    timings.record("enumerate", t);
    if extreme > 0 {
        log::warn!(
            "{extreme} emitted DCs have a sample violation rate outside [0.01, 0.99]; the normal approximation is weak there"
        );
    }

    let stats = json!({
        "rows": full.row_count(),
        "sample_rows": data.row_count(),
        "columns": full.column_count(),
        "predicates": ps.len(),
        "distinct_evidence_sets": evidence.len(),
        "pair_universe": evidence.pair_universe(),
        "function": config.function.to_string(),
        "epsilon": config.epsilon,
        "emitted": enum_stats.emitted,
        "iterations": enum_stats.iterations,
        "empty_dc_accepted": enum_stats.empty_accepted,
    });
    let footer = match config.format {
        OutputFormat::Text => format!("# stats: {stats}"),
        OutputFormat::Jsonl => json!({ "stats": stats }).to_string(),
    };
    writeln!(out, "{footer}").map_err(RunError::io(Phase::Output))?;
    out.flush().map_err(RunError::io(Phase::Output))?;

    Ok(RunReport {
        dcs,
        stats,
        enum_stats,
        timings,
        evidence_from_cache: from_cache,
    })
}

fn evidence_for(
    config: &RunConfig,
    data: &adcminer_core::Dataset,
    ps: &PredicateSpace,
    threads: usize,
) -> Result<(EvidenceSet, Vios, bool), RunError> {
    let build = || build_evidence_parallel(data, ps, threads).map_err(RunError::core(Phase::Evidence));
    let Some(path) = &config.evidence_cache else {
        let (e, v) = build()?;
        return Ok((e, v, false));
    };
    let fp = fingerprint(data, ps);
    match load_cache(path, &fp) {
        Ok(Some((e, v))) => return Ok((e, v, true)),
        Ok(None) => {}
        Err(err) => log::warn!("ignoring unreadable evidence cache {}: {err}", path.display()),
    }
    let (e, v) = build()?;
    store_cache(path, &e, &v, &fp).map_err(RunError::io(Phase::Cache))?;
    Ok((e, v, false))
}

fn write_dc<W: Write>(
    out: &mut W,
    format: OutputFormat,
    ps: &PredicateSpace,
    h: &adcminer_core::PredicateSet,
    stats: &DcStats,
) -> Result<String, RunError> {
    let text = render_dc(ps, h).map_err(RunError::core(Phase::Output))?;
    match format {
        OutputFormat::Text => writeln!(out, "{text}"),
        OutputFormat::Jsonl => {
            let rec = dc_record(ps, h, stats).map_err(RunError::core(Phase::Output))?;
            writeln!(out, "{rec}")
        }
    }
    .map_err(RunError::io(Phase::Output))?;
    Ok(text)
}
