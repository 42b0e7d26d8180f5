use std::path::PathBuf;
use std::process::ExitCode;

use adcminer::{run, OutputFormat, RunConfig};
use adcminer_core::FunctionKind;
use clap::Parser;

/// Mine minimal approximate denial constraints from a CSV file.
#[derive(Debug, Parser)]
#[command(name = "adcminer", version)]
struct Cli {
    /// Input CSV file.
    #[arg(long)]
    input: PathBuf,
    /// The first row holds column names.
    #[arg(long, overrides_with = "no_header")]
    header: bool,
    /// The first row is data; columns are named c0, c1, ...
    #[arg(long = "no-header", overrides_with = "header")]
    no_header: bool,
    /// Cell value read as null.
    #[arg(long = "null", default_value = "")]
    null_token: String,
    /// Approximation function: f1 (violating pairs), f2 (problematic
    /// tuples) or f3 (greedy tuple removal).
    #[arg(long, default_value = "f1")]
    function: FunctionKind,
    /// Allowed violation level.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Fraction of tuples to sample; 1 uses the whole dataset.
    #[arg(long = "sample", default_value_t = 1.0)]
    sample: f64,
    /// Significance level of the sample-side acceptance test.
    #[arg(long, default_value_t = 0.025)]
    alpha: f64,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minimal share of common values for comparing two distinct columns.
    #[arg(long, default_value_t = 0.3)]
    common_threshold: f64,
    /// Output file (standard output when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format: text or jsonl.
    #[arg(long, default_value = "text")]
    format: OutputFormat,
    /// Worker threads for evidence construction.
    #[arg(long)]
    threads: Option<usize>,
    /// Evidence cache file, reused when it matches the data.
    #[arg(long)]
    evidence_cache: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = RunConfig {
        input: cli.input,
        has_header: !cli.no_header,
        null_token: cli.null_token,
        function: cli.function,
        epsilon: cli.epsilon,
        sample_fraction: cli.sample,
        alpha: cli.alpha,
        seed: cli.seed,
        common_threshold: cli.common_threshold,
        output: cli.output,
        format: cli.format,
        threads: cli.threads,
        evidence_cache: cli.evidence_cache,
    };
    match run(&config) {
        Ok(report) => {
            eprintln!("{}", report.timings.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
