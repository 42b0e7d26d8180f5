//! CSV ingestion, threaded evidence construction, the evidence cache file,
//! DC rendering and the end-to-end mining pipeline behind the `adcminer`
//! binary.

pub mod cache;
pub mod csvio;
pub mod error;
pub mod output;
pub mod parallel;
pub mod pipeline;

pub use adcminer_core as core;
pub use error::{Phase, RunError};
pub use pipeline::{run, OutputFormat, RunConfig, RunReport};
