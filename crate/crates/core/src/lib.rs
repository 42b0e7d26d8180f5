//! Discovery of minimal approximate denial constraints.
//!
//! The crate is `no_std` (with `alloc`) and contains the algorithmic core:
//!
//! * [`dataset`]: typed, column-major relation built from string records;
//! * [`predicate`]: the predicate space, complements and redundancy groups;
//! * [`evidence`]: `Sat(t, t')` bitsets aggregated into a multiplicity bag,
//!   plus the per-tuple incidence index used by the greedy repair function;
//! * [`approx`]: the pair-based, tuple-based and greedy repair-based
//!   approximation functions;
//! * [`enumerate`]: MMCS and its approximate generalization which emits every
//!   minimal approximate hitting set (and thus every minimal ADC) once;
//! * [`sampling`]: uniform tuple samples, violation-rate estimates and the
//!   normal-approximation acceptance rule.
//!
//! CSV ingestion, parallel evidence construction and the command-line front
//! end live in the `adcminer` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod approx;
pub mod bitset;
pub mod dataset;
pub mod enumerate;
mod error;
pub mod evidence;
pub mod predicate;
pub mod sampling;

pub use approx::{ApproxFunction, FunctionKind};
pub use bitset::PredicateSet;
pub use dataset::{ColumnType, Dataset, Value};
pub use error::{Error, Result};
pub use evidence::{EvidenceSet, Vios};
pub use predicate::{Operator, Pattern, Predicate, PredicateId, PredicateSpace};
