use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A record whose length differs from the header. `row` is the 0-based
    /// data row index (header excluded).
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    NoColumns,
    /// Evidence needs at least two tuples.
    InsufficientTuples(usize),
    EmptyPairUniverse,
    /// Dataset exceeds the exhaustive-search limit of the exact repair oracle.
    OracleLimit { rows: usize, limit: usize },
    /// A sample would contain fewer than two tuples.
    SampleTooSmall { requested: usize },
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The empty hitting set corresponds to the empty (trivial) DC.
    TrivialDc,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RaggedRow {
                row,
                expected,
                found,
            } => write!(f, "row {row} has {found} fields, expected {expected}"),
            Error::NoColumns => f.write_str("dataset has no columns"),
            Error::InsufficientTuples(n) => {
                write!(f, "insufficient tuples: need at least 2, got {n}")
            }
            Error::EmptyPairUniverse => f.write_str("pair universe is empty"),
            Error::OracleLimit { rows, limit } => {
                write!(f, "dataset has {rows} rows, exact oracle limit is {limit}")
            }
            Error::SampleTooSmall { requested } => {
                write!(f, "sample of {requested} tuples is too small (need at least 2)")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::TrivialDc => f.write_str("empty predicate set renders the trivial DC"),
        }
    }
}

impl core::error::Error for Error {}
