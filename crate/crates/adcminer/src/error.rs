use std::fmt;
use std::io;

/// Pipeline stage an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Config,
    Load,
    PredicateSpace,
    Sample,
    Evidence,
    Cache,
    Enumerate,
    Output,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Config => "config",
            Phase::Load => "load",
            Phase::PredicateSpace => "predicate space",
            Phase::Sample => "sample",
            Phase::Evidence => "evidence",
            Phase::Cache => "evidence cache",
            Phase::Enumerate => "enumerate",
            Phase::Output => "output",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{phase}: {source}")]
    Core {
        phase: Phase,
        #[source]
        source: adcminer_core::Error,
    },
    #[error("{phase}: {source}")]
    Io {
        phase: Phase,
        #[source]
        source: io::Error,
    },
    #[error("{phase}: {source}")]
    Csv {
        phase: Phase,
        #[source]
        source: csv::Error,
    },
    #[error("{phase}: {message}")]
    Invalid { phase: Phase, message: String },
}

impl RunError {
    pub fn core(phase: Phase) -> impl FnOnce(adcminer_core::Error) -> RunError {
        move |source| RunError::Core { phase, source }
    }

    pub fn io(phase: Phase) -> impl FnOnce(io::Error) -> RunError {
        move |source| RunError::Io { phase, source }
    }

    pub fn phase(&self) -> Phase {
        match self {
            RunError::Core { phase, .. }
            | RunError::Io { phase, .. }
            | RunError::Csv { phase, .. }
            | RunError::Invalid { phase, .. } => *phase,
        }
    }

    /// 2 for configuration errors, 3 for data errors, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        use adcminer_core::Error as E;
        match self {
            RunError::Invalid {
                phase: Phase::Config,
                ..
            } => 2,
            RunError::Core { source, .. } => match source {
                E::InvalidParameter { .. } => 2,
                E::RaggedRow { .. }
                | E::NoColumns
                | E::InsufficientTuples(_)
                | E::EmptyPairUniverse
                | E::SampleTooSmall { .. } => 3,
                _ => 4,
            },
            RunError::Io {
                phase: Phase::Load, ..
            }
            | RunError::Csv { .. } => 3,
            _ => 4,
        }
    }
}
