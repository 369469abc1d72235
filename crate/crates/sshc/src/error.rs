use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SshcError {
    /// One or more domain invariants are violated. Every violation is
    /// collected so a bad configuration is reported in full, not one
    /// field at a time.
    #[error("invalid configuration: {}", .violations.join("; "))]
    Validation { violations: Vec<String> },

    /// A charge-sharing step was asked to operate on a non-positive
    /// capacitance.
    #[error("non-positive capacitance in charge-sharing step: {0} F")]
    NonPositiveCapacitance(f64),

    /// A sweep axis refers to a parameter the engine does not know.
    #[error("unknown sweep parameter: {0}")]
    UnknownParameter(String),

    /// Two sweep axes share the same parameter name.
    #[error("duplicate sweep axis: {0}")]
    DuplicateAxis(String),

    /// An axis was declared with zero steps, or the spec has no axes at all.
    #[error("empty sweep grid: {0}")]
    EmptyGrid(String),

    /// A waveform trace is too short to contain a settled cycle.
    #[error("trace has no completed steady cycle: {0}")]
    IncompleteTrace(String),
}

impl SshcError {
    pub(crate) fn validation(violations: Vec<String>) -> Self {
        SshcError::Validation { violations }
    }
}

pub type Result<T> = std::result::Result<T, SshcError>;
