use serde_json::Value;
use thiserror::Error;

/// Errors raised by the library. Validation failures carry a JSON witness so
/// that front ends can report the offending data verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("quantum relations live over different ambient algebras")]
    AmbientMismatch,

    #[error("the ambient algebra is not the diagonal masa of M_{0}")]
    NotDiagonalMasa(usize),

    #[error("subset arguments must be nonempty")]
    EmptySubset,

    #[error("relations live on different base sets ({0} vs {1} atoms)")]
    BaseMismatch(usize, usize),

    #[error("{what}")]
    Validation { what: String, witness: Value },

    #[error("exact arithmetic required: {0}")]
    ExactRequired(&'static str),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("torus operators use different values of hbar ({0} vs {1})")]
    HbarMismatch(f64, f64),

    #[error("diagonal ({0}, {1}) has a nonzero constant part")]
    ConstantPart(i64, i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn validation(what: impl Into<String>, witness: Value) -> Self {
        Error::Validation {
            what: what.into(),
            witness,
        }
    }

    /// The counterexample attached to a validation failure, if any.
    pub fn witness(&self) -> Option<&Value> {
        match self {
            Error::Validation { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
