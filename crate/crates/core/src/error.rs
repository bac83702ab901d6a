use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A construction would exceed one of the configured size caps.
    #[error("capacity exceeded: {dimension} would be {requested}, limit is {limit}")]
    Capacity {
        dimension: String,
        requested: u128,
        limit: u128,
    },
    /// The input violates a structural invariant (group axioms, equivariance, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A composed leg left its declared class; the triple is not adequate.
    #[error("class violation: {0}")]
    ClassViolation(String),
    /// Two objects that must live over the same group or world do not.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// Rational inversion of a marks vector did not give integers.
    #[error("non-integral marks inversion at class {class}: {value}")]
    NonIntegral { class: usize, value: String },
    /// The requested operation is not available for this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An interchange document could not be read.
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn capacity(dimension: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::Capacity {
            dimension: dimension.into(),
            requested,
            limit,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

/// Hard size limits. Exceeding any of them is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of groupoid objects.
    pub objects: usize,
    /// Maximum number of groupoid morphisms.
    pub morphisms: usize,
    /// Maximum number of points of a materialized G-set.
    pub points: usize,
    /// Maximum number of candidates produced by an exhaustive enumeration.
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            objects: 64,
            morphisms: 4096,
            points: 1 << 16,
            enumeration: 1 << 20,
        }
    }
}

impl Caps {
    pub(crate) fn check_points(&self, what: &str, requested: u128) -> Result<()> {
        if requested > self.points as u128 {
            Err(Error::capacity(what, requested, self.points as u128))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_enumeration(&self, what: &str, requested: u128) -> Result<()> {
        if requested > self.enumeration as u128 {
            Err(Error::capacity(what, requested, self.enumeration as u128))
        } else {
            Ok(())
        }
    }
}
