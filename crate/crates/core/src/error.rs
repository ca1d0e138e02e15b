use thiserror::Error;

use crate::algebra::{AlgebraKind, ElementClass, Sigma};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands live in different algebras ({left} vs {right})")]
    KindMismatch { left: AlgebraKind, right: AlgebraKind },

    #[error("operation requires {expected} numbers, got {found}")]
    WrongKind {
        expected: AlgebraKind,
        found: AlgebraKind,
    },

    #[error("element is not invertible ({class:?})")]
    NotInvertible { class: ElementClass },

    #[error("matrix is singular: determinant is {class:?}")]
    Singular { class: ElementClass },

    #[error("determinant has no invertible square root; cannot normalize to SL2")]
    NotNormalizable,

    #[error("{regime:?} regime: argument {value} outside the domain of {function}")]
    Domain {
        regime: Sigma,
        function: &'static str,
        value: f64,
    },

    #[error("(0, 0) is not a point of the coset space")]
    ZeroVector,

    #[error("pair is not admissible; it does not extend to an invertible matrix")]
    NotAdmissible,

    #[error("class {0} is not in a non-admissible family")]
    NotNonAdmissible(String),

    #[error("matrix is not in SL2 (det = {0})")]
    NotInSl(String),

    #[error("matrix does not commute with the one-parameter subgroup")]
    NotInCentralizer,

    #[error("map acts as the identity; every point is fixed")]
    FixesEverything,

    #[error("{0}")]
    Unsupported(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
