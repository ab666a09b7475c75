use thiserror::Error;

use crate::algebra::AlgVector;

/// Raised when the ε-bracket (or any φ_ε⁻¹ solve) has a negative
/// ε-valuation, i.e. the ε → 0 limit does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pole of order {} in component {component}{}", -valuation, pair_suffix(.pair))]
pub struct PoleError {
    /// Most negative ε-valuation among the solution components.
    pub valuation: i64,
    /// Index of the first component attaining that valuation.
    pub component: usize,
    /// Basis pair whose bracket produced the pole, when known.
    pub pair: Option<(usize, usize)>,
}

fn pair_suffix(pair: &Option<(usize, usize)>) -> String {
    match pair {
        Some((a, b)) => format!(" of [e{}, e{}]_eps", a + 1, b + 1),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("not a subalgebra: bracket of spanning vectors {} and {} is {bracket}, outside the span", .witness.0 + 1, .witness.1 + 1)]
    NotASubalgebra {
        witness: (usize, usize),
        bracket: AlgVector,
    },

    #[error(transparent)]
    Pole(#[from] PoleError),

    #[error("singular family: det(phi_eps) is the zero polynomial")]
    SingularFamily,

    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),

    #[error("jet has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("matrix series constant term is not the identity")]
    ConstantTermNotIdentity,

    #[error("coefficient of eps^{degree} lies outside the span of the representation")]
    DecompositionFailed { degree: usize },

    #[error("representation is not faithful: {0}")]
    UnfaithfulRepresentation(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid H element: {0}")]
    InvalidHElement(String),

    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name used by the CLI when surfacing the error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::TruncationMismatch { .. } => "TruncationMismatch",
            Error::NotASubalgebra { .. } => "NotASubalgebra",
            Error::Pole(_) => "PoleError",
            Error::SingularFamily => "SingularFamily",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::ConstantTermNotIdentity => "ConstantTermNotIdentity",
            Error::DecompositionFailed { .. } => "DecompositionFailed",
            Error::UnfaithfulRepresentation(_) => "UnfaithfulRepresentation",
            Error::InvalidElement(_) => "InvalidElement",
            Error::InvalidHElement(_) => "InvalidHElement",
            Error::UnknownAlgebra(_) => "UnknownAlgebra",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "ParseError",
        }
    }

    /// Mathematical outcomes (as opposed to malformed input).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotASubalgebra { .. }
                | Error::Pole(_)
                | Error::SingularFamily
                | Error::InternalInvariantViolation(_)
                | Error::DecompositionFailed { .. }
                | Error::UnfaithfulRepresentation(_)
                | Error::InvalidHElement(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
