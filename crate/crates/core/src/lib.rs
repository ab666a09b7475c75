//! Exact Lie algebra contractions, order-k expansions and the truncated-BCH
//! expansion groups `H ⋉_Ad (g^k × g/h, ⊛)`.
//!
//! All arithmetic is over arbitrary-precision rationals unless a function
//! is explicitly generic over [`Field`], in which case it also runs in `f64`.

pub mod algebra;
pub mod bch;
pub mod contraction;
pub mod eps_poly;
pub mod error;
pub mod expansion;
pub mod io;
pub mod linalg;
pub mod oracle;
mod poly;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod so3_example;

pub use algebra::{
    builtin, coordinate_subalgebras, coset_reduce, span_subalgebra, validate_algebra, AlgVector,
    LieAlgebra, LinearSplit, SubalgebraSplit,
};
pub use bch::{local_mult, ExpansionGroup, GroupElement, HElement, NilTuple};
pub use contraction::{
    apply_family, contract, eps_bracket, invert_family_apply, iw_contract_closed_form, iw_family,
    ContractionFamily,
};
pub use eps_poly::{bracket_poly, EpsPoly, MatEpsPoly};
pub use error::{Error, PoleError, Result};
pub use expansion::{
    bracket_expanded_general, bracket_expanded_iw, jacobi_expanded, ExpandedAlgebraGeneral,
    ExpandedAlgebraIW, ExpandedElement, JacobiMode,
};
pub use linalg::Matrix;
pub use oracle::{check_representation, exp_trunc, log_trunc, oracle_local_mult, Representation};
pub use report::{ValidationReport, Violation};
pub use scalar::{Field, Rational};
