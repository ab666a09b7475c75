use std::fmt;

use crate::scalar::{format_rational, Rational};

/// A single failed identity. Indices are 0-based; `Display` prints them
/// 1-based to match the file formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `f[a][b][c] != -f[b][a][c]`.
    Antisymmetry { a: usize, b: usize, c: usize },
    /// Nonzero cyclic Jacobi sum for basis triple `(a, b, c)`; `residual[d]`
    /// is the coefficient of the d-th basis vector.
    Jacobi {
        a: usize,
        b: usize,
        c: usize,
        residual: Vec<Rational>,
    },
    /// Nonzero Jacobi sum on the random sample drawn at `trial`.
    RandomJacobi { trial: usize, residual: Vec<Rational> },
    /// `[ρ(a), ρ(b)] != ρ([a, b])`.
    Homomorphism { a: usize, b: usize },
    /// The listed matrix is a combination of the earlier ones.
    LinearDependence { index: usize },
    /// Wrong matrix size in a representation.
    Shape { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { a, b, c } => {
                write!(f, "antisymmetry violated at ({}, {}, {})", a + 1, b + 1, c + 1)
            }
            Violation::Jacobi { a, b, c, residual } => {
                let r: Vec<String> = residual.iter().map(format_rational).collect();
                write!(
                    f,
                    "Jacobi violated at ({}, {}, {}): residual [{}]",
                    a + 1,
                    b + 1,
                    c + 1,
                    r.join(", ")
                )
            }
            Violation::RandomJacobi { trial, residual } => {
                let r: Vec<String> = residual.iter().map(format_rational).collect();
                write!(f, "Jacobi violated on random trial {trial}: residual [{}]", r.join(", "))
            }
            Violation::Homomorphism { a, b } => {
                write!(f, "representation fails the bracket relation for ({}, {})", a + 1, b + 1)
            }
            Violation::LinearDependence { index } => {
                write!(f, "matrix {} depends linearly on the preceding ones", index + 1)
            }
            Violation::Shape { index } => write!(f, "matrix {} has the wrong shape", index + 1),
        }
    }
}

/// Outcome of a report-only check. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn merge(mut self, other: ValidationReport) -> Self {
        self.violations.extend(other.violations);
        self
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
