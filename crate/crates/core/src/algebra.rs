//! Finite-dimensional Lie algebras with exact structure constants,
//! subalgebra/complement splits and canonical coset representatives.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{in_span, independent_subset, Matrix};
use crate::oracle::Representation;
use crate::report::{ValidationReport, Violation};
use crate::scalar::{format_rational, int, Field, Rational};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 32;

/// Coordinates of an algebra element in the basis of its algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgVector<T = Rational>(pub Vec<T>);

impl<T: fmt::Debug> fmt::Debug for AlgVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl fmt::Display for AlgVector<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<T: Field> AlgVector<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self(coeffs)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![T::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self(self.0.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> AlgVector<U> {
        AlgVector(self.0.iter().map(f).collect())
    }

    /// Largest coordinate difference in absolute value.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl AlgVector<Rational> {
    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&x| int(x)).collect())
    }

    pub fn to_f64(&self) -> AlgVector<f64> {
        self.map(f64::from_rational)
    }
}

impl<T: Field> Add for &AlgVector<T> {
    type Output = AlgVector<T>;
    fn add(self, rhs: Self) -> AlgVector<T> {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension");
        AlgVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<T: Field> Sub for &AlgVector<T> {
    type Output = AlgVector<T>;
    fn sub(self, rhs: Self) -> AlgVector<T> {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension");
        AlgVector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<T: Field> Neg for &AlgVector<T> {
    type Output = AlgVector<T>;
    fn neg(self) -> AlgVector<T> {
        AlgVector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<T: Field> Add for AlgVector<T> {
    type Output = AlgVector<T>;
    fn add(self, rhs: Self) -> AlgVector<T> {
        &self + &rhs
    }
}

impl<T: Field> Sub for AlgVector<T> {
    type Output = AlgVector<T>;
    fn sub(self, rhs: Self) -> AlgVector<T> {
        &self - &rhs
    }
}

impl<T: Field> Neg for AlgVector<T> {
    type Output = AlgVector<T>;
    fn neg(self) -> AlgVector<T> {
        -&self
    }
}

/// A Lie algebra given by dense structure constants,
/// `[X_a, X_b] = Σ_c f[a][b][c] X_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    dense: Vec<Rational>,
    /// Nonzero entries `(a, b, c, f[a][b][c])`, for fast brackets.
    sparse: Vec<(usize, usize, usize, Rational)>,
}

impl LieAlgebra {
    /// Builds from a dense tensor without checking the Lie axioms.
    pub fn new_unchecked(names: Vec<String>, dense: Vec<Rational>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "dimension must be between 1 and {MAX_DIM}, got {n}"
            )));
        }
        if dense.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: dense.len(),
            });
        }
        let mut sparse = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = &dense[(a * n + b) * n + c];
                    if !v.is_zero() {
                        sparse.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        Ok(Self {
            names,
            dense,
            sparse,
        })
    }

    /// Builds from a dense tensor, rejecting anything that fails
    /// antisymmetry or Jacobi.
    pub fn new(names: Vec<String>, dense: Vec<Rational>) -> Result<Self> {
        let alg = Self::new_unchecked(names, dense)?;
        let report = validate_algebra(&alg);
        if !report.is_valid() {
            return Err(Error::InvalidArgument(format!("not a Lie algebra: {report}")));
        }
        Ok(alg)
    }

    /// Builds from sparse 0-based entries `(a, b, c, value)`. The mirrored
    /// entry `(b, a, c)` is filled with `-value` unless it is given
    /// explicitly. No axiom check.
    pub fn from_brackets_unchecked(
        names: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let n = names.len();
        let mut dense = vec![Rational::zero(); n * n * n];
        let mut explicit = vec![false; n * n * n];
        for (a, b, c, _) in entries {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::InvalidArgument(format!(
                    "bracket index ({}, {}, {}) out of range 1..={n}",
                    a + 1,
                    b + 1,
                    c + 1
                )));
            }
        }
        for (a, b, c, v) in entries {
            let idx = (a * n + b) * n + c;
            dense[idx] = v.clone();
            explicit[idx] = true;
        }
        for (a, b, c, v) in entries {
            let mirror = (b * n + a) * n + c;
            if !explicit[mirror] {
                dense[mirror] = -v.clone();
            }
        }
        Self::new_unchecked(names, dense)
    }

    pub fn from_brackets(
        names: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let alg = Self::from_brackets_unchecked(names, entries)?;
        Self::new(alg.names, alg.dense)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `f[a][b][c]`.
    pub fn structure(&self, a: usize, b: usize, c: usize) -> &Rational {
        let n = self.dim();
        &self.dense[(a * n + b) * n + c]
    }

    pub fn dense(&self) -> &[Rational] {
        &self.dense
    }

    /// Nonzero structure constants with `a < b`, 0-based.
    pub fn upper_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        self.sparse
            .iter()
            .filter(|(a, b, _, _)| a < b)
            .cloned()
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.is_empty()
    }

    pub fn basis_vector(&self, i: usize) -> AlgVector {
        AlgVector::basis(self.dim(), i)
    }

    pub fn bracket<T: Field>(&self, x: &AlgVector<T>, y: &AlgVector<T>) -> Result<AlgVector<T>> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        Ok(AlgVector(self.bracket_raw(&x.0, &y.0)))
    }

    /// Bracket on raw coordinate slices of the right length.
    pub(crate) fn bracket_raw<T: Field>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for (a, b, c, f) in &self.sparse {
            let (xa, yb) = (&x[*a], &y[*b]);
            if xa.is_zero() || yb.is_zero() {
                continue;
            }
            let term = xa.clone() * yb.clone() * T::from_rational(f);
            out[*c] = out[*c].clone() + term;
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate_algebra(self)
    }
}

/// Lists every antisymmetry and Jacobi failure of the structure tensor.
///
/// For an antisymmetric tensor the Jacobi sum is alternating in `(a, b, c)`,
/// so each triple is reported once, at `a <= b <= c`.
pub fn validate_algebra(alg: &LieAlgebra) -> ValidationReport {
    let n = alg.dim();
    let f = |a: usize, b: usize, c: usize| alg.structure(a, b, c);
    let mut report = ValidationReport::default();
    for a in 0..n {
        for b in a..n {
            for c in 0..n {
                if !(f(a, b, c).clone() + f(b, a, c).clone()).is_zero() {
                    report.push(Violation::Antisymmetry { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let residual: Vec<Rational> = (0..n)
                    .map(|d| {
                        (0..n).fold(Rational::zero(), |acc, e| {
                            acc + f(a, b, e) * f(e, c, d)
                                + f(b, c, e) * f(e, a, d)
                                + f(c, a, e) * f(e, b, d)
                        })
                    })
                    .collect();
                if residual.iter().any(|r| !r.is_zero()) {
                    report.push(Violation::Jacobi { a, b, c, residual });
                }
            }
        }
    }
    report
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn named(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn mat(rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
        .expect("rectangular literal")
}

/// The so(3) algebra: `[X1,X2]=X3, [X2,X3]=X1, [X3,X1]=X2`.
pub fn so3() -> LieAlgebra {
    LieAlgebra::from_brackets(
        names("X", 3),
        &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))],
    )
    .expect("so3 is a Lie algebra")
}

/// sl(2) in the basis H, E, F.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::from_brackets(
        named(&["H", "E", "F"]),
        &[(0, 1, 1, int(2)), (0, 2, 2, int(-2)), (1, 2, 0, int(1))],
    )
    .expect("sl2 is a Lie algebra")
}

/// Heisenberg algebra `[P,Q]=Z`.
pub fn heis3() -> LieAlgebra {
    LieAlgebra::from_brackets(named(&["P", "Q", "Z"]), &[(0, 1, 2, int(1))])
        .expect("heis3 is a Lie algebra")
}

/// iso(2): `[Y2,Y3]=Y1, [Y3,Y1]=Y2, [Y1,Y2]=0`.
pub fn iso2() -> LieAlgebra {
    LieAlgebra::from_brackets(names("Y", 3), &[(1, 2, 0, int(1)), (2, 0, 1, int(1))])
        .expect("iso2 is a Lie algebra")
}

pub fn abelian(n: usize) -> Result<LieAlgebra> {
    LieAlgebra::new_unchecked(names("A", n), vec![Rational::zero(); n * n * n])
}

/// Defining 3×3 skew generators, `ρ(X_i)_{jk} = -ε_{ijk}`.
pub fn so3_defining_rep() -> Representation {
    Representation::new(vec![
        mat(&[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]]),
        mat(&[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]]),
        mat(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]),
    ])
}

/// Strictly upper-triangular 3×3 model: P = E12, Q = E23, Z = E13.
pub fn heis3_upper_triangular_rep() -> Representation {
    Representation::new(vec![
        mat(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]),
        mat(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
        mat(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]),
    ])
}

pub fn sl2_defining_rep() -> Representation {
    Representation::new(vec![
        mat(&[&[1, 0], &[0, -1]]),
        mat(&[&[0, 1], &[0, 0]]),
        mat(&[&[0, 0], &[1, 0]]),
    ])
}

/// Affine 3×3 model: Y1, Y2 translations, Y3 the rotation generator.
pub fn iso2_affine_rep() -> Representation {
    Representation::new(vec![
        mat(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]),
        mat(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
        mat(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]),
    ])
}

fn abelian_diagonal_rep(n: usize) -> Representation {
    Representation::new(
        (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(n, n);
                m[(i, i)] = Rational::one();
                m
            })
            .collect(),
    )
}

/// Catalogued algebras: `so3`, `sl2`, `heis3`, `iso2`, `abelian(n)`
/// (also spelled `abelian:n` or `abelianN`). Each comes with a faithful
/// matrix representation.
pub fn builtin(name: &str) -> Result<(LieAlgebra, Option<Representation>)> {
    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "so3" => Ok((so3(), Some(so3_defining_rep()))),
        "sl2" => Ok((sl2(), Some(sl2_defining_rep()))),
        "heis3" => Ok((heis3(), Some(heis3_upper_triangular_rep()))),
        "iso2" => Ok((iso2(), Some(iso2_affine_rep()))),
        _ => {
            let rest = key
                .strip_prefix("abelian")
                .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
            let digits = rest
                .trim_start_matches(['(', ':'])
                .trim_end_matches(')');
            let n: usize = digits
                .parse()
                .map_err(|_| Error::UnknownAlgebra(name.to_string()))?;
            Ok((abelian(n)?, Some(abelian_diagonal_rep(n))))
        }
    }
}

/// Subsets of basis indices whose span is a proper subalgebra, including
/// the empty set.
pub fn coordinate_subalgebras(alg: &LieAlgebra) -> Vec<Vec<usize>> {
    let n = alg.dim();
    assert!(n <= 16, "coordinate subalgebra enumeration is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let closed = idx.iter().all(|&a| {
            idx.iter().all(|&b| {
                (0..n).all(|c| idx.contains(&c) || alg.structure(a, b, c).is_zero())
            })
        });
        if closed {
            out.push(idx);
        }
    }
    out
}

/// A vector-space decomposition `g = h ⊕ n` with exact projectors. No
/// bracket-closure requirement on `h`; see [`SubalgebraSplit`] for that.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSplit {
    h_basis: Vec<AlgVector>,
    n_basis: Vec<AlgVector>,
    /// Columns: `h_basis` then `n_basis`.
    change: Matrix,
    change_inv: Matrix,
    proj_h: Matrix,
    proj_n: Matrix,
}

impl LinearSplit {
    /// Prunes `vectors` to an independent subset spanning `h` and completes
    /// it by greedy pivoting over the standard basis in index order.
    pub fn new(dim: usize, vectors: &[AlgVector]) -> Result<Self> {
        for v in vectors {
            v.check_dim(dim)?;
        }
        let raw: Vec<Vec<Rational>> = vectors.iter().map(|v| v.0.clone()).collect();
        let keep = independent_subset(dim, &raw);
        let h: Vec<AlgVector> = keep.iter().map(|&i| vectors[i].clone()).collect();
        let mut all: Vec<Vec<Rational>> = h.iter().map(|v| v.0.clone()).collect();
        let mut n = Vec::new();
        for i in 0..dim {
            let e = AlgVector::basis(dim, i);
            all.push(e.0.clone());
            if Matrix::from_columns(dim, &all).rank() == all.len() {
                n.push(e);
            } else {
                all.pop();
            }
        }
        Self::from_bases(dim, h, n)
    }

    /// Uses the given bases; fails unless together they form a basis.
    pub fn from_bases(dim: usize, h: Vec<AlgVector>, n: Vec<AlgVector>) -> Result<Self> {
        for v in h.iter().chain(&n) {
            v.check_dim(dim)?;
        }
        if h.len() + n.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "subalgebra and complement bases have {} + {} vectors, need {dim}",
                h.len(),
                n.len()
            )));
        }
        let cols: Vec<Vec<Rational>> = h.iter().chain(&n).map(|v| v.0.clone()).collect();
        let change = Matrix::from_columns(dim, &cols);
        let change_inv = change.inverse().ok_or_else(|| {
            Error::InvalidArgument("subalgebra and complement do not form a basis".into())
        })?;
        let k = h.len();
        let mut sel_h = Matrix::zeros(dim, dim);
        let mut sel_n = Matrix::zeros(dim, dim);
        for i in 0..dim {
            if i < k {
                sel_h[(i, i)] = Rational::one();
            } else {
                sel_n[(i, i)] = Rational::one();
            }
        }
        let proj_h = change.mul(&sel_h).mul(&change_inv);
        let proj_n = change.mul(&sel_n).mul(&change_inv);
        Ok(Self {
            h_basis: h,
            n_basis: n,
            change,
            change_inv,
            proj_h,
            proj_n,
        })
    }

    pub fn dim(&self) -> usize {
        self.change.rows()
    }

    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    pub fn h_basis(&self) -> &[AlgVector] {
        &self.h_basis
    }

    pub fn n_basis(&self) -> &[AlgVector] {
        &self.n_basis
    }

    pub fn proj_h(&self) -> &Matrix {
        &self.proj_h
    }

    pub fn proj_n(&self) -> &Matrix {
        &self.proj_n
    }

    pub fn project_h<T: Field>(&self, x: &AlgVector<T>) -> AlgVector<T> {
        AlgVector(apply_rational(&self.proj_h, &x.0))
    }

    /// Canonical representative of `x + h`: the complement component.
    pub fn coset_reduce<T: Field>(&self, x: &AlgVector<T>) -> AlgVector<T> {
        AlgVector(apply_rational(&self.proj_n, &x.0))
    }

    /// Whether `x` lies in `h`.
    pub fn contains_h(&self, x: &AlgVector) -> bool {
        self.coset_reduce(x).is_zero()
    }

    /// Coordinates of `x` in the `h_basis` (the `h`-component of `x`).
    pub fn h_coords(&self, x: &AlgVector) -> Vec<Rational> {
        let full = self.change_inv.mul_vec(&x.0);
        full[..self.h_dim()].to_vec()
    }

    /// Coordinates of `x` in the `n_basis` (the complement component).
    pub fn n_coords(&self, x: &AlgVector) -> Vec<Rational> {
        let full = self.change_inv.mul_vec(&x.0);
        full[self.h_dim()..].to_vec()
    }
}

/// `m · v` with a rational matrix acting on a vector over any field.
pub(crate) fn apply_rational<T: Field>(m: &Matrix, v: &[T]) -> Vec<T> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(T::zero(), |acc, (a, b)| acc + T::from_rational(a) * b.clone())
        })
        .collect()
}

/// `g = h ⊕ n` where `h` is a subalgebra.
#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraSplit {
    linear: LinearSplit,
}

impl std::ops::Deref for SubalgebraSplit {
    type Target = LinearSplit;
    fn deref(&self) -> &LinearSplit {
        &self.linear
    }
}

impl SubalgebraSplit {
    /// Same as [`span_subalgebra`] but with an explicit complement basis.
    pub fn with_complement(
        alg: &LieAlgebra,
        h_vectors: &[AlgVector],
        n_vectors: &[AlgVector],
    ) -> Result<Self> {
        let linear = LinearSplit::from_bases(alg.dim(), h_vectors.to_vec(), n_vectors.to_vec())?;
        check_closure(alg, &linear.h_basis, &(0..linear.h_dim()).collect::<Vec<_>>())?;
        Ok(Self { linear })
    }

    pub fn linear(&self) -> &LinearSplit {
        &self.linear
    }

    /// Split with `h = g` (empty complement).
    pub fn full(alg: &LieAlgebra) -> Self {
        let basis: Vec<AlgVector> = (0..alg.dim()).map(|i| alg.basis_vector(i)).collect();
        span_subalgebra(alg, &basis).expect("g is a subalgebra of itself")
    }
}

fn check_closure(alg: &LieAlgebra, h: &[AlgVector], original_index: &[usize]) -> Result<()> {
    let raw: Vec<Vec<Rational>> = h.iter().map(|v| v.0.clone()).collect();
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            let br = alg.bracket(&h[i], &h[j])?;
            if !in_span(alg.dim(), &raw, &br.0) {
                return Err(Error::NotASubalgebra {
                    witness: (original_index[i], original_index[j]),
                    bracket: br,
                });
            }
        }
    }
    Ok(())
}

/// Checks that `vectors` span a subalgebra `h` and picks a complement by
/// greedy pivoting over the standard basis. Dependent inputs are pruned;
/// the witness in [`Error::NotASubalgebra`] indexes the original list.
pub fn span_subalgebra(alg: &LieAlgebra, vectors: &[AlgVector]) -> Result<SubalgebraSplit> {
    for v in vectors {
        v.check_dim(alg.dim())?;
    }
    let raw: Vec<Vec<Rational>> = vectors.iter().map(|v| v.0.clone()).collect();
    let keep = independent_subset(alg.dim(), &raw);
    let h: Vec<AlgVector> = keep.iter().map(|&i| vectors[i].clone()).collect();
    check_closure(alg, &h, &keep)?;
    Ok(SubalgebraSplit {
        linear: LinearSplit::new(alg.dim(), vectors)?,
    })
}

/// Free-function form of [`LinearSplit::coset_reduce`].
pub fn coset_reduce<T: Field>(split: &LinearSplit, x: &AlgVector<T>) -> AlgVector<T> {
    split.coset_reduce(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    #[test]
    fn so3_brackets() {
        let g = so3();
        assert_eq!(g.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(), v(&[0, 0, 1]));
        assert_eq!(g.bracket(&v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(), v(&[1, 0, 0]));
        assert_eq!(g.bracket(&v(&[0, 0, 1]), &v(&[1, 0, 0])).unwrap(), v(&[0, 1, 0]));
        let x = v(&[3, -1, 2]);
        assert!(g.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn heis3_bilinear_expansion() {
        // [2P + Q, Q] = 2[P, Q] + [Q, Q] = 2Z
        let g = heis3();
        assert_eq!(g.bracket(&v(&[2, 1, 0]), &v(&[0, 1, 0])).unwrap(), v(&[0, 0, 2]));
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let err = so3().bracket(&v(&[1, 0]), &v(&[0, 1, 0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn catalogue_is_valid() {
        for name in ["so3", "sl2", "heis3", "iso2", "abelian(4)", "abelian:2"] {
            let (g, rep) = builtin(name).unwrap();
            assert!(g.validate().is_valid(), "{name}");
            assert!(rep.is_some());
        }
        let (a4, _) = builtin("abelian(4)").unwrap();
        assert_eq!(a4.dim(), 4);
        assert!(a4.dense().iter().all(Zero::is_zero));
        assert!(matches!(builtin("e8"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn iso2_constants() {
        let g = iso2();
        assert_eq!(g.bracket(&v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(), v(&[1, 0, 0]));
        assert_eq!(g.bracket(&v(&[0, 0, 1]), &v(&[1, 0, 0])).unwrap(), v(&[0, 1, 0]));
        assert!(g.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry_violation_reported() {
        let alg = LieAlgebra::from_brackets_unchecked(
            names("X", 3),
            &[(0, 1, 2, int(1)), (1, 0, 2, int(1))],
        )
        .unwrap();
        let report = validate_algebra(&alg);
        assert!(report
            .violations
            .contains(&Violation::Antisymmetry { a: 0, b: 1, c: 2 }));
        assert_eq!(report.violations[0].to_string(), "antisymmetry violated at (1, 2, 3)");
    }

    #[test]
    fn jacobi_matches_brute_force() {
        // [X1,X2]=X1, [X1,X3]=X1, [X2,X3]=0
        let alg = LieAlgebra::from_brackets_unchecked(
            names("X", 3),
            &[(0, 1, 0, int(1)), (0, 2, 0, int(1))],
        )
        .unwrap();
        let n = 3;
        let f = |a, b, c| alg.structure(a, b, c).clone();
        let mut brute_failures = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = Rational::zero();
                        for e in 0..n {
                            s = s + f(a, b, e) * f(e, c, d)
                                + f(b, c, e) * f(e, a, d)
                                + f(c, a, e) * f(e, b, d);
                        }
                        if !s.is_zero() {
                            brute_failures += 1;
                        }
                    }
                }
            }
        }
        let report = validate_algebra(&alg);
        assert_eq!(brute_failures == 0, report.is_valid());
        assert!(report.is_valid());
    }

    #[test]
    fn jacobi_violation_detected() {
        // [X1,X2]=X2, [X1,X3]=X3, [X2,X3]=X1: the cyclic sum of
        // [[X1,X2],X3] is 2 X1.
        let alg = LieAlgebra::from_brackets_unchecked(
            names("X", 3),
            &[(0, 1, 1, int(1)), (0, 2, 2, int(1)), (1, 2, 0, int(1))],
        )
        .unwrap();
        let report = validate_algebra(&alg);
        assert!(!report.is_valid());
        assert_eq!(
            report.violations,
            vec![Violation::Jacobi {
                a: 0,
                b: 1,
                c: 2,
                residual: vec![int(2), int(0), int(0)]
            }]
        );
    }

    #[test]
    fn so3_split_at_x3() {
        let g = so3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        assert_eq!(split.n_basis(), &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert_eq!(split.coset_reduce(&v(&[0, 0, 1])), v(&[0, 0, 0]));
        assert_eq!(split.coset_reduce(&v(&[1, 0, 5])), v(&[1, 0, 0]));
        let sum = split.proj_h().add(split.proj_n());
        assert_eq!(sum, Matrix::identity(3));
        assert_eq!(split.proj_h().mul(split.proj_h()), *split.proj_h());
        assert_eq!(split.proj_n().mul(split.proj_n()), *split.proj_n());
    }

    #[test]
    fn so3_x1_x2_is_not_a_subalgebra() {
        let err = span_subalgebra(&so3(), &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap_err();
        assert_eq!(
            err,
            Error::NotASubalgebra {
                witness: (0, 1),
                bracket: v(&[0, 0, 1])
            }
        );
    }

    #[test]
    fn zero_and_full_splits() {
        let g = heis3();
        let zero = span_subalgebra(&g, &[]).unwrap();
        assert_eq!(zero.h_dim(), 0);
        assert_eq!(zero.n_basis().len(), 3);
        assert_eq!(*zero.proj_n(), Matrix::identity(3));
        let full = SubalgebraSplit::full(&g);
        assert_eq!(full.h_dim(), 3);
        assert!(full.proj_n().is_zero());
    }

    #[test]
    fn heis3_split_at_z() {
        let split = span_subalgebra(&heis3(), &[v(&[0, 0, 1])]).unwrap();
        assert_eq!(split.coset_reduce(&v(&[1, 1, 1])), v(&[1, 1, 0]));
    }

    #[test]
    fn dependent_input_is_pruned() {
        let g = sl2();
        let split = span_subalgebra(&g, &[v(&[1, 0, 0]), v(&[2, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(split.h_dim(), 2);
        assert_eq!(split.n_basis(), &[v(&[0, 0, 1])]);
        let witness = span_subalgebra(&g, &[v(&[0, 1, 0]), v(&[0, 2, 0]), v(&[0, 0, 1])])
            .unwrap_err();
        assert!(matches!(witness, Error::NotASubalgebra { witness: (0, 2), .. }));
    }

    #[test]
    fn non_coordinate_subalgebra() {
        let g = sl2();
        // H + E spans a 1-dimensional subalgebra.
        let split = span_subalgebra(&g, &[v(&[1, 1, 0])]).unwrap();
        // Greedy completion keeps H, skips E, keeps F.
        assert_eq!(split.n_basis(), &[v(&[1, 0, 0]), v(&[0, 0, 1])]);
        let x = AlgVector(vec![ratio(1, 2), int(3), int(1)]);
        // x = 3 (H + E) - 5/2 H + F
        assert_eq!(split.h_coords(&x), vec![int(3)]);
        assert_eq!(split.n_coords(&x), vec![ratio(-5, 2), int(1)]);
        assert_eq!(split.coset_reduce(&x), AlgVector(vec![ratio(-5, 2), int(0), int(1)]));
    }

    #[test]
    fn coordinate_subalgebra_catalogue() {
        assert_eq!(
            coordinate_subalgebras(&so3()),
            vec![vec![], vec![0], vec![1], vec![2]]
        );
        let heis = coordinate_subalgebras(&heis3());
        assert!(heis.contains(&vec![0, 2]));
        assert!(!heis.contains(&vec![0, 1]));
    }
}
