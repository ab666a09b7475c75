//! Truncated polynomials in ε (jets) with algebra- or matrix-valued
//! coefficients. A jet of truncation order `N` keeps the coefficients of
//! ε⁰ … ε^{N-1}; everything at degree `N` and above is discarded.

use crate::algebra::{AlgVector, LieAlgebra, LinearSplit};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};

/// An algebra-valued jet `Σ_{ℓ<trunc} ε^ℓ c_ℓ`.
///
/// Trailing zero coefficients are trimmed, so the zero jet has no
/// coefficients and structural equality is coefficient-wise equality.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsPoly<T = Rational> {
    dim: usize,
    trunc: usize,
    coeffs: Vec<AlgVector<T>>,
}

impl<T: Field> EpsPoly<T> {
    pub fn zero(dim: usize, trunc: usize) -> Self {
        Self {
            dim,
            trunc,
            coeffs: Vec::new(),
        }
    }

    /// Coefficients at degree `>= trunc` are dropped.
    pub fn new(dim: usize, trunc: usize, coeffs: Vec<AlgVector<T>>) -> Result<Self> {
        for c in &coeffs {
            c.check_dim(dim)?;
        }
        let mut p = Self { dim, trunc, coeffs };
        p.normalize();
        Ok(p)
    }

    /// The constant jet `x`.
    pub fn constant(x: AlgVector<T>, trunc: usize) -> Self {
        let dim = x.dim();
        Self::monomial(x, 0, trunc).unwrap_or_else(|| Self::zero(dim, trunc))
    }

    /// `ε^degree · x`, or `None` if that is truncated away entirely.
    pub fn monomial(x: AlgVector<T>, degree: usize, trunc: usize) -> Option<Self> {
        let dim = x.dim();
        if degree >= trunc {
            return None;
        }
        let mut coeffs = vec![AlgVector::zero(dim); degree];
        coeffs.push(x);
        let mut p = Self { dim, trunc, coeffs };
        p.normalize();
        Some(p)
    }

    fn normalize(&mut self) {
        self.coeffs.truncate(self.trunc);
        while self.coeffs.last().is_some_and(AlgVector::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Stored coefficients, without trailing zeros.
    pub fn coeffs(&self) -> &[AlgVector<T>] {
        &self.coeffs
    }

    /// Coefficient of `ε^l` (zero past the stored range).
    pub fn coeff(&self, l: usize) -> AlgVector<T> {
        self.coeffs
            .get(l)
            .cloned()
            .unwrap_or_else(|| AlgVector::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest stored degree; `None` for the zero jet.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest degree with a nonzero coefficient; `None` for the zero jet.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates to a lower order.
    pub fn truncate(&self, trunc: usize) -> Self {
        let mut p = self.clone();
        p.trunc = trunc.min(self.trunc);
        p.normalize();
        p
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&AlgVector<T>, &AlgVector<T>) -> AlgVector<T>) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|l| f(&self.coeff(l), &other.coeff(l))).collect();
        let mut p = Self {
            dim: self.dim,
            trunc: self.trunc,
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn negate(&self) -> Self {
        Self {
            dim: self.dim,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut p = Self {
            dim: self.dim,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        };
        p.normalize();
        p
    }

    /// Horner evaluation of the stored coefficients at `eps`.
    pub fn eval_at(&self, eps: &T) -> AlgVector<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(AlgVector::zero(self.dim), |acc, c| &acc.scale(eps) + c)
    }

    /// Multiplication by `ε^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![AlgVector::zero(self.dim); k];
        coeffs.extend(self.coeffs.iter().cloned());
        let mut p = Self {
            dim: self.dim,
            trunc: self.trunc,
            coeffs,
        };
        p.normalize();
        p
    }

    /// Applies a rational matrix to every coefficient.
    pub fn map_linear(&self, m: &Matrix) -> Self {
        let mut p = Self {
            dim: m.rows(),
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| AlgVector(crate::algebra::apply_rational(m, &c.0)))
                .collect(),
        };
        p.normalize();
        p
    }
}

impl EpsPoly<Rational> {
    pub fn to_f64(&self) -> EpsPoly<f64> {
        EpsPoly {
            dim: self.dim,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(AlgVector::to_f64).collect(),
        }
    }
}

/// Pointwise bracket of jets: the Cauchy convolution
/// `r_m = Σ_{i+j=m} [p_i, q_j]`, truncated.
pub fn bracket_poly<T: Field>(alg: &LieAlgebra, p: &EpsPoly<T>, q: &EpsPoly<T>) -> Result<EpsPoly<T>> {
    p.check_compatible(q)?;
    if p.dim != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: p.dim,
        });
    }
    Ok(bracket_poly_raw(alg, p, q))
}

pub(crate) fn bracket_poly_raw<T: Field>(alg: &LieAlgebra, p: &EpsPoly<T>, q: &EpsPoly<T>) -> EpsPoly<T> {
    let trunc = p.trunc.min(q.trunc);
    let len = (p.coeffs.len() + q.coeffs.len()).saturating_sub(1).min(trunc);
    let mut out = vec![vec![T::zero(); p.dim]; len];
    for (i, pi) in p.coeffs.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.coeffs.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if qj.is_zero() {
                continue;
            }
            let br = alg.bracket_raw(&pi.0, &qj.0);
            for (o, b) in out[i + j].iter_mut().zip(br) {
                *o = o.clone() + b;
            }
        }
    }
    let mut r = EpsPoly {
        dim: p.dim,
        trunc,
        coeffs: out.into_iter().map(AlgVector).collect(),
    };
    r.normalize();
    r
}

/// Whether the jet passes through `h`: `p_0 ∈ h`.
pub fn jet_in_gamma_h(split: &LinearSplit, p: &EpsPoly) -> bool {
    split.contains_h(&p.coeff(0))
}

/// Whether the jet lies in `ε^k Γ(g)_h`: `p_0 = … = p_{k-1} = 0` and
/// `p_k ∈ h`.
pub fn jet_in_eps_k_gamma_h(split: &LinearSplit, p: &EpsPoly, k: usize) -> Result<bool> {
    if k >= p.trunc() {
        return Err(Error::InvalidArgument(format!(
            "ideal level {k} must be below the truncation order {}",
            p.trunc()
        )));
    }
    Ok((0..k).all(|l| p.coeff(l).is_zero()) && split.contains_h(&p.coeff(k)))
}

/// A matrix-valued jet `Σ_{ℓ<trunc} ε^ℓ M_ℓ` of square `size × size`
/// matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatEpsPoly<T = Rational> {
    size: usize,
    trunc: usize,
    coeffs: Vec<Matrix<T>>,
}

impl<T: Field> MatEpsPoly<T> {
    pub fn zero(size: usize, trunc: usize) -> Self {
        Self {
            size,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(size: usize, trunc: usize) -> Self {
        let mut p = Self {
            size,
            trunc,
            coeffs: vec![Matrix::identity(size)],
        };
        p.normalize();
        p
    }

    pub fn new(size: usize, trunc: usize, coeffs: Vec<Matrix<T>>) -> Result<Self> {
        for c in &coeffs {
            if c.rows() != size || c.cols() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: if c.rows() != size { c.rows() } else { c.cols() },
                });
            }
        }
        let mut p = Self { size, trunc, coeffs };
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        self.coeffs.truncate(self.trunc);
        while self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> Matrix<T> {
        self.coeffs
            .get(l)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.size, self.size))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                found: other.size,
            });
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|l| self.coeff(l).add(&other.coeff(l))).collect();
        Self::new(self.size, self.trunc, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|l| self.coeff(l).sub(&other.coeff(l))).collect();
        Self::new(self.size, self.trunc, coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut p = Self {
            size: self.size,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        };
        p.normalize();
        p
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = (self.coeffs.len() + other.coeffs.len())
            .saturating_sub(1)
            .min(self.trunc);
        let mut out = vec![Matrix::zeros(self.size, self.size); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.size, self.trunc, out)
    }

    /// Applies the matrix jet to a vector jet: `(M·p)_m = Σ_{i+j=m} M_i p_j`.
    pub fn apply(&self, p: &EpsPoly<T>) -> Result<EpsPoly<T>> {
        if p.dim() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                found: p.dim(),
            });
        }
        let trunc = p.trunc();
        let len = (self.coeffs.len() + p.coeffs().len())
            .saturating_sub(1)
            .min(trunc);
        let mut out = vec![vec![T::zero(); self.size]; len];
        for (i, m) in self.coeffs.iter().enumerate() {
            for (j, v) in p.coeffs().iter().enumerate() {
                if i + j >= len {
                    break;
                }
                for (o, x) in out[i + j].iter_mut().zip(m.mul_vec(&v.0)) {
                    *o = o.clone() + x;
                }
            }
        }
        EpsPoly::new(self.size, trunc, out.into_iter().map(AlgVector).collect())
    }

    pub fn eval_at(&self, eps: &T) -> Matrix<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(self.size, self.size), |acc, c| acc.scale(eps).add(c))
    }

    /// Whether the constant coefficient is the identity.
    pub fn has_identity_constant(&self) -> bool {
        crate::linalg::is_identity(&self.coeff(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelian, so3, span_subalgebra};
    use crate::scalar::{int, ratio};

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    fn jet(trunc: usize, cs: &[&[i64]]) -> EpsPoly {
        EpsPoly::new(cs[0].len(), trunc, cs.iter().map(|c| v(c)).collect()).unwrap()
    }

    #[test]
    fn horner_evaluation() {
        let p = jet(4, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(p.eval_at(&int(1)), v(&[1, 1, 0]));
        assert_eq!(p.eval_at(&ratio(1, 2)), AlgVector(vec![ratio(1, 2), ratio(1, 4), int(0)]));
    }

    #[test]
    fn add_negate_scale() {
        let p = jet(4, &[&[1, 2, 3], &[0, -1, 0]]);
        assert!(p.add(&p.negate()).unwrap().is_zero());
        let e = jet(3, &[&[0, 0, 0], &[1, 0, 0]]);
        let half = e.scale(&ratio(1, 2));
        assert_eq!(half.coeff(1), AlgVector(vec![ratio(1, 2), int(0), int(0)]));
        assert_eq!(
            p.add(&jet(3, &[&[1, 0, 0]])),
            Err(Error::TruncationMismatch { left: 4, right: 3 })
        );
    }

    #[test]
    fn zero_is_canonical() {
        let z = jet(3, &[&[0, 0, 0], &[0, 0, 0]]);
        assert!(z.coeffs().is_empty());
        assert_eq!(z, EpsPoly::zero(3, 3));
    }

    #[test]
    fn so3_bracket_of_rescaled_generators() {
        let g = so3();
        let p = jet(3, &[&[0, 0, 0], &[1, 0, 0]]);
        let q = jet(3, &[&[0, 0, 0], &[0, 1, 0]]);
        assert_eq!(bracket_poly(&g, &p, &q).unwrap(), jet(3, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]));
        // Truncated away at trunc 2.
        assert!(bracket_poly(&g, &p.truncate(2), &q.truncate(2)).unwrap().is_zero());
    }

    #[test]
    fn so3_convolution_by_hand() {
        // [X3 + εX1, X3] = ε[X1, X3] = -ε X2
        let g = so3();
        let p = jet(3, &[&[0, 0, 1], &[1, 0, 0]]);
        let q = jet(3, &[&[0, 0, 1]]);
        assert_eq!(bracket_poly(&g, &p, &q).unwrap(), jet(3, &[&[0, 0, 0], &[0, -1, 0]]));
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let g = abelian(3).unwrap();
        let p = jet(3, &[&[1, 2, 3], &[4, 5, 6]]);
        let q = jet(3, &[&[7, 8, 9], &[1, 0, 1]]);
        assert!(bracket_poly(&g, &p, &q).unwrap().is_zero());
    }

    #[test]
    fn shifts() {
        assert_eq!(jet(4, &[&[1, 0, 0]]).shift(2), jet(4, &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]));
        assert!(EpsPoly::<Rational>::zero(3, 4).shift(3).is_zero());
        assert_eq!(
            jet(4, &[&[0, 0, 0], &[0, 1, 0]]).shift(1),
            jet(4, &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]])
        );
        assert!(jet(3, &[&[1, 0, 0]]).shift(3).is_zero());
    }

    #[test]
    fn gamma_h_membership() {
        let g = so3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        assert!(jet_in_gamma_h(&split, &jet(3, &[&[0, 0, 1], &[1, 0, 0]])));
        assert!(!jet_in_gamma_h(&split, &jet(3, &[&[1, 0, 0]])));
        let p = jet(5, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert!(jet_in_eps_k_gamma_h(&split, &p, 2).unwrap());
        assert!(!jet_in_eps_k_gamma_h(&split, &p, 3).unwrap());
        assert!(jet_in_eps_k_gamma_h(&split, &p, 5).is_err());
    }

    #[test]
    fn matrix_jets() {
        let a = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        let m = MatEpsPoly::new(2, 3, vec![Matrix::zeros(2, 2), a.clone()]).unwrap();
        // (εA)² = ε²A² = 0
        assert!(m.mul(&m).unwrap().is_zero());
        let id = MatEpsPoly::identity(2, 3);
        assert_eq!(id.mul(&m).unwrap(), m);
        assert_eq!(m.eval_at(&int(2)), a.scale(&int(2)));
        let p = EpsPoly::constant(AlgVector::from_ints(&[0, 1]), 3);
        assert_eq!(m.apply(&p).unwrap().coeff(1), AlgVector::from_ints(&[1, 0]));
    }
}
