//! Contraction families φ_ε = Σ_j ε^j Φ_j, the conjugated bracket
//! `[X,Y]_ε = φ_ε⁻¹[φ_ε X, φ_ε Y]` and its ε → 0 limit.
//!
//! φ_ε⁻¹ is never formed numerically. Each family carries its determinant
//! `D(ε)` and the polynomial matrix `D(ε)·φ_ε⁻¹`, both obtained by
//! fraction-free Gauss–Jordan elimination over ℚ[ε]. Solving φ_ε w = r is
//! then a polynomial product followed by division by `D`, and a pole at
//! ε = 0 shows up as an exact negative valuation.

use num_traits::{One, Zero};

use crate::algebra::{AlgVector, LieAlgebra, LinearSplit, SubalgebraSplit};
use crate::eps_poly::{bracket_poly, EpsPoly, MatEpsPoly};
use crate::error::{Error, PoleError, Result};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::scalar::{int, ratio, Rational};

/// Largest accepted polynomial degree of a family.
pub const MAX_FAMILY_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionFamily {
    phis: Vec<Matrix>,
    det: Poly,
    /// `det · φ_ε⁻¹`, entrywise polynomial.
    scaled_inverse: Vec<Vec<Poly>>,
}

impl ContractionFamily {
    pub fn new(phis: Vec<Matrix>) -> Result<Self> {
        let first = phis
            .first()
            .ok_or_else(|| Error::InvalidArgument("family needs at least one matrix".into()))?;
        let n = first.rows();
        if n == 0 {
            return Err(Error::InvalidArgument("family matrices are empty".into()));
        }
        for m in &phis {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidArgument(format!(
                    "family matrices must all be {n}x{n}, found {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if phis.len() > MAX_FAMILY_DEGREE + 1 {
            return Err(Error::InvalidArgument(format!(
                "family degree {} exceeds {MAX_FAMILY_DEGREE}",
                phis.len() - 1
            )));
        }
        let (det, scaled_inverse) = fraction_free_inverse(&phis)?;
        for eps in [int(1), ratio(1, 2), ratio(1, 3)] {
            if det.eval(&eps).is_zero() {
                log::warn!("phi_eps is singular at eps = {eps}");
            }
        }
        Ok(Self {
            phis,
            det,
            scaled_inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Matrix::identity(n)]).expect("identity family is invertible")
    }

    /// φ_ε = P_h + ε P_n for any vector-space split, subalgebra or not.
    pub fn from_linear_split(split: &LinearSplit) -> Result<Self> {
        Self::new(vec![split.proj_h().clone(), split.proj_n().clone()])
    }

    pub fn dim(&self) -> usize {
        self.phis[0].rows()
    }

    pub fn degree(&self) -> usize {
        self.phis.len() - 1
    }

    pub fn phis(&self) -> &[Matrix] {
        &self.phis
    }

    /// Coefficients of `det φ_ε` (up to a sign fixed by row pivoting).
    pub fn det_coeffs(&self) -> &[Rational] {
        self.det.coeffs()
    }

    /// Order of vanishing of `det φ_ε` at ε = 0.
    pub fn det_valuation(&self) -> usize {
        self.det.valuation().expect("det is not identically zero")
    }

    pub fn eval_at(&self, eps: &Rational) -> Matrix {
        self.as_mat_poly(self.phis.len()).eval_at(eps)
    }

    pub fn as_mat_poly(&self, trunc: usize) -> MatEpsPoly {
        MatEpsPoly::new(self.dim(), trunc, self.phis.clone()).expect("square family")
    }

    /// Jet truncation at which `[φ_ε x, φ_ε y]` is exact for constant x, y.
    fn exact_bracket_trunc(&self) -> usize {
        2 * self.degree() + 1
    }
}

fn fraction_free_inverse(phis: &[Matrix]) -> Result<(Poly, Vec<Vec<Poly>>)> {
    let n = phis[0].rows();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        Poly::new(phis.iter().map(|p| p[(i, j)].clone()).collect())
                    } else if j - n == i {
                        Poly::constant(Rational::one())
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = Poly::constant(Rational::one());
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by_key(|&i| m[i][k].degree())
            .ok_or(Error::SingularFamily)?;
        m.swap(k, pivot);
        for i in 0..n {
            if i == k {
                continue;
            }
            let mik = m[i][k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let num = m[k][k].mul(&m[i][j]).sub(&mik.mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).ok_or_else(|| {
                    Error::InternalInvariantViolation("inexact fraction-free division".into())
                })?;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = prev;
    if m.iter().enumerate().any(|(i, row)| row[i] != det) {
        return Err(Error::InternalInvariantViolation(
            "fraction-free elimination left unequal pivots".into(),
        ));
    }
    let inv = m.into_iter().map(|row| row[n..].to_vec()).collect();
    Ok((det, inv))
}

/// φ_ε = P_h + ε P_n.
pub fn iw_family(split: &SubalgebraSplit) -> ContractionFamily {
    ContractionFamily::from_linear_split(split.linear()).expect("IW family is invertible for eps != 0")
}

/// The jet `φ_ε · p(ε)`, truncated at `p`'s order.
pub fn apply_family(fam: &ContractionFamily, p: &EpsPoly) -> Result<EpsPoly> {
    fam.as_mat_poly(p.trunc()).apply(p)
}

/// Solves `φ_ε w(ε) = r(ε)` over ℚ(ε), treating the stored coefficients of
/// `r` as an exact polynomial, and returns the Taylor jet of `w` through
/// ε^order. Any component of `w` with a pole at 0 yields a [`PoleError`].
pub fn invert_family_apply(fam: &ContractionFamily, r: &EpsPoly, order: usize) -> Result<EpsPoly> {
    if order >= r.trunc() {
        return Err(Error::InvalidArgument(format!(
            "order {order} must be below the jet truncation {}",
            r.trunc()
        )));
    }
    invert_exact(fam, r, order)
}

fn invert_exact(fam: &ContractionFamily, r: &EpsPoly, order: usize) -> Result<EpsPoly> {
    let n = fam.dim();
    if r.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.dim(),
        });
    }
    let components: Vec<Poly> = (0..n)
        .map(|j| Poly::new(r.coeffs().iter().map(|c| c.0[j].clone()).collect()))
        .collect();
    let numerators: Vec<Poly> = fam
        .scaled_inverse
        .iter()
        .map(|row| {
            row.iter()
                .zip(&components)
                .fold(Poly::zero(), |acc, (a, c)| acc.add(&a.mul(c)))
        })
        .collect();
    let v = fam.det_valuation();
    let worst = numerators
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.valuation().map(|val| (val as i64 - v as i64, i)))
        .min_by_key(|&(val, i)| (val, i));
    if let Some((val, component)) = worst {
        if val < 0 {
            return Err(PoleError {
                valuation: val,
                component,
                pair: None,
            }
            .into());
        }
    }
    let unit_inverse = fam.det.shift_down(v).series_inverse(order + 1);
    let mut coeffs = vec![vec![Rational::zero(); n]; order + 1];
    for (i, num) in numerators.iter().enumerate() {
        let reduced = num.shift_down(v);
        for (m, slot) in coeffs.iter_mut().enumerate() {
            let mut s = Rational::zero();
            for j in 0..=m {
                let a = reduced.coeff(j);
                if !a.is_zero() {
                    s += a * &unit_inverse[m - j];
                }
            }
            slot[i] = s;
        }
    }
    EpsPoly::new(n, order + 1, coeffs.into_iter().map(AlgVector).collect())
}

fn check_family(alg: &LieAlgebra, fam: &ContractionFamily) -> Result<()> {
    if fam.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: fam.dim(),
        });
    }
    Ok(())
}

/// Jet of `[x, y]_ε = φ_ε⁻¹[φ_ε x, φ_ε y]` through ε^order.
pub fn eps_bracket(
    alg: &LieAlgebra,
    fam: &ContractionFamily,
    x: &AlgVector,
    y: &AlgVector,
    order: usize,
) -> Result<EpsPoly> {
    if order < 1 {
        return Err(Error::InvalidArgument("eps_bracket needs order >= 1".into()));
    }
    eps_bracket_jet(alg, fam, x, y, order)
}

fn eps_bracket_jet(
    alg: &LieAlgebra,
    fam: &ContractionFamily,
    x: &AlgVector,
    y: &AlgVector,
    order: usize,
) -> Result<EpsPoly> {
    check_family(alg, fam)?;
    x.check_dim(alg.dim())?;
    y.check_dim(alg.dim())?;
    let trunc = fam.exact_bracket_trunc().max(order + 1);
    let fx = apply_family(fam, &EpsPoly::constant(x.clone(), trunc))?;
    let fy = apply_family(fam, &EpsPoly::constant(y.clone(), trunc))?;
    let r = bracket_poly(alg, &fx, &fy)?;
    invert_exact(fam, &r, order)
}

/// The limit bracket `[·,·]_0`, verified to be a Lie bracket.
pub fn contract(alg: &LieAlgebra, fam: &ContractionFamily) -> Result<LieAlgebra> {
    check_family(alg, fam)?;
    let n = alg.dim();
    let mut dense = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in a + 1..n {
            let jet = eps_bracket_jet(alg, fam, &alg.basis_vector(a), &alg.basis_vector(b), 0)
                .map_err(|e| match e {
                    Error::Pole(p) => Error::Pole(PoleError {
                        pair: Some((a, b)),
                        ..p
                    }),
                    other => other,
                })?;
            let limit = jet.coeff(0);
            for (c, v) in limit.0.into_iter().enumerate() {
                dense[(a * n + b) * n + c] = v.clone();
                dense[(b * n + a) * n + c] = -v;
            }
        }
    }
    let limit = LieAlgebra::new_unchecked(alg.names().to_vec(), dense)?;
    let report = limit.validate();
    if !report.is_valid() {
        return Err(Error::InternalInvariantViolation(format!(
            "contracted bracket is not a Lie bracket: {report}"
        )));
    }
    Ok(limit)
}

/// İnönü–Wigner limit computed directly:
/// `[X,Y]_0 = [X_h, Y_h] + P_n([X_h, Y_n] + [X_n, Y_h])`.
pub fn iw_contract_closed_form(alg: &LieAlgebra, split: &SubalgebraSplit) -> LieAlgebra {
    let n = alg.dim();
    let br = |x: &AlgVector, y: &AlgVector| alg.bracket(x, y).expect("dimensions agree");
    let mut dense = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (alg.basis_vector(a), alg.basis_vector(b));
            let (xh, xn) = (split.project_h(&x), split.coset_reduce(&x));
            let (yh, yn) = (split.project_h(&y), split.coset_reduce(&y));
            let mixed = &br(&xh, &yn) + &br(&xn, &yh);
            let value = &br(&xh, &yh) + &split.coset_reduce(&mixed);
            for (c, v) in value.0.into_iter().enumerate() {
                dense[(a * n + b) * n + c] = v;
            }
        }
    }
    LieAlgebra::new_unchecked(alg.names().to_vec(), dense).expect("same shape as the input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{heis3, iso2, so3, sl2, span_subalgebra, LinearSplit};

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    fn mono(x: &[i64], deg: usize, trunc: usize) -> EpsPoly {
        EpsPoly::monomial(v(x), deg, trunc).unwrap()
    }

    fn diag(d: &[i64]) -> Matrix {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = int(x);
        }
        m
    }

    fn so3_x3() -> (LieAlgebra, ContractionFamily) {
        let g = so3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        let fam = iw_family(&split);
        (g, fam)
    }

    #[test]
    fn iw_family_matrices() {
        let (_, fam) = so3_x3();
        assert_eq!(fam.phis(), &[diag(&[0, 0, 1]), diag(&[1, 1, 0])]);
        assert_eq!(fam.degree(), 1);
        let g = so3();
        let full = iw_family(&SubalgebraSplit::full(&g));
        assert_eq!(full.phis(), &[Matrix::identity(3), Matrix::zeros(3, 3)]);
        let zero = iw_family(&span_subalgebra(&g, &[]).unwrap());
        assert_eq!(zero.phis(), &[Matrix::zeros(3, 3), Matrix::identity(3)]);
    }

    #[test]
    fn apply_family_rescales_complement() {
        let (_, fam) = so3_x3();
        let c = |x: &[i64]| EpsPoly::constant(v(x), 3);
        assert_eq!(apply_family(&fam, &c(&[1, 0, 0])).unwrap(), mono(&[1, 0, 0], 1, 3));
        assert_eq!(apply_family(&fam, &c(&[0, 0, 1])).unwrap(), c(&[0, 0, 1]));
        let both = apply_family(&fam, &c(&[1, 0, 1])).unwrap();
        assert_eq!(both.coeff(0), v(&[0, 0, 1]));
        assert_eq!(both.coeff(1), v(&[1, 0, 0]));
    }

    #[test]
    fn inverse_keeps_unrescaled_direction() {
        let (_, fam) = so3_x3();
        let r = mono(&[0, 0, 1], 2, 4);
        assert_eq!(invert_family_apply(&fam, &r, 3).unwrap(), r);
    }

    #[test]
    fn forced_non_subalgebra_split_has_pole() {
        let g = so3();
        let lin = LinearSplit::new(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let fam = ContractionFamily::from_linear_split(&lin).unwrap();
        let r = bracket_poly(
            &g,
            &apply_family(&fam, &EpsPoly::constant(v(&[1, 0, 0]), 3)).unwrap(),
            &apply_family(&fam, &EpsPoly::constant(v(&[0, 1, 0]), 3)).unwrap(),
        )
        .unwrap();
        assert_eq!(r, EpsPoly::constant(v(&[0, 0, 1]), 3));
        let err = invert_family_apply(&fam, &r, 1).unwrap_err();
        assert_eq!(
            err,
            Error::Pole(PoleError {
                valuation: -1,
                component: 2,
                pair: None
            })
        );
    }

    #[test]
    fn identity_family_inverts_trivially() {
        let fam = ContractionFamily::identity(3);
        let r = EpsPoly::new(3, 4, vec![v(&[1, 2, 3]), v(&[0, -1, 0]), v(&[5, 0, 0])]).unwrap();
        assert_eq!(invert_family_apply(&fam, &r, 3).unwrap(), r);
    }

    #[test]
    fn singular_family_rejected() {
        let err = ContractionFamily::new(vec![diag(&[1, 0, 1]), diag(&[0, 0, 0])]).unwrap_err();
        assert_eq!(err, Error::SingularFamily);
    }

    #[test]
    fn so3_eps_brackets() {
        let (g, fam) = so3_x3();
        let br = |a: &[i64], b: &[i64]| eps_bracket(&g, &fam, &v(a), &v(b), 3).unwrap();
        assert_eq!(br(&[1, 0, 0], &[0, 1, 0]), mono(&[0, 0, 1], 2, 4));
        assert_eq!(br(&[0, 1, 0], &[0, 0, 1]), EpsPoly::constant(v(&[1, 0, 0]), 4));
        assert_eq!(br(&[0, 0, 1], &[1, 0, 0]), EpsPoly::constant(v(&[0, 1, 0]), 4));
    }

    #[test]
    fn heis3_eps_bracket_vanishes_to_second_order() {
        // [εP, εQ] = ε²Z and φ⁻¹ fixes Z.
        let g = heis3();
        let fam = iw_family(&span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap());
        let jet = eps_bracket(&g, &fam, &v(&[1, 0, 0]), &v(&[0, 1, 0]), 3).unwrap();
        assert_eq!(jet, mono(&[0, 0, 1], 2, 4));
        let limit = contract(&g, &fam).unwrap();
        assert!(limit.is_abelian());
    }

    #[test]
    fn so3_contracts_to_iso2() {
        let (g, fam) = so3_x3();
        assert_eq!(contract(&g, &fam).unwrap().dense(), iso2().dense());
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        assert_eq!(iw_contract_closed_form(&g, &split).dense(), iso2().dense());
    }

    #[test]
    fn identity_family_contracts_to_itself() {
        let g = sl2();
        assert_eq!(contract(&g, &ContractionFamily::identity(3)).unwrap(), g);
        let full = SubalgebraSplit::full(&g);
        assert_eq!(iw_contract_closed_form(&g, &full), g);
    }

    #[test]
    fn sl2_contraction_at_h() {
        let g = sl2();
        let split = span_subalgebra(&g, &[v(&[1, 0, 0])]).unwrap();
        let closed = iw_contract_closed_form(&g, &split);
        let expected = LieAlgebra::from_brackets(
            g.names().to_vec(),
            &[(0, 1, 1, int(2)), (0, 2, 2, int(-2))],
        )
        .unwrap();
        assert_eq!(closed, expected);
        assert_eq!(contract(&g, &iw_family(&split)).unwrap(), expected);
    }

    #[test]
    fn contract_reports_pole_pair() {
        let g = so3();
        let lin = LinearSplit::new(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let fam = ContractionFamily::from_linear_split(&lin).unwrap();
        match contract(&g, &fam) {
            Err(Error::Pole(p)) => {
                assert_eq!(p.valuation, -1);
                assert_eq!(p.pair, Some((0, 1)));
            }
            other => panic!("expected a pole, got {other:?}"),
        }
    }

    #[test]
    fn scaled_inverse_matches_pointwise_inverse() {
        let phis = vec![
            Matrix::from_rows(vec![
                vec![int(1), int(0), int(2)],
                vec![int(0), int(0), int(0)],
                vec![int(0), int(1), int(0)],
            ])
            .unwrap(),
            Matrix::from_rows(vec![
                vec![int(0), int(1), int(0)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(0), int(3)],
            ])
            .unwrap(),
            diag(&[1, 0, 1]),
        ];
        let fam = ContractionFamily::new(phis).unwrap();
        for eps in [int(1), ratio(1, 2), ratio(-2, 3), int(5)] {
            let d = fam.det.eval(&eps);
            if d.is_zero() {
                continue;
            }
            let direct = fam.eval_at(&eps).inverse().unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(fam.scaled_inverse[i][j].eval(&eps) / &d, direct[(i, j)]);
                }
            }
        }
    }
}
