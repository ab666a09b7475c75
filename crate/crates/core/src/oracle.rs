//! Independent check of the BCH machinery through matrix representations:
//! truncated matrix exponentials and logarithms of ε-jets.
//!
//! Nothing here uses structure constants beyond the representation check,
//! so agreement with [`crate::bch::local_mult`] is a genuine cross-check.

use num_traits::One;

use crate::algebra::{AlgVector, LieAlgebra};
use crate::eps_poly::{EpsPoly, MatEpsPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::{ValidationReport, Violation};
use crate::scalar::{factorial, int, Rational};

/// One `m × m` matrix per basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    mats: Vec<Matrix>,
}

impl Representation {
    pub fn new(mats: Vec<Matrix>) -> Self {
        Self { mats }
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    /// Matrix size `m`.
    pub fn size(&self) -> usize {
        self.mats.first().map_or(0, Matrix::rows)
    }

    /// `ρ(x) = Σ_a x_a ρ(X_a)`.
    pub fn image(&self, x: &AlgVector) -> Matrix {
        let m = self.size();
        self.mats
            .iter()
            .zip(&x.0)
            .fold(Matrix::zeros(m, m), |acc, (mat, c)| acc.add(&mat.scale(c)))
    }

    fn stacked(&self) -> Matrix {
        let cols: Vec<Vec<Rational>> = self.mats.iter().map(|m| m.entries().to_vec()).collect();
        Matrix::from_columns(self.size() * self.size(), &cols)
    }

    /// Coordinates of `m` in the span of the representation matrices.
    pub fn decompose(&self, m: &Matrix) -> Option<AlgVector> {
        self.stacked().solve(m.entries()).map(AlgVector)
    }
}

/// Exact homomorphism and faithfulness checks with witnesses.
pub fn check_representation(alg: &LieAlgebra, rep: &Representation) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = alg.dim();
    if rep.mats.len() != n {
        report.push(Violation::Shape {
            index: rep.mats.len().min(n),
        });
        return report;
    }
    let m = rep.size();
    for (i, mat) in rep.mats.iter().enumerate() {
        if mat.rows() != m || mat.cols() != m {
            report.push(Violation::Shape { index: i });
        }
    }
    if !report.is_valid() {
        return report;
    }
    for a in 0..n {
        for b in a + 1..n {
            let (ra, rb) = (&rep.mats[a], &rep.mats[b]);
            let commutator = ra.mul(rb).sub(&rb.mul(ra));
            let image = rep.image(&alg.bracket(&alg.basis_vector(a), &alg.basis_vector(b)).expect("dims"));
            if commutator != image {
                report.push(Violation::Homomorphism { a, b });
            }
        }
    }
    let mut kept: Vec<Vec<Rational>> = Vec::new();
    for (i, mat) in rep.mats.iter().enumerate() {
        kept.push(mat.entries().to_vec());
        if Matrix::from_columns(m * m, &kept).rank() < kept.len() {
            report.push(Violation::LinearDependence { index: i });
            kept.pop();
        }
    }
    report
}

fn image_jet(rep: &Representation, p: &EpsPoly, trunc: usize) -> MatEpsPoly {
    let coeffs = (0..trunc).map(|l| rep.image(&p.coeff(l))).collect();
    MatEpsPoly::new(rep.size(), trunc, coeffs).expect("square images")
}

/// `exp ρ(P(ε))` modulo ε^{order+1}; requires `P_0 = 0` so the series is a
/// finite sum.
pub fn exp_trunc(rep: &Representation, p: &EpsPoly, order: usize) -> Result<MatEpsPoly> {
    if !p.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if p.dim() != rep.mats.len() {
        return Err(Error::DimensionMismatch {
            expected: rep.mats.len(),
            found: p.dim(),
        });
    }
    let trunc = order + 1;
    let m = image_jet(rep, p, trunc);
    let mut power = MatEpsPoly::identity(rep.size(), trunc);
    let mut sum = power.clone();
    for k in 1..=order {
        power = power.mul(&m)?;
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power.scale(&(Rational::one() / factorial(k))))?;
    }
    Ok(sum)
}

/// `log M(ε)` modulo ε^{order+1}; requires `M_0 = I`.
pub fn log_trunc(m: &MatEpsPoly, order: usize) -> Result<MatEpsPoly> {
    if !m.has_identity_constant() {
        return Err(Error::ConstantTermNotIdentity);
    }
    let trunc = order + 1;
    let coeffs: Vec<Matrix> = (0..trunc).map(|l| m.coeff(l)).collect();
    let m = MatEpsPoly::new(m.size(), trunc, coeffs)?;
    let nil = m.sub(&MatEpsPoly::identity(m.size(), trunc))?;
    let mut power = nil.clone();
    let mut sum = MatEpsPoly::zero(m.size(), trunc);
    for k in 1..=order {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { int(1) } else { int(-1) };
        sum = sum.add(&power.scale(&(sign / int(k as i64))))?;
        power = power.mul(&nil)?;
    }
    Ok(sum)
}

/// `log(exp ρ(P) · exp ρ(Q))` decomposed back into the algebra basis.
pub fn oracle_local_mult(
    rep: &Representation,
    p: &EpsPoly,
    q: &EpsPoly,
    order: usize,
) -> Result<EpsPoly> {
    let independent = rep.stacked().rank() == rep.mats.len();
    if !independent {
        return Err(Error::UnfaithfulRepresentation(
            "representation matrices are linearly dependent".into(),
        ));
    }
    let product = exp_trunc(rep, p, order)?.mul(&exp_trunc(rep, q, order)?)?;
    let log = log_trunc(&product, order)?;
    let coeffs = (0..=order)
        .map(|l| {
            rep.decompose(&log.coeff(l))
                .ok_or(Error::DecompositionFailed { degree: l })
        })
        .collect::<Result<Vec<_>>>()?;
    EpsPoly::new(p.dim(), order + 1, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{heis3, heis3_upper_triangular_rep, so3, so3_defining_rep};
    use crate::scalar::ratio;

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    fn mono(x: &[i64], deg: usize, trunc: usize) -> EpsPoly {
        EpsPoly::monomial(v(x), deg, trunc).unwrap()
    }

    #[test]
    fn catalogued_reps_are_valid() {
        assert!(check_representation(&so3(), &so3_defining_rep()).is_valid());
        assert!(check_representation(&heis3(), &heis3_upper_triangular_rep()).is_valid());
    }

    #[test]
    fn zeroed_matrix_is_reported() {
        let mut mats = so3_defining_rep().mats().to_vec();
        mats[2] = Matrix::zeros(3, 3);
        let report = check_representation(&so3(), &Representation::new(mats));
        assert!(report.violations.contains(&Violation::Homomorphism { a: 0, b: 1 }));
        assert!(report.violations.contains(&Violation::LinearDependence { index: 2 }));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let rep = so3_defining_rep();
        let e = exp_trunc(&rep, &EpsPoly::zero(3, 4), 3).unwrap();
        assert_eq!(e, MatEpsPoly::identity(3, 4));
    }

    #[test]
    fn heis3_exp_is_linear() {
        let rep = heis3_upper_triangular_rep();
        let e = exp_trunc(&rep, &mono(&[1, 0, 0], 1, 3), 2).unwrap();
        assert_eq!(e.coeffs(), &[Matrix::identity(3), rep.mats()[0].clone()]);
        let log = log_trunc(&e, 2).unwrap();
        assert_eq!(log.coeffs(), &[Matrix::zeros(3, 3), rep.mats()[0].clone()]);
    }

    #[test]
    fn so3_exp_second_order() {
        let rep = so3_defining_rep();
        let x3 = &rep.mats()[2];
        let e = exp_trunc(&rep, &mono(&[0, 0, 1], 1, 3), 2).unwrap();
        assert_eq!(e.coeff(1), *x3);
        assert_eq!(e.coeff(2), x3.mul(x3).scale(&ratio(1, 2)));
    }

    #[test]
    fn log_of_identity_and_bad_constant() {
        assert!(log_trunc(&MatEpsPoly::identity(3, 4), 3).unwrap().is_zero());
        let bad = MatEpsPoly::new(2, 3, vec![Matrix::zeros(2, 2)]).unwrap();
        assert_eq!(log_trunc(&bad, 2), Err(Error::ConstantTermNotIdentity));
        let rep = so3_defining_rep();
        assert_eq!(
            exp_trunc(&rep, &EpsPoly::constant(v(&[1, 0, 0]), 2), 1),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn heis3_oracle_second_order() {
        let rep = heis3_upper_triangular_rep();
        let z = oracle_local_mult(&rep, &mono(&[1, 0, 0], 1, 3), &mono(&[0, 1, 0], 1, 3), 2).unwrap();
        assert_eq!(z.coeff(1), v(&[1, 1, 0]));
        assert_eq!(z.coeff(2), AlgVector(vec![int(0), int(0), ratio(1, 2)]));
    }

    #[test]
    fn abelian_oracle_adds() {
        let (g, rep) = crate::algebra::builtin("abelian(3)").unwrap();
        let rep = rep.unwrap();
        assert_eq!(g.dim(), 3);
        let p = EpsPoly::new(3, 4, vec![v(&[0, 0, 0]), v(&[1, 2, 3]), v(&[0, 1, 0])]).unwrap();
        let q = EpsPoly::new(3, 4, vec![v(&[0, 0, 0]), v(&[4, 0, 1]), v(&[0, 0, 0]), v(&[1, 1, 1])]).unwrap();
        assert_eq!(oracle_local_mult(&rep, &p, &q, 3).unwrap(), p.add(&q).unwrap());
    }
}
