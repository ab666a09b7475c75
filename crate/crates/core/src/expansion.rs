//! Order-k expansions `g^(k)`.
//!
//! For a subalgebra split the expansion is computed directly in
//! `(h, g^k, g/h)` coordinates: an element is the jet
//! `a_0 + ε a_1 + … + ε^k a_k + ε^{k+1} top` with `a_0 ∈ h` and `top` taken
//! modulo `h`. For a general polynomial family the expansion is computed on
//! tuples `(X_0, …, X_k)` by lifting through `φ_ε`, bracketing, and solving
//! back.

use num_traits::Zero;

use crate::algebra::{AlgVector, LieAlgebra, LinearSplit, SubalgebraSplit};
use crate::contraction::{apply_family, contract, invert_family_apply, ContractionFamily};
use crate::eps_poly::{bracket_poly, EpsPoly};
use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};
use crate::sample::Sampler;
use crate::scalar::Rational;

/// An element of `g^(k)_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedElement {
    pub a0: AlgVector,
    pub mids: Vec<AlgVector>,
    pub top: AlgVector,
}

impl ExpandedElement {
    /// Slot `ℓ` for `ℓ = 0..=k+1`.
    pub fn slot(&self, l: usize) -> &AlgVector {
        match l {
            0 => &self.a0,
            l if l <= self.mids.len() => &self.mids[l - 1],
            _ => &self.top,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.top.is_zero() && self.mids.iter().all(AlgVector::is_zero)
    }

    fn combine(&self, other: &Self, f: impl Fn(&AlgVector, &AlgVector) -> AlgVector) -> Self {
        Self {
            a0: f(&self.a0, &other.a0),
            mids: self.mids.iter().zip(&other.mids).map(|(a, b)| f(a, b)).collect(),
            top: f(&self.top, &other.top),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            a0: self.a0.scale(s),
            mids: self.mids.iter().map(|m| m.scale(s)).collect(),
            top: self.top.scale(s),
        }
    }
}

/// Which triples `jacobi_expanded` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiMode {
    ExhaustiveBasis,
    Random { seed: u64, trials: usize },
}

/// `g^(k)_h = Γ(g)_h / ε^{k+1} Γ(g)_h`.
#[derive(Debug, Clone)]
pub struct ExpandedAlgebraIW {
    base: LieAlgebra,
    split: SubalgebraSplit,
    k: usize,
}

impl ExpandedAlgebraIW {
    pub fn new(base: LieAlgebra, split: SubalgebraSplit, k: usize) -> Result<Self> {
        if split.dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: split.dim(),
            });
        }
        Ok(Self { base, split, k })
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn split(&self) -> &SubalgebraSplit {
        &self.split
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// `(k+1) · dim g`.
    pub fn dim(&self) -> usize {
        self.split.h_dim() + self.k * self.base.dim() + (self.base.dim() - self.split.h_dim())
    }

    pub fn zero(&self) -> ExpandedElement {
        let n = self.base.dim();
        ExpandedElement {
            a0: AlgVector::zero(n),
            mids: vec![AlgVector::zero(n); self.k],
            top: AlgVector::zero(n),
        }
    }

    /// Builds an element, reducing `top` modulo `h`. `a0` must lie in `h`.
    pub fn element(&self, a0: AlgVector, mids: Vec<AlgVector>, top: AlgVector) -> Result<ExpandedElement> {
        let top = self.split.coset_reduce(&top);
        let e = ExpandedElement { a0, mids, top };
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, e: &ExpandedElement) -> Result<()> {
        let n = self.base.dim();
        if e.mids.len() != self.k {
            return Err(Error::InvalidElement(format!(
                "expected {} middle slots, got {}",
                self.k,
                e.mids.len()
            )));
        }
        e.a0.check_dim(n)?;
        e.top.check_dim(n)?;
        for m in &e.mids {
            m.check_dim(n)?;
        }
        if !self.split.contains_h(&e.a0) {
            return Err(Error::InvalidElement("level-0 slot is not in the subalgebra".into()));
        }
        if !self.split.project_h(&e.top).is_zero() {
            return Err(Error::InvalidElement(
                "coset slot is not a canonical representative".into(),
            ));
        }
        Ok(())
    }

    /// Convolution through ε^{k+1}, last slot reduced modulo `h`.
    pub fn bracket(&self, a: &ExpandedElement, b: &ExpandedElement) -> Result<ExpandedElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.bracket_raw(a, b))
    }

    fn bracket_raw(&self, a: &ExpandedElement, b: &ExpandedElement) -> ExpandedElement {
        let n = self.base.dim();
        let r: Vec<AlgVector> = (0..=self.k + 1)
            .map(|m| {
                (0..=m).fold(AlgVector::zero(n), |acc, i| {
                    let (x, y) = (a.slot(i), b.slot(m - i));
                    if x.is_zero() || y.is_zero() {
                        acc
                    } else {
                        &acc + &AlgVector(self.base.bracket_raw(&x.0, &y.0))
                    }
                })
            })
            .collect();
        ExpandedElement {
            a0: r[0].clone(),
            mids: r[1..=self.k].to_vec(),
            top: self.split.coset_reduce(&r[self.k + 1]),
        }
    }

    /// Coordinates: `h`-coordinates of `a0`, then all of `a_1..a_k`, then the
    /// complement coordinates of `top`.
    pub fn coordinates(&self, e: &ExpandedElement) -> Vec<Rational> {
        let mut out = self.split.h_coords(&e.a0);
        for m in &e.mids {
            out.extend(m.0.iter().cloned());
        }
        out.extend(self.split.n_coords(&e.top));
        out
    }

    pub fn from_coordinates(&self, coords: &[Rational]) -> Result<ExpandedElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        let n = self.base.dim();
        let hd = self.split.h_dim();
        let combo = |basis: &[AlgVector], c: &[Rational]| {
            basis
                .iter()
                .zip(c)
                .fold(AlgVector::zero(n), |acc, (b, x)| &acc + &b.scale(x))
        };
        let a0 = combo(self.split.h_basis(), &coords[..hd]);
        let mids = (0..self.k)
            .map(|l| AlgVector(coords[hd + l * n..hd + (l + 1) * n].to_vec()))
            .collect();
        let top = combo(self.split.n_basis(), &coords[hd + self.k * n..]);
        Ok(ExpandedElement { a0, mids, top })
    }

    pub fn basis(&self) -> Vec<ExpandedElement> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut c = vec![Rational::zero(); d];
                c[i] = Rational::from_integer(1.into());
                self.from_coordinates(&c).expect("basis coordinates")
            })
            .collect()
    }

    /// Basis labels with the level as suffix, e.g. `X3_0`, `X1_1`.
    pub fn basis_names(&self) -> Vec<String> {
        let label = |v: &AlgVector, fallback: String| match single_index(v) {
            Some(i) => self.base.names()[i].clone(),
            None => fallback,
        };
        let mut names: Vec<String> = self
            .split
            .h_basis()
            .iter()
            .enumerate()
            .map(|(j, v)| format!("{}_0", label(v, format!("h{}", j + 1))))
            .collect();
        for l in 1..=self.k {
            names.extend(self.base.names().iter().map(|s| format!("{s}_{l}")));
        }
        names.extend(
            self.split
                .n_basis()
                .iter()
                .enumerate()
                .map(|(j, v)| format!("{}_{}", label(v, format!("n{}", j + 1)), self.k + 1)),
        );
        names
    }

    /// Structure constants of `g^(k)` in the basis of [`Self::basis`].
    pub fn structure_constants(&self) -> Result<LieAlgebra> {
        let d = self.dim();
        let basis = self.basis();
        let mut dense = vec![Rational::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                let c = self.coordinates(&self.bracket_raw(&basis[a], &basis[b]));
                dense[(a * d + b) * d..(a * d + b + 1) * d].clone_from_slice(&c);
            }
        }
        LieAlgebra::new_unchecked(self.basis_names(), dense)
    }

    /// `x ↦ (P_h x, P_n x + h)`, defined for `k = 0`.
    pub fn psi_bar(&self, x: &AlgVector) -> Result<ExpandedElement> {
        self.require_order_zero()?;
        x.check_dim(self.base.dim())?;
        Ok(ExpandedElement {
            a0: self.split.project_h(x),
            mids: Vec::new(),
            top: self.split.coset_reduce(x),
        })
    }

    pub fn psi_bar_inverse(&self, e: &ExpandedElement) -> Result<AlgVector> {
        self.require_order_zero()?;
        self.check(e)?;
        Ok(&e.a0 + &e.top)
    }

    fn require_order_zero(&self) -> Result<()> {
        if self.k != 0 {
            return Err(Error::InvalidArgument(format!(
                "the order-0 isomorphism needs k = 0, got k = {}",
                self.k
            )));
        }
        Ok(())
    }

    pub fn random_element(&self, sampler: &mut Sampler) -> ExpandedElement {
        let n = self.base.dim();
        ExpandedElement {
            a0: sampler.h_vector(&self.split),
            mids: (0..self.k).map(|_| sampler.vector(n)).collect(),
            top: sampler.n_vector(&self.split),
        }
    }

    /// Tuple `(X_0..X_k)` to `(a_0, a_1..a_k, top)`.
    pub fn from_tuple(&self, xs: &[AlgVector]) -> Result<ExpandedElement> {
        tuple_to_iw(&self.split, self.k, xs)
    }

    pub fn to_tuple(&self, e: &ExpandedElement) -> Result<Vec<AlgVector>> {
        self.check(e)?;
        Ok(iw_to_tuple(&self.split, e))
    }
}

fn single_index(v: &AlgVector) -> Option<usize> {
    let mut nonzero = v.0.iter().enumerate().filter(|(_, x)| !x.is_zero());
    match (nonzero.next(), nonzero.next()) {
        (Some((i, x)), None) if *x == Rational::from_integer(1.into()) => Some(i),
        _ => None,
    }
}

/// Transport along `φ_ε(Σ ε^ℓ X_ℓ)`:
/// `a_0 = P_h X_0`, `a_ℓ = P_h X_ℓ + P_n X_{ℓ-1}`, `top = P_n X_k`.
pub fn tuple_to_iw(split: &LinearSplit, k: usize, xs: &[AlgVector]) -> Result<ExpandedElement> {
    if xs.len() != k + 1 {
        return Err(Error::InvalidElement(format!(
            "expected a tuple of {} vectors, got {}",
            k + 1,
            xs.len()
        )));
    }
    for x in xs {
        x.check_dim(split.dim())?;
    }
    Ok(ExpandedElement {
        a0: split.project_h(&xs[0]),
        mids: (1..=k)
            .map(|l| &split.project_h(&xs[l]) + &split.coset_reduce(&xs[l - 1]))
            .collect(),
        top: split.coset_reduce(&xs[k]),
    })
}

/// Inverse of [`tuple_to_iw`]: `X_ℓ = P_h a_ℓ + P_n a_{ℓ+1}`.
pub fn iw_to_tuple(split: &LinearSplit, e: &ExpandedElement) -> Vec<AlgVector> {
    let k = e.mids.len();
    (0..=k)
        .map(|l| &split.project_h(e.slot(l)) + &split.coset_reduce(e.slot(l + 1)))
        .collect()
}

pub fn bracket_expanded_iw(
    ea: &ExpandedAlgebraIW,
    a: &ExpandedElement,
    b: &ExpandedElement,
) -> Result<ExpandedElement> {
    ea.bracket(a, b)
}

/// Exact Jacobi check on `g^(k)_h`.
pub fn jacobi_expanded(ea: &ExpandedAlgebraIW, mode: JacobiMode) -> Result<ValidationReport> {
    match mode {
        JacobiMode::ExhaustiveBasis => Ok(ea.structure_constants()?.validate()),
        JacobiMode::Random { seed, trials } => {
            let mut sampler = Sampler::new(seed);
            let mut report = ValidationReport::default();
            for trial in 0..trials {
                let x = ea.random_element(&mut sampler);
                let y = ea.random_element(&mut sampler);
                let z = ea.random_element(&mut sampler);
                let br = |p: &ExpandedElement, q: &ExpandedElement| ea.bracket_raw(p, q);
                let sum = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
                if !sum.is_zero() {
                    report.push(Violation::RandomJacobi {
                        trial,
                        residual: ea.coordinates(&sum),
                    });
                }
            }
            Ok(report)
        }
    }
}

/// `g^(k)_φ` on tuples `(X_0, …, X_k)`.
#[derive(Debug, Clone)]
pub struct ExpandedAlgebraGeneral {
    base: LieAlgebra,
    family: ContractionFamily,
    k: usize,
}

impl ExpandedAlgebraGeneral {
    /// Fails with the contraction's error when the limit does not exist.
    pub fn new(base: LieAlgebra, family: ContractionFamily, k: usize) -> Result<Self> {
        contract(&base, &family)?;
        Ok(Self { base, family, k })
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn family(&self) -> &ContractionFamily {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        (self.k + 1) * self.base.dim()
    }

    /// Jet truncation for lifts: `2(k + d) + 1`.
    pub fn lift_trunc(&self) -> usize {
        2 * (self.k + self.family.degree()) + 1
    }

    /// `φ_ε(Σ ε^ℓ X_ℓ)` as a jet.
    pub fn lift(&self, xs: &[AlgVector]) -> Result<EpsPoly> {
        if xs.len() != self.k + 1 {
            return Err(Error::InvalidElement(format!(
                "expected a tuple of {} vectors, got {}",
                self.k + 1,
                xs.len()
            )));
        }
        let p = EpsPoly::new(self.base.dim(), self.lift_trunc(), xs.to_vec())?;
        apply_family(&self.family, &p)
    }

    pub fn bracket(&self, xs: &[AlgVector], ys: &[AlgVector]) -> Result<Vec<AlgVector>> {
        let r = bracket_poly(&self.base, &self.lift(xs)?, &self.lift(ys)?)?;
        let w = invert_family_apply(&self.family, &r, self.k).map_err(|e| match e {
            Error::Pole(p) => Error::InternalInvariantViolation(format!(
                "{p} after the contraction was verified to exist"
            )),
            other => other,
        })?;
        Ok((0..=self.k).map(|l| w.coeff(l)).collect())
    }
}

pub fn bracket_expanded_general(
    eag: &ExpandedAlgebraGeneral,
    xs: &[AlgVector],
    ys: &[AlgVector],
) -> Result<Vec<AlgVector>> {
    eag.bracket(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{heis3, so3, span_subalgebra};
    use crate::contraction::iw_family;
    use crate::scalar::int;

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    fn so3_iw(k: usize) -> ExpandedAlgebraIW {
        let g = so3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        ExpandedAlgebraIW::new(g, split, k).unwrap()
    }

    #[test]
    fn order_zero_bracket_values() {
        let ea = so3_iw(0);
        let a = ea.element(v(&[0, 0, 1]), vec![], v(&[1, 0, 0])).unwrap();
        let b = ea.element(v(&[0, 0, 0]), vec![], v(&[0, 1, 0])).unwrap();
        let r = ea.bracket(&a, &b).unwrap();
        assert!(r.a0.is_zero());
        assert_eq!(r.top, v(&[-1, 0, 0]));
        let a = ea.element(v(&[0, 0, 0]), vec![], v(&[1, 0, 0])).unwrap();
        assert!(ea.bracket(&a, &b).unwrap().is_zero());
        assert!(ea.bracket(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn rejects_malformed_elements() {
        let ea = so3_iw(1);
        assert!(matches!(
            ea.element(v(&[1, 0, 0]), vec![v(&[0, 0, 0])], v(&[0, 0, 0])),
            Err(Error::InvalidElement(_))
        ));
        let bad = ExpandedElement {
            a0: v(&[0, 0, 0]),
            mids: vec![v(&[0, 0, 0])],
            top: v(&[0, 0, 1]),
        };
        assert!(matches!(ea.bracket(&bad, &bad), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn dimension_and_names() {
        for k in 0..4 {
            let ea = so3_iw(k);
            assert_eq!(ea.dim(), 3 * (k + 1));
            assert_eq!(ea.basis().len(), ea.dim());
        }
        assert_eq!(so3_iw(1).basis_names(), vec!["X3_0", "X1_1", "X2_1", "X3_1", "X1_2", "X2_2"]);
    }

    #[test]
    fn psi_bar_examples() {
        let ea = so3_iw(0);
        let e = ea.psi_bar(&v(&[1, 0, 1])).unwrap();
        assert_eq!((e.a0.clone(), e.top.clone()), (v(&[0, 0, 1]), v(&[1, 0, 0])));
        assert_eq!(ea.psi_bar_inverse(&e).unwrap(), v(&[1, 0, 1]));
        assert!(ea.psi_bar(&v(&[0, 0, 0])).unwrap().is_zero());
        let lhs = ea.psi_bar(&v(&[1, 0, 0])).unwrap();
        let br = ea
            .bracket(&ea.psi_bar(&v(&[0, 1, 0])).unwrap(), &ea.psi_bar(&v(&[0, 0, 1])).unwrap())
            .unwrap();
        assert_eq!(br, lhs);
        assert!(so3_iw(1).psi_bar(&v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn jacobi_on_small_expansions() {
        for k in 0..3 {
            assert!(jacobi_expanded(&so3_iw(k), JacobiMode::ExhaustiveBasis).unwrap().is_valid());
            assert!(jacobi_expanded(&so3_iw(k), JacobiMode::Random { seed: 3, trials: 5 })
                .unwrap()
                .is_valid());
        }
    }

    #[test]
    fn corrupted_base_fails_jacobi() {
        let bad = LieAlgebra::from_brackets_unchecked(
            vec!["X1".into(), "X2".into(), "X3".into()],
            &[(0, 1, 1, int(1)), (0, 2, 2, int(1)), (1, 2, 0, int(1))],
        )
        .unwrap();
        let split = SubalgebraSplit::full(&bad);
        let ea = ExpandedAlgebraIW::new(bad, split, 1).unwrap();
        assert!(!jacobi_expanded(&ea, JacobiMode::ExhaustiveBasis).unwrap().is_valid());
    }

    #[test]
    fn tuple_transport_round_trip() {
        let ea = so3_iw(2);
        let xs = vec![v(&[1, 2, 3]), v(&[0, -1, 4]), v(&[5, 0, 1])];
        let e = ea.from_tuple(&xs).unwrap();
        assert_eq!(e.a0, v(&[0, 0, 3]));
        assert_eq!(e.mids[0], v(&[1, 2, 4]));
        assert_eq!(e.top, v(&[5, 0, 0]));
        assert_eq!(ea.to_tuple(&e).unwrap(), xs);
    }

    #[test]
    fn general_matches_iw_on_heis3() {
        let g = heis3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        let fam = iw_family(&split);
        let eag = ExpandedAlgebraGeneral::new(g.clone(), fam, 1).unwrap();
        let ea = ExpandedAlgebraIW::new(g, split, 1).unwrap();
        let xs = vec![v(&[1, 0, 2]), v(&[0, 1, 0])];
        let ys = vec![v(&[0, 1, 0]), v(&[3, 0, 1])];
        let general = eag.bracket(&xs, &ys).unwrap();
        let iw = ea.bracket(&ea.from_tuple(&xs).unwrap(), &ea.from_tuple(&ys).unwrap()).unwrap();
        assert_eq!(ea.from_tuple(&general).unwrap(), iw);
    }

    #[test]
    fn identity_family_is_convolution() {
        let g = so3();
        let eag = ExpandedAlgebraGeneral::new(g.clone(), ContractionFamily::identity(3), 1).unwrap();
        let xs = vec![v(&[1, 0, 0]), v(&[0, 0, 1])];
        let ys = vec![v(&[0, 1, 0]), v(&[1, 0, 0])];
        let r = eag.bracket(&xs, &ys).unwrap();
        assert_eq!(r[0], v(&[0, 0, 1]));
        // [X1, X1] + [X3, X2] = -X1
        assert_eq!(r[1], v(&[-1, 0, 0]));
    }
}
