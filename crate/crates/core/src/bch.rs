//! Truncated BCH local multiplication and the expansion groups
//! `H ⋉_Ad (g^k × g/h, ⊛)`.
//!
//! The BCH series is summed in Dynkin's form. Words in the two letters
//! `X`, `Y` are grouped so that each distinct right-nested bracket
//! `[a_1, [a_2, … [a_{L-1}, a_L]]]` is evaluated once, with the sum of all
//! Dynkin coefficients that produce it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::algebra::{AlgVector, LieAlgebra, SubalgebraSplit};
use crate::eps_poly::{bracket_poly_raw, EpsPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{factorial, int, Field, Rational};

/// Default largest ε-order accepted by [`local_mult`].
pub const DEFAULT_ORDER_CAP: usize = 6;

/// Tolerance used when validating float-mode group elements.
pub const FLOAT_TOL: f64 = 1e-9;

/// A word in `X` (bit 0) and `Y` (bit 1), letter `i` at bit `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Word {
    len: usize,
    bits: u64,
}

impl Word {
    fn is_y(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    fn suffix(&self, start: usize) -> Word {
        Word {
            len: self.len - start,
            bits: self.bits >> start,
        }
    }
}

/// Dynkin coefficients of `log(e^X e^Y)` through a given word length.
#[derive(Debug, Clone)]
pub struct BchTable {
    max_len: usize,
    terms: Vec<(Word, Rational)>,
}

impl BchTable {
    pub fn new(max_len: usize) -> Self {
        assert!(max_len < 64, "word length must fit in a u64 mask");
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        // (word, number of blocks, 1 / Π p_i! q_i!)
        let mut stack = vec![(Word { len: 0, bits: 0 }, 0usize, Rational::one())];
        while let Some((word, blocks, inv_fact)) = stack.pop() {
            if blocks > 0 {
                let sign = if blocks % 2 == 1 { int(1) } else { int(-1) };
                let coeff = sign / int(blocks as i64) / int(word.len as i64) * &inv_fact;
                *acc.entry(word).or_insert_with(Rational::zero) += coeff;
            }
            let room = max_len - word.len;
            for total in 1..=room {
                for p in 0..=total {
                    let q = total - p;
                    let y_mask = ((1u64 << q) - 1) << (word.len + p);
                    let next = Word {
                        len: word.len + total,
                        bits: word.bits | y_mask,
                    };
                    let w = inv_fact.clone() / (factorial(p) * factorial(q));
                    stack.push((next, blocks + 1, w));
                }
            }
        }
        // The innermost bracket is [a_{L-1}, a_L]: words ending in XX or YY
        // vanish, and ...YX is folded into ...XY with the opposite sign.
        let mut folded: BTreeMap<Word, Rational> = BTreeMap::new();
        for (word, c) in acc {
            let key = if word.len < 2 {
                word
            } else {
                let (x, y) = (word.is_y(word.len - 2), word.is_y(word.len - 1));
                if x == y {
                    continue;
                }
                if x {
                    let swapped = Word {
                        len: word.len,
                        bits: word.bits ^ (0b11 << (word.len - 2)),
                    };
                    *folded.entry(swapped).or_insert_with(Rational::zero) -= c;
                    continue;
                }
                word
            };
            *folded.entry(key).or_insert_with(Rational::zero) += c;
        }
        let terms: Vec<(Word, Rational)> =
            folded.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { max_len, terms }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of distinct nonvanishing words.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the right-nested word, given as a string over `X`/`Y`.
    pub fn coefficient(&self, word: &str) -> Rational {
        let bits = word
            .chars()
            .enumerate()
            .fold(0u64, |acc, (i, ch)| if ch == 'Y' { acc | 1 << i } else { acc });
        let w = Word {
            len: word.len(),
            bits,
        };
        self.terms
            .iter()
            .find(|(t, _)| *t == w)
            .map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    /// Sums the table on jets `p`, `q` (both with zero constant term and
    /// the same truncation).
    fn sum<T: Field>(&self, alg: &LieAlgebra, p: &EpsPoly<T>, q: &EpsPoly<T>) -> EpsPoly<T> {
        let mut memo: HashMap<Word, EpsPoly<T>> = HashMap::new();
        let mut total = EpsPoly::zero(p.dim(), p.trunc());
        for (word, coeff) in &self.terms {
            let value = nested_value(alg, p, q, *word, &mut memo);
            if !value.is_zero() {
                let scaled = value.scale(&T::from_rational(coeff));
                total = total.add(&scaled).expect("same shape");
            }
        }
        total
    }
}

fn nested_value<T: Field>(
    alg: &LieAlgebra,
    p: &EpsPoly<T>,
    q: &EpsPoly<T>,
    word: Word,
    memo: &mut HashMap<Word, EpsPoly<T>>,
) -> EpsPoly<T> {
    if let Some(v) = memo.get(&word) {
        return v.clone();
    }
    let letter = |i: usize| if word.is_y(i) { q } else { p };
    let value = if word.len == 1 {
        letter(0).clone()
    } else {
        let inner = nested_value(alg, p, q, word.suffix(1), memo);
        if inner.is_zero() {
            inner
        } else {
            bracket_poly_raw(alg, letter(0), &inner)
        }
    };
    memo.insert(word, value.clone());
    value
}

fn table(order: usize) -> Arc<BchTable> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<BchTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().expect("BCH table cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(BchTable::new(order)))
        .clone()
}

fn prepare<T: Field>(alg: &LieAlgebra, p: &EpsPoly<T>, order: usize) -> Result<EpsPoly<T>> {
    if p.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: p.dim(),
        });
    }
    if !p.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if p.trunc() < order + 1 {
        return Err(Error::TruncationMismatch {
            left: p.trunc(),
            right: order + 1,
        });
    }
    Ok(p.truncate(order + 1))
}

/// `log(exp P(ε) · exp Q(ε))` modulo ε^{order+1}, for jets through zero.
pub fn local_mult<T: Field>(
    alg: &LieAlgebra,
    p: &EpsPoly<T>,
    q: &EpsPoly<T>,
    order: usize,
) -> Result<EpsPoly<T>> {
    local_mult_capped(alg, p, q, order, DEFAULT_ORDER_CAP)
}

pub fn local_mult_capped<T: Field>(
    alg: &LieAlgebra,
    p: &EpsPoly<T>,
    q: &EpsPoly<T>,
    order: usize,
    cap: usize,
) -> Result<EpsPoly<T>> {
    if order > cap {
        return Err(Error::OrderCapExceeded { order, cap });
    }
    let p = prepare(alg, p, order)?;
    let q = prepare(alg, q, order)?;
    Ok(table(order).sum(alg, &p, &q))
}

/// `(c_1, …, c_k, c_{k+1} + h)`, with `top` stored as the canonical
/// representative (no `h`-component).
#[derive(Debug, Clone, PartialEq)]
pub struct NilTuple<T = Rational> {
    pub mids: Vec<AlgVector<T>>,
    pub top: AlgVector<T>,
}

impl<T: Field> NilTuple<T> {
    pub fn negate(&self) -> Self {
        Self {
            mids: self.mids.iter().map(|m| -m).collect(),
            top: -&self.top,
        }
    }

    /// Largest coordinate difference, for float comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mids
            .iter()
            .zip(&other.mids)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(self.top.max_abs_diff(&other.top), f64::max)
    }
}

impl NilTuple<Rational> {
    pub fn to_f64(&self) -> NilTuple<f64> {
        NilTuple {
            mids: self.mids.iter().map(AlgVector::to_f64).collect(),
            top: self.top.to_f64(),
        }
    }
}

/// An element of `H`, represented by its adjoint matrix and optionally a
/// matrix in a defining representation.
#[derive(Debug, Clone, PartialEq)]
pub struct HElement<T = Rational> {
    pub ad: Matrix<T>,
    pub defining: Option<Matrix<T>>,
}

impl<T: Field> HElement<T> {
    pub fn new(ad: Matrix<T>, defining: Option<Matrix<T>>) -> Self {
        Self { ad, defining }
    }

    pub fn identity(dim: usize, defining_size: Option<usize>) -> Self {
        Self {
            ad: Matrix::identity(dim),
            defining: defining_size.map(Matrix::identity),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            ad: self.ad.mul(&other.ad),
            defining: match (&self.defining, &other.defining) {
                (Some(a), Some(b)) => Some(a.mul(b)),
                _ => None,
            },
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let ad = self.ad.inverse()?;
        let defining = match &self.defining {
            Some(d) => Some(d.inverse()?),
            None => None,
        };
        Some(Self { ad, defining })
    }
}

/// `(h, a)` with multiplication `(h₁, a)(h₂, b) = (h₁h₂, a ⊛ Ad_{h₁} b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<T = Rational> {
    pub h: HElement<T>,
    pub nil: NilTuple<T>,
}

/// The order-k expansion group of `(g, h)`.
#[derive(Debug, Clone)]
pub struct ExpansionGroup {
    alg: LieAlgebra,
    split: SubalgebraSplit,
    k: usize,
    table: Arc<BchTable>,
}

impl ExpansionGroup {
    pub fn new(alg: LieAlgebra, split: SubalgebraSplit, k: usize) -> Result<Self> {
        Self::with_cap(alg, split, k, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(alg: LieAlgebra, split: SubalgebraSplit, k: usize, cap: usize) -> Result<Self> {
        if split.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: split.dim(),
            });
        }
        if k + 1 > cap {
            return Err(Error::OrderCapExceeded { order: k + 1, cap });
        }
        Ok(Self {
            alg,
            split,
            k,
            table: table(k + 1),
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn split(&self) -> &SubalgebraSplit {
        &self.split
    }

    pub fn order(&self) -> usize {
        self.k
    }

    fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn nil_identity<T: Field>(&self) -> NilTuple<T> {
        NilTuple {
            mids: vec![AlgVector::zero(self.dim()); self.k],
            top: AlgVector::zero(self.dim()),
        }
    }

    /// Builds a tuple, replacing `top` by its canonical representative.
    pub fn nil_tuple<T: Field>(&self, mids: Vec<AlgVector<T>>, top: AlgVector<T>) -> Result<NilTuple<T>> {
        if mids.len() != self.k {
            return Err(Error::InvalidElement(format!(
                "expected {} vectors before the coset slot, got {}",
                self.k,
                mids.len()
            )));
        }
        for m in &mids {
            m.check_dim(self.dim())?;
        }
        top.check_dim(self.dim())?;
        Ok(NilTuple {
            mids,
            top: self.split.coset_reduce(&top),
        })
    }

    pub fn check_tuple<T: Field>(&self, a: &NilTuple<T>) -> Result<()> {
        if a.mids.len() != self.k {
            return Err(Error::InvalidElement(format!(
                "expected {} vectors before the coset slot, got {}",
                self.k,
                a.mids.len()
            )));
        }
        for m in &a.mids {
            m.check_dim(self.dim())?;
        }
        a.top.check_dim(self.dim())?;
        let stray = self.split.project_h(&a.top);
        if !stray.0.iter().all(|x| x.near_zero(FLOAT_TOL)) {
            return Err(Error::InvalidElement(
                "coset slot is not a canonical representative".into(),
            ));
        }
        Ok(())
    }

    /// `c(ε) = Σ_{ℓ=1}^{k+1} ε^ℓ c_ℓ`.
    pub fn to_jet<T: Field>(&self, a: &NilTuple<T>) -> EpsPoly<T> {
        let mut coeffs = Vec::with_capacity(self.k + 2);
        coeffs.push(AlgVector::zero(self.dim()));
        coeffs.extend(a.mids.iter().cloned());
        coeffs.push(a.top.clone());
        EpsPoly::new(self.dim(), self.k + 2, coeffs).expect("consistent dimensions")
    }

    /// `a ⊛ b`: the first k+1 coefficients of `c(ε) * d(ε)`, the last one
    /// modulo `h`.
    pub fn star<T: Field>(&self, a: &NilTuple<T>, b: &NilTuple<T>) -> Result<NilTuple<T>> {
        self.check_tuple(a)?;
        self.check_tuple(b)?;
        let z = self.table.sum(&self.alg, &self.to_jet(a), &self.to_jet(b));
        Ok(NilTuple {
            mids: (1..=self.k).map(|l| z.coeff(l)).collect(),
            top: self.split.coset_reduce(&z.coeff(self.k + 1)),
        })
    }

    /// Checks that `h.ad` is an automorphism of `g` preserving `h`.
    pub fn check_h<T: Field>(&self, h: &HElement<T>) -> Result<()> {
        let n = self.dim();
        if h.ad.rows() != n || h.ad.cols() != n {
            return Err(Error::InvalidHElement(format!(
                "adjoint matrix must be {n}x{n}, got {}x{}",
                h.ad.rows(),
                h.ad.cols()
            )));
        }
        let col = |i: usize| AlgVector(h.ad.column(i));
        for a in 0..n {
            for b in a + 1..n {
                let lhs = AlgVector(h.ad.mul_vec(&self.alg.bracket_raw(
                    &AlgVector::<T>::basis(n, a).0,
                    &AlgVector::<T>::basis(n, b).0,
                )));
                let rhs = AlgVector(self.alg.bracket_raw(&col(a).0, &col(b).0));
                if !(&lhs - &rhs).0.iter().all(|x| x.near_zero(FLOAT_TOL)) {
                    return Err(Error::InvalidHElement(format!(
                        "Ad does not preserve the bracket of basis vectors {} and {}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        for (i, hv) in self.split.h_basis().iter().enumerate() {
            let image = AlgVector(h.ad.mul_vec(&hv.map(T::from_rational).0));
            if !self.split.coset_reduce(&image).0.iter().all(|x| x.near_zero(FLOAT_TOL)) {
                return Err(Error::InvalidHElement(format!(
                    "Ad maps subalgebra basis vector {} outside the subalgebra",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// `Ad_h` acting slotwise, the coset slot re-reduced.
    pub fn act<T: Field>(&self, h: &HElement<T>, a: &NilTuple<T>) -> Result<NilTuple<T>> {
        self.check_h(h)?;
        self.check_tuple(a)?;
        Ok(self.act_raw(h, a))
    }

    fn act_raw<T: Field>(&self, h: &HElement<T>, a: &NilTuple<T>) -> NilTuple<T> {
        NilTuple {
            mids: a.mids.iter().map(|m| AlgVector(h.ad.mul_vec(&m.0))).collect(),
            top: self.split.coset_reduce(&AlgVector(h.ad.mul_vec(&a.top.0))),
        }
    }

    pub fn identity<T: Field>(&self, defining_size: Option<usize>) -> GroupElement<T> {
        GroupElement {
            h: HElement::identity(self.dim(), defining_size),
            nil: self.nil_identity(),
        }
    }

    pub fn group_mult<T: Field>(&self, g1: &GroupElement<T>, g2: &GroupElement<T>) -> Result<GroupElement<T>> {
        self.check_h(&g1.h)?;
        self.check_h(&g2.h)?;
        self.check_tuple(&g2.nil)?;
        let moved = self.act_raw(&g1.h, &g2.nil);
        Ok(GroupElement {
            h: g1.h.mul(&g2.h),
            nil: self.star(&g1.nil, &moved)?,
        })
    }

    /// `(h, a)⁻¹ = (h⁻¹, Ad_{h⁻¹}(−a))`.
    pub fn group_inverse<T: Field>(&self, g: &GroupElement<T>) -> Result<GroupElement<T>> {
        self.check_h(&g.h)?;
        self.check_tuple(&g.nil)?;
        let inv = g
            .h
            .inverse()
            .ok_or_else(|| Error::InvalidHElement("H element is not invertible".into()))?;
        let nil = self.act_raw(&inv, &g.nil.negate());
        Ok(GroupElement { h: inv, nil })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelian, heis3, so3, span_subalgebra};
    use crate::scalar::ratio;

    fn v(x: &[i64]) -> AlgVector {
        AlgVector::from_ints(x)
    }

    #[test]
    fn low_order_dynkin_coefficients() {
        let t = BchTable::new(3);
        assert_eq!(t.coefficient("X"), int(1));
        assert_eq!(t.coefficient("Y"), int(1));
        assert_eq!(t.coefficient("XY"), ratio(1, 2));
        assert_eq!(t.coefficient("XX"), int(0));
        // [X,[X,Y]]/12 and [Y,[Y,X]]/12 = -[Y,[X,Y]]/12
        assert_eq!(t.coefficient("XXY"), ratio(1, 12));
        assert_eq!(t.coefficient("YXY"), ratio(-1, 12));
    }

    #[test]
    fn second_order_product() {
        let g = so3();
        let c = EpsPoly::monomial(v(&[1, 2, 0]), 1, 3).unwrap();
        let d = EpsPoly::monomial(v(&[0, 1, -1]), 1, 3).unwrap();
        let z = local_mult(&g, &c, &d, 2).unwrap();
        assert_eq!(z.coeff(1), v(&[1, 3, -1]));
        let half = g.bracket(&v(&[1, 2, 0]), &v(&[0, 1, -1])).unwrap().scale(&ratio(1, 2));
        assert_eq!(z.coeff(2), half);
    }

    #[test]
    fn abelian_product_is_sum() {
        let g = abelian(2).unwrap();
        let p = EpsPoly::new(2, 5, vec![v(&[0, 0]), v(&[1, 2]), v(&[3, 0])]).unwrap();
        let q = EpsPoly::new(2, 5, vec![v(&[0, 0]), v(&[0, 1]), v(&[0, 0]), v(&[5, 5])]).unwrap();
        assert_eq!(local_mult(&g, &p, &q, 4).unwrap(), p.add(&q).unwrap());
    }

    #[test]
    fn right_identity_and_errors() {
        let g = heis3();
        let p = EpsPoly::new(3, 4, vec![v(&[0, 0, 0]), v(&[1, 2, 0]), v(&[0, 1, 1])]).unwrap();
        let zero = EpsPoly::zero(3, 4);
        assert_eq!(local_mult(&g, &p, &zero, 3).unwrap(), p);
        let bad = EpsPoly::constant(v(&[1, 0, 0]), 4);
        assert_eq!(local_mult(&g, &bad, &zero, 3), Err(Error::NonzeroConstantTerm));
        let long: EpsPoly = EpsPoly::zero(3, 9);
        assert_eq!(
            local_mult(&g, &long, &long, 7),
            Err(Error::OrderCapExceeded { order: 7, cap: 6 })
        );
    }

    fn so3_group(k: usize) -> ExpansionGroup {
        let g = so3();
        let split = span_subalgebra(&g, &[v(&[0, 0, 1])]).unwrap();
        ExpansionGroup::new(g, split, k).unwrap()
    }

    #[test]
    fn first_order_star_closed_form() {
        let grp = so3_group(1);
        let a = grp.nil_tuple(vec![v(&[1, 2, 3])], v(&[1, 1, 7])).unwrap();
        let b = grp.nil_tuple(vec![v(&[0, -1, 2])], v(&[2, 0, 0])).unwrap();
        let c = grp.star(&a, &b).unwrap();
        assert_eq!(c.mids, vec![v(&[1, 1, 5])]);
        let br = so3().bracket(&v(&[1, 2, 3]), &v(&[0, -1, 2])).unwrap();
        let expected = grp.split().coset_reduce(&(&v(&[3, 1, 0]) + &br.scale(&ratio(1, 2))));
        assert_eq!(c.top, expected);
    }

    #[test]
    fn zeroth_order_star_is_addition() {
        let grp = so3_group(0);
        let a = grp.nil_tuple(vec![], v(&[1, 2, 9])).unwrap();
        let b = grp.nil_tuple(vec![], v(&[3, -1, 0])).unwrap();
        assert_eq!(grp.star(&a, &b).unwrap().top, v(&[4, 1, 0]));
    }

    #[test]
    fn negation_inverts() {
        let grp = so3_group(2);
        let a = grp.nil_tuple(vec![v(&[1, 2, 3]), v(&[0, 1, 0])], v(&[1, 0, 0])).unwrap();
        assert_eq!(grp.star(&a, &a.negate()).unwrap(), grp.nil_identity());
        assert_eq!(grp.star(&a.negate(), &a).unwrap(), grp.nil_identity());
    }

    #[test]
    fn quarter_turn_rotates_coset() {
        let grp = so3_group(0);
        let r = Matrix::from_rows(vec![
            vec![int(0), int(-1), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        let h = HElement::new(r.clone(), Some(r));
        let g1 = GroupElement { h: h.clone(), nil: grp.nil_identity() };
        let g2 = GroupElement {
            h: HElement::identity(3, Some(3)),
            nil: grp.nil_tuple(vec![], v(&[1, 0, 0])).unwrap(),
        };
        let prod = grp.group_mult(&g1, &g2).unwrap();
        assert_eq!(prod.nil.top, v(&[0, 1, 0]));
        assert_eq!(prod.h, h);
        let e: GroupElement = grp.identity(Some(3));
        assert_eq!(grp.group_mult(&e, &e).unwrap(), e);
    }

    #[test]
    fn rejects_ad_not_preserving_h() {
        let grp = so3_group(0);
        // Rotation about x1 moves X3.
        let r = Matrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(-1)],
            vec![int(0), int(1), int(0)],
        ])
        .unwrap();
        let g = GroupElement { h: HElement::new(r, None), nil: grp.nil_identity() };
        assert!(matches!(grp.group_mult(&g, &g), Err(Error::InvalidHElement(_))));
        let scale = HElement::new(Matrix::identity(3).scale(&int(2)), None);
        let g = GroupElement { h: scale, nil: grp.nil_identity() };
        assert!(matches!(grp.group_inverse(&g), Err(Error::InvalidHElement(_))));
    }

    #[test]
    fn inverse_of_pure_elements() {
        let grp = so3_group(1);
        let a = grp.nil_tuple(vec![v(&[1, 2, 3])], v(&[0, 1, 0])).unwrap();
        let g = GroupElement { h: HElement::identity(3, None), nil: a.clone() };
        assert_eq!(grp.group_inverse(&g).unwrap().nil, a.negate());
    }
}
