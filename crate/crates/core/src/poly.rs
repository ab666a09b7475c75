//! Univariate polynomials in ε over ℚ, used for the fraction-free inverse of
//! a contraction family.

use num_traits::{One, Zero};

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self(c)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let qlen = rem.len().checked_sub(dd)?;
        let mut q = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self / ε^v`; caller guarantees `v <= valuation`.
    pub fn shift_down(&self, v: usize) -> Self {
        Self::new(self.0.iter().skip(v).cloned().collect())
    }

    /// First `len` Taylor coefficients of `1 / self`; requires a nonzero
    /// constant term.
    pub fn series_inverse(&self, len: usize) -> Vec<Rational> {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let inv0 = Rational::one() / &c0;
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for m in 0..len {
            if m == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = Rational::zero();
            for j in 1..=m.min(self.0.len().saturating_sub(1)) {
                s += &self.0[j] * &out[m - j];
            }
            out.push(-s * &inv0);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 0, 2]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), None);
    }

    #[test]
    fn series_inverse_of_one_minus_eps() {
        let inv = p(&[1, -1]).series_inverse(5);
        assert_eq!(inv, vec![int(1); 5]);
        let inv2 = p(&[2, 1]).series_inverse(3);
        assert_eq!(inv2, vec![ratio(1, 2), ratio(-1, 4), ratio(1, 8)]);
    }

    #[test]
    fn valuation_and_eval() {
        let a = p(&[0, 0, 3, 1]);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.eval(&int(2)), int(20));
        assert_eq!(a.shift_down(2), p(&[3, 1]));
    }
}
