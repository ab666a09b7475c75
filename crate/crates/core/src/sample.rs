//! Seeded random rational inputs for randomized checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgVector, LinearSplit};
use crate::eps_poly::EpsPoly;
use crate::scalar::{ratio, Rational};

/// Deterministic generator of small rationals `p/q`, `|p| <= max_num`,
/// `1 <= q <= max_den`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    max_num: i64,
    max_den: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_bounds(seed, 5, 4)
    }

    pub fn with_bounds(seed: u64, max_num: i64, max_den: i64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_num,
            max_den: max_den.max(1),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-self.max_num..=self.max_num);
        let q = self.rng.gen_range(1..=self.max_den);
        ratio(p, q)
    }

    pub fn vector(&mut self, dim: usize) -> AlgVector {
        AlgVector((0..dim).map(|_| self.rational()).collect())
    }

    /// Random element of `span(h_basis)`.
    pub fn h_vector(&mut self, split: &LinearSplit) -> AlgVector {
        let mut v = AlgVector::zero(split.dim());
        for b in split.h_basis().to_vec() {
            v = &v + &b.scale(&self.rational());
        }
        v
    }

    /// Random canonical coset representative.
    pub fn n_vector(&mut self, split: &LinearSplit) -> AlgVector {
        let v = self.vector(split.dim());
        split.coset_reduce(&v)
    }

    /// Jet with zero constant term and coefficients up to `degree`.
    pub fn jet(&mut self, dim: usize, degree: usize, trunc: usize) -> EpsPoly {
        let mut coeffs = vec![AlgVector::zero(dim)];
        coeffs.extend((1..=degree.min(trunc.saturating_sub(1))).map(|_| self.vector(dim)));
        EpsPoly::new(dim, trunc, coeffs).expect("consistent dimensions")
    }

    pub fn float(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sequences_repeat() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            assert_eq!(a.rational(), b.rational());
        }
        let j = a.jet(3, 2, 4);
        assert!(j.coeff(0).is_zero());
        assert_eq!(j.trunc(), 4);
    }
}
