use std::cmp::Ordering;

use super::{Monomial, PrimeField};

/// Sparse polynomial: terms sorted strictly descending in grevlex, no zero
/// coefficients. The coefficient field is supplied by the caller on every
/// arithmetic operation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: u32) -> Poly {
        Poly::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn monomial(m: Monomial, c: u32) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(i: usize) -> Poly {
        Poly::monomial(Monomial::var(i), 1)
    }

    /// Canonicalizes an arbitrary term list: sorts, merges duplicates and
    /// drops zero coefficients.
    pub fn from_terms(mut terms: Vec<(Monomial, u32)>, field: PrimeField) -> Poly {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % field.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { terms: out }
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|t| t.0.degree() == m.degree()),
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.degree() == 0 => *c,
            _ => 0,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Poly, field: PrimeField) -> Poly {
        self.combine(other, field, false)
    }

    pub fn sub(&self, other: &Poly, field: PrimeField) -> Poly {
        self.combine(other, field, true)
    }

    fn combine(&self, other: &Poly, field: PrimeField, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let conv = |c: u32| if negate { field.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, conv(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(a[i].1, conv(b[j].1));
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|t| (t.0, conv(t.1))));
        Poly { terms: out }
    }

    pub fn neg(&self, field: PrimeField) -> Poly {
        Poly {
            terms: self.terms.iter().map(|&(m, c)| (m, field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|&(m, a)| (m, field.mul(a, c))).collect(),
        }
    }

    /// Multiplication by `c * m`; the monomial order is compatible with
    /// multiplication so no re-sorting is needed.
    pub fn mul_term(&self, m: &Monomial, c: u32, field: PrimeField) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|&(t, a)| (t.mul(m), field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly, field: PrimeField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_term(&m, c, field);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return other.mul_term(&m, c, field);
        }
        let mut prod = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &other.terms {
                prod.push((m1.mul(&m2), field.mul(c1, c2)));
            }
        }
        Poly::from_terms(prod, field)
    }

    /// Makes the leading coefficient one.
    pub fn monic(&self, field: PrimeField) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some(&(_, c)) => self.scale(field.inv(c), field),
        }
    }

    pub fn pow(&self, e: u32, field: PrimeField) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// Keeps only the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.0.degree() == d)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let f = f101();
        let a = Poly::var(0).add(&Poly::var(1), f);
        let b = a.neg(f);
        assert!(a.add(&b, f).is_zero());
    }

    #[test]
    fn char_two_binomial() {
        let f = PrimeField::new(2).unwrap();
        let a = Poly::var(0).add(&Poly::var(1), f);
        let sq = a.mul(&a, f);
        let expect = Poly::from_terms(vec![(m(&[2, 0]), 1), (m(&[0, 2]), 1)], f);
        assert_eq!(sq, expect);
    }

    #[test]
    fn degree_markers() {
        let f = f101();
        let x2y = Poly::monomial(m(&[2, 1]), 1);
        assert_eq!(x2y.total_degree(), Some(3));
        assert_eq!(Poly::constant(5).total_degree(), Some(0));
        assert_eq!(Poly::zero().total_degree(), None);
        assert_eq!(x2y.mul(&x2y, f).total_degree(), Some(6));
    }

    #[test]
    fn from_terms_merges() {
        let f = f101();
        let p = Poly::from_terms(vec![(m(&[1]), 50), (m(&[0]), 3), (m(&[1]), 51)], f);
        assert_eq!(p, Poly::constant(3));
    }
}
