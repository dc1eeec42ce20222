use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arith::{Monomial, Poly, PolyRing, PrimeField};
use crate::groebner::GroebnerBasis;

/// Standard monomials of one degree with a reverse index.
#[derive(Debug)]
pub struct DegreeBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// The coefficient ring of a complex: either `S` itself or `S/I` with `I`
/// given by a Gröbner basis (the zero ideal for `S`).
#[derive(Debug)]
pub struct BaseRing {
    ring: Arc<PolyRing>,
    ideal: GroebnerBasis,
    cache: Mutex<HashMap<i32, Arc<DegreeBasis>>>,
}

impl BaseRing {
    pub fn polynomial(ring: Arc<PolyRing>) -> Arc<BaseRing> {
        Arc::new(BaseRing {
            ideal: GroebnerBasis::zero_ideal(ring.clone()),
            ring,
            cache: Mutex::default(),
        })
    }

    pub fn quotient(ideal: GroebnerBasis) -> Arc<BaseRing> {
        Arc::new(BaseRing {
            ring: ideal.ring().clone(),
            ideal,
            cache: Mutex::default(),
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.ideal.is_zero_ideal()
    }

    /// Canonical representative modulo the ideal.
    #[inline]
    pub fn reduce(&self, p: &Poly) -> Poly {
        self.ideal.normal_form(p)
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.ideal.ideal_member(p)
    }

    /// Same variables, field and ideal.
    pub fn same_as(&self, other: &BaseRing) -> bool {
        std::ptr::eq(self, other)
            || (*self.ring == *other.ring
                && self.ideal.generators() == other.ideal.generators())
    }

    /// Field basis of the degree-`d` piece.
    pub fn degree_basis(&self, d: i32) -> Arc<DegreeBasis> {
        if let Some(b) = self.cache.lock().unwrap().get(&d) {
            return b.clone();
        }
        let monomials = self.ideal.quotient_degree_basis(d).monomials;
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let b = Arc::new(DegreeBasis { monomials, index });
        self.cache.lock().unwrap().entry(d).or_insert(b).clone()
    }

    /// Largest degree with a non-zero piece, when the ring is Artinian.
    pub fn top_degree(&self) -> Option<i32> {
        if self.ideal.krull_dimension() != Some(0) {
            return None;
        }
        let mut d = 0;
        let mut last = 0;
        let mut zeros = 0;
        // Pieces vanish from some degree on; a run of zeros longer than the
        // largest lead-term degree proves it.
        let bound = self
            .ideal
            .lead_terms()
            .iter()
            .map(|m| m.degree() as i32)
            .max()
            .unwrap_or(0);
        while zeros <= bound {
            if self.degree_basis(d).dim() > 0 {
                last = d;
                zeros = 0;
            } else {
                zeros += 1;
            }
            d += 1;
        }
        Some(last)
    }
}
