//! Buchberger's algorithm over `F_p` in grevlex, normal forms, ideal
//! membership, lifting through a generating set, and graded bases of
//! quotient rings.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Monomial, Poly, PolyRing, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("generator {index} is not homogeneous")]
    InhomogeneousInput { index: usize },
    #[error("polynomial is not in the ideal (normal form {remainder})")]
    NotInIdeal { remainder: String },
    #[error("certification failed: S-pair ({0}, {1}) does not reduce to zero")]
    Uncertified(usize, usize),
}

/// Reduced Gröbner basis of a homogeneous ideal, together with the
/// expression of every basis element in terms of the original generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
    leads: Vec<Monomial>,
    originals: Vec<Poly>,
    ideal_degrees: Vec<Option<u32>>,
    cofactors: Vec<Vec<Poly>>,
}

/// A field basis of `(S/I)_d` made of standard monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientDegreeBasis {
    pub degree: i32,
    pub monomials: Vec<Monomial>,
}

impl QuotientDegreeBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

struct Element {
    poly: Poly,
    cof: Vec<Poly>,
}


/// Full reduction of `p` by `basis`, tracking cofactors when `cof` is given.
/// Division always uses the first basis element (in list order) whose lead
/// term divides the current term.
fn reduce_tracked(
    mut p: Poly,
    mut cof: Option<&mut Vec<Poly>>,
    basis: &[Element],
    field: PrimeField,
) -> Poly {
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    while let Some((lm, lc)) = p.leading() {
        let hit = basis.iter().find(|e| {
            e.poly
                .leading()
                .is_some_and(|(m, _)| m.divides(&lm))
        });
        match hit {
            Some(e) => {
                let (gm, gc) = e.poly.leading().unwrap();
                let q = gm.quotient_of(&lm);
                let c = field.mul(lc, field.inv(gc));
                p = p.sub(&e.poly.mul_term(&q, c, field), field);
                if let Some(cof) = cof.as_deref_mut() {
                    for (acc, ec) in cof.iter_mut().zip(&e.cof) {
                        *acc = acc.sub(&ec.mul_term(&q, c, field), field);
                    }
                }
            }
            None => {
                rem.push((lm, lc));
                p = Poly::from_terms(p.terms()[1..].to_vec(), field);
            }
        }
    }
    Poly::from_terms(rem, field)
}

impl GroebnerBasis {
    /// The zero ideal.
    pub fn zero_ideal(ring: Arc<PolyRing>) -> GroebnerBasis {
        GroebnerBasis {
            ring,
            gens: Vec::new(),
            leads: Vec::new(),
            originals: Vec::new(),
            ideal_degrees: Vec::new(),
            cofactors: Vec::new(),
        }
    }

    /// Reduced Gröbner basis in grevlex. Pairs are processed by the normal
    /// selection strategy: smallest lcm degree first, ties broken by the
    /// lexicographic order of the pair indices.
    pub fn buchberger(ring: Arc<PolyRing>, gens: &[Poly]) -> Result<GroebnerBasis, GroebnerError> {
        let field = ring.field();
        for (i, g) in gens.iter().enumerate() {
            if !g.is_homogeneous() {
                return Err(GroebnerError::InhomogeneousInput { index: i });
            }
        }
        let k = gens.len();
        let unit = |i: usize, c: u32| -> Vec<Poly> {
            (0..k)
                .map(|j| if j == i { Poly::constant(c) } else { Poly::zero() })
                .collect()
        };
        let mut basis: Vec<Element> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if let Some((_, c)) = g.leading() {
                let inv = field.inv(c);
                basis.push(Element {
                    poly: g.scale(inv, field),
                    cof: unit(i, inv),
                });
            }
        }

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 0..basis.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        let lead = |e: &Element| e.poly.leading().unwrap().0;
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by_key(|&t| {
                    let (i, j) = pairs[t];
                    (lead(&basis[i]).lcm(&lead(&basis[j])).degree(), i, j)
                })
                .unwrap();
            let (i, j) = pairs.swap_remove(best);
            let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
            if li.is_coprime(&lj) {
                continue;
            }
            let l = li.lcm(&lj);
            let (qi, qj) = (li.quotient_of(&l), lj.quotient_of(&l));
            let s = basis[i]
                .poly
                .mul_term(&qi, 1, field)
                .sub(&basis[j].poly.mul_term(&qj, 1, field), field);
            let mut cof: Vec<Poly> = basis[i]
                .cof
                .iter()
                .zip(&basis[j].cof)
                .map(|(a, b)| a.mul_term(&qi, 1, field).sub(&b.mul_term(&qj, 1, field), field))
                .collect();
            let r = reduce_tracked(s, Some(&mut cof), &basis, field);
            if let Some((_, c)) = r.leading() {
                let inv = field.inv(c);
                let n = basis.len();
                basis.push(Element {
                    poly: r.scale(inv, field),
                    cof: cof.iter().map(|p| p.scale(inv, field)).collect(),
                });
                for t in 0..n {
                    pairs.push((t, n));
                }
            }
        }

        // Minimalize: drop elements whose lead term is divisible by another
        // surviving lead term (earlier wins on ties).
        let mut keep: Vec<Element> = Vec::new();
        for (t, e) in basis.iter().enumerate() {
            let lt = lead(e);
            let redundant = basis.iter().enumerate().any(|(u, o)| {
                let lo = lead(o);
                u != t && lo.divides(&lt) && (lo != lt || u < t)
            });
            if !redundant {
                keep.push(Element {
                    poly: e.poly.clone(),
                    cof: e.cof.clone(),
                });
            }
        }
        keep.sort_by_key(|a| std::cmp::Reverse(lead(a)));

        // Inter-reduce tails.
        for t in 0..keep.len() {
            let others: Vec<Element> = keep
                .iter()
                .enumerate()
                .filter(|&(u, _)| u != t)
                .map(|(_, e)| Element {
                    poly: e.poly.clone(),
                    cof: e.cof.clone(),
                })
                .collect();
            let (lm, lc) = keep[t].poly.leading().unwrap();
            let tail = Poly::from_terms(keep[t].poly.terms()[1..].to_vec(), field);
            let mut cof = keep[t].cof.clone();
            let red = reduce_tracked(tail, Some(&mut cof), &others, field);
            keep[t].poly = Poly::monomial(lm, lc).add(&red, field);
            keep[t].cof = cof;
        }

        let gb = GroebnerBasis {
            leads: keep.iter().map(lead).collect(),
            cofactors: keep.iter().map(|e| e.cof.clone()).collect(),
            gens: keep.into_iter().map(|e| e.poly).collect(),
            ideal_degrees: gens.iter().map(|g| g.total_degree()).collect(),
            originals: gens.to_vec(),
            ring,
        };
        gb.certify()?;
        Ok(gb)
    }

    /// Re-checks Buchberger's criterion on the final basis.
    fn certify(&self) -> Result<(), GroebnerError> {
        let field = self.ring.field();
        for j in 0..self.gens.len() {
            for i in 0..j {
                let (li, lj) = (self.leads[i], self.leads[j]);
                if li.is_coprime(&lj) {
                    continue;
                }
                let l = li.lcm(&lj);
                let s = self.gens[i]
                    .mul_term(&li.quotient_of(&l), 1, field)
                    .sub(&self.gens[j].mul_term(&lj.quotient_of(&l), 1, field), field);
                if !self.normal_form(&s).is_zero() {
                    return Err(GroebnerError::Uncertified(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn lead_terms(&self) -> &[Monomial] {
        &self.leads
    }

    /// The generators the basis was computed from.
    pub fn original_generators(&self) -> &[Poly] {
        &self.originals
    }

    /// Total degrees of the original generators (`None` for zero).
    pub fn ideal_degrees(&self) -> &[Option<u32>] {
        &self.ideal_degrees
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.leads.iter().any(|m| m.degree() == 0)
    }

    /// Remainder of full reduction; no term of the result is divisible by a
    /// lead term.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        if self.gens.is_empty() || p.is_zero() {
            return p.clone();
        }
        let field = self.ring.field();
        let mut p = p.clone();
        let mut rem: Vec<(Monomial, u32)> = Vec::new();
        while let Some((lm, lc)) = p.leading() {
            match self.leads.iter().position(|g| g.divides(&lm)) {
                Some(k) => {
                    let q = self.leads[k].quotient_of(&lm);
                    p = p.sub(&self.gens[k].mul_term(&q, lc, field), field);
                }
                None => {
                    rem.push((lm, lc));
                    p = Poly::from_terms(p.terms()[1..].to_vec(), field);
                }
            }
        }
        Poly::from_terms(rem, field)
    }

    /// Whether a monomial is standard (not divisible by any lead term).
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leads.iter().any(|g| g.divides(m))
    }

    pub fn ideal_member(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Writes `g = Σ q_i f_i` where `f` are the original generators, by
    /// dividing `g` by the basis in list order and substituting the tracked
    /// cofactors. The identity is verified before returning.
    pub fn lift(&self, g: &Poly) -> Result<Vec<Poly>, GroebnerError> {
        let field = self.ring.field();
        let k = self.originals.len();
        let mut quot = vec![Poly::zero(); self.gens.len()];
        let mut p = g.clone();
        let mut rem: Vec<(Monomial, u32)> = Vec::new();
        while let Some((lm, lc)) = p.leading() {
            match self.leads.iter().position(|l| l.divides(&lm)) {
                Some(t) => {
                    let q = self.leads[t].quotient_of(&lm);
                    p = p.sub(&self.gens[t].mul_term(&q, lc, field), field);
                    quot[t] = quot[t].add(&Poly::monomial(q, lc), field);
                }
                None => {
                    rem.push((lm, lc));
                    p = Poly::from_terms(p.terms()[1..].to_vec(), field);
                }
            }
        }
        if !rem.is_empty() {
            return Err(GroebnerError::NotInIdeal {
                remainder: self.ring.format(&Poly::from_terms(rem, field)),
            });
        }
        let mut out = vec![Poly::zero(); k];
        for (t, q) in quot.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (i, c) in self.cofactors[t].iter().enumerate() {
                out[i] = out[i].add(&q.mul(c, field), field);
            }
        }
        let check = out
            .iter()
            .zip(&self.originals)
            .fold(Poly::zero(), |acc, (q, f)| acc.add(&q.mul(f, field), field));
        assert_eq!(&check, g, "lift identity failed");
        Ok(out)
    }

    /// Standard monomials of degree `d`, descending in grevlex.
    pub fn quotient_degree_basis(&self, d: i32) -> QuotientDegreeBasis {
        let monomials = if d < 0 {
            Vec::new()
        } else {
            Monomial::all_of_degree(self.ring.nvars(), d as u32)
                .into_iter()
                .filter(|m| self.is_standard(m))
                .collect()
        };
        QuotientDegreeBasis { degree: d, monomials }
    }

    /// Krull dimension of `S/I`, read off the lead-term ideal: the largest
    /// set of variables containing the support of no lead term. `None` for
    /// the unit ideal.
    pub fn krull_dimension(&self) -> Option<usize> {
        if self.is_unit_ideal() {
            return None;
        }
        let n = self.ring.nvars();
        let supports: HashSet<u32> = self.leads.iter().map(|m| m.support()).collect();
        let mut best = 0;
        for set in 0u32..(1u32 << n) {
            let size = set.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !set != 0) {
                best = size;
            }
        }
        Some(best)
    }
}

/// Convenience wrapper around [`GroebnerBasis::lift`] for an arbitrary
/// generating list.
pub fn lift_through(ring: &Arc<PolyRing>, g: &Poly, f: &[Poly]) -> Result<Vec<Poly>, GroebnerError> {
    GroebnerBasis::buchberger(ring.clone(), f)?.lift(g)
}

/// Homogeneous `f` is a regular sequence iff `dim S/(f) = nvars - len(f)`.
pub fn is_regular_sequence(ring: &Arc<PolyRing>, f: &[Poly]) -> Result<bool, GroebnerError> {
    if f.iter().any(|p| p.is_zero()) {
        return Ok(false);
    }
    let gb = GroebnerBasis::buchberger(ring.clone(), f)?;
    Ok(match gb.krull_dimension() {
        None => false,
        Some(d) => f.len() <= ring.nvars() && d == ring.nvars() - f.len(),
    })
}
