//! Koszul complexes, exterior-algebra bookkeeping and wedge-multiplication
//! maps.
//!
//! Exterior basis elements are subsets of `{0..n}` stored as bitmasks and
//! listed in lexicographic order of their sorted tuples. `e_U ∧ e_T` equals
//! `(-1)^k e_{U ∪ T}` where `k` counts pairs `(u, t)` with `t < u`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Poly, PolyRing, PrimeField};
use crate::freecomplex::{BaseRing, Boundary, ChainComplex, ComplexError, GradedFreeModule, PolyMatrix};
use crate::groebner::{lift_through, GroebnerError};

pub const MAX_EXTERIOR_RANK: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("sequence element {index} is zero or not homogeneous")]
    BadElement { index: usize },
    #[error("exterior rank {0} exceeds {MAX_EXTERIOR_RANK}")]
    TooLarge(usize),
    #[error("g_{column} - sum_i A[i][{column}] f_i = {residual}, not zero")]
    LiftIdentityFails { column: usize, residual: String },
    #[error("A[{row}][{column}] is not homogeneous of degree {expected}")]
    LiftDegree { row: usize, column: usize, expected: i32 },
    #[error("lift matrix is {found:?}, expected {expected:?}")]
    LiftShape { expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Basis of `Λ^k` of a rank-`n` free module.
#[derive(Debug, Clone)]
pub struct ExteriorBasis {
    pub n: usize,
    pub k: usize,
    subsets: Vec<u32>,
    index: HashMap<u32, usize>,
}

impl ExteriorBasis {
    pub fn new(n: usize, k: usize) -> ExteriorBasis {
        assert!(n <= MAX_EXTERIOR_RANK);
        let mut subsets = Vec::new();
        if k <= n {
            let mut cur = Vec::with_capacity(k);
            combinations(n, k, 0, &mut cur, &mut subsets);
        }
        let index = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        ExteriorBasis { n, k, subsets, index }
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[u32] {
        &self.subsets
    }

    pub fn index_of(&self, s: u32) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Sum of the weights of each subset's members.
    pub fn degrees(&self, weights: &[i32]) -> Vec<i32> {
        self.subsets.iter().map(|&s| subset_weight(s, weights)).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.subsets.iter().map(|&s| subset_label(s)).collect()
    }
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
    if cur.len() == k {
        out.push(cur.iter().fold(0u32, |m, &i| m | (1 << i)));
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

pub fn subset_weight(s: u32, weights: &[i32]) -> i32 {
    members(s).map(|i| weights[i]).sum()
}

pub fn members(s: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s & (1 << i) != 0)
}

/// `{1,3}` style label with 1-based indices.
pub fn subset_label(s: u32) -> String {
    let parts: Vec<String> = members(s).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Sign of `e_u ∧ e_t` relative to `e_{u ∪ t}`, or `None` if they overlap.
pub fn wedge_sign(u: u32, t: u32) -> Option<i32> {
    if u & t != 0 {
        return None;
    }
    let inversions: u32 = members(u).map(|b| (t & ((1u32 << b) - 1)).count_ones()).sum();
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

fn signed_poly(p: &Poly, sign: i32, field: PrimeField) -> Poly {
    if sign > 0 {
        p.clone()
    } else {
        p.neg(field)
    }
}

/// Homogeneous element of `Λ^k` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    pub n: usize,
    pub k: usize,
    /// Non-zero coefficients keyed by subset mask.
    pub terms: BTreeMap<u32, Poly>,
}

impl ExteriorElement {
    pub fn zero(n: usize, k: usize) -> Self {
        ExteriorElement {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    /// `Σ v_i e_i` in `Λ^1`.
    pub fn vector(v: &[Poly]) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (1u32 << i, p.clone()))
            .collect();
        ExteriorElement { n: v.len(), k: 1, terms }
    }

    pub fn coefficient(&self, s: u32) -> Poly {
        self.terms.get(&s).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn wedge(&self, other: &ExteriorElement, field: PrimeField) -> ExteriorElement {
        assert_eq!(self.n, other.n);
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (&u, a) in &self.terms {
            for (&t, b) in &other.terms {
                let Some(sign) = wedge_sign(u, t) else { continue };
                let e = out.entry(u | t).or_default();
                *e = e.add(&signed_poly(&a.mul(b, field), sign, field), field);
            }
        }
        out.retain(|_, p| !p.is_zero());
        ExteriorElement {
            n: self.n,
            k: self.k + other.k,
            terms: out,
        }
    }

    /// Internal degree given the weights of the basis vectors, if the
    /// element is non-zero and homogeneous.
    pub fn degree(&self, weights: &[i32]) -> Option<i32> {
        let mut deg = None;
        for (&s, p) in &self.terms {
            if !p.is_homogeneous() {
                return None;
            }
            let d = p.total_degree()? as i32 + subset_weight(s, weights);
            if *deg.get_or_insert(d) != d {
                return None;
            }
        }
        deg
    }
}

/// Matrix of `ω ↦ v ∧ ω` from `Λ^i` to `Λ^{i+k}`. Target generators carry
/// their subset weights; source generators are raised by `deg_v`, the
/// internal degree of `v`.
pub fn wedge_map(v: &ExteriorElement, i: usize, weights: &[i32], deg_v: i32, field: PrimeField) -> PolyMatrix {
    let src = ExteriorBasis::new(v.n, i);
    let tgt = ExteriorBasis::new(v.n, i + v.k);
    let mut m = PolyMatrix::zeros(
        tgt.degrees(weights),
        src.degrees(weights).iter().map(|d| d + deg_v).collect(),
    );
    for (col, &t) in src.subsets().iter().enumerate() {
        for (&u, coef) in &v.terms {
            let Some(sign) = wedge_sign(u, t) else { continue };
            let row = tgt.index_of(u | t).unwrap();
            m.set(row, col, signed_poly(coef, sign, field));
        }
    }
    m
}

fn sequence_degrees(f: &[Poly]) -> Result<Vec<i32>, KoszulError> {
    f.iter()
        .enumerate()
        .map(|(index, p)| match p.total_degree() {
            Some(d) if p.is_homogeneous() => Ok(d as i32),
            _ => Err(KoszulError::BadElement { index }),
        })
        .collect()
}

/// The Koszul complex of `f` over `base`, positions `0..=n`, closed at both
/// ends. Generators of `Λ^k` sit in degree `Σ_{t ∈ T} deg f_t`.
pub fn koszul_complex(base: &Arc<BaseRing>, f: &[Poly]) -> Result<ChainComplex, KoszulError> {
    let n = f.len();
    if n > MAX_EXTERIOR_RANK {
        return Err(KoszulError::TooLarge(n));
    }
    let weights = sequence_degrees(f)?;
    let field = base.field();
    let terms = (0..=n)
        .map(|k| {
            let b = ExteriorBasis::new(n, k);
            GradedFreeModule::labelled(b.degrees(&weights), b.labels())
        })
        .collect();
    let diffs = (1..=n).map(|k| koszul_differential(f, &weights, k, field)).collect();
    Ok(ChainComplex::new(base.clone(), 0, terms, diffs, Boundary::Closed, Boundary::Closed)?)
}

/// Koszul differential `Λ^k -> Λ^{k-1}`:
/// `e_{i_1} ∧ … ∧ e_{i_k} ↦ Σ_s (-1)^{s+1} f_{i_s} e_{… \hat{i_s} …}`.
pub fn koszul_differential(f: &[Poly], weights: &[i32], k: usize, field: PrimeField) -> PolyMatrix {
    let n = f.len();
    let src = ExteriorBasis::new(n, k);
    let tgt = ExteriorBasis::new(n, k - 1);
    let mut m = PolyMatrix::zeros(tgt.degrees(weights), src.degrees(weights));
    for (col, &t) in src.subsets().iter().enumerate() {
        for (s, i) in members(t).enumerate() {
            let row = tgt.index_of(t & !(1 << i)).unwrap();
            m.set(row, col, signed_poly(&f[i], if s % 2 == 0 { 1 } else { -1 }, field));
        }
    }
    m
}

/// `n × c` matrix with `g_j = Σ_i A[i][j] f_i`, validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftMatrix {
    pub a: Vec<Vec<Poly>>,
    pub f: Vec<Poly>,
    pub g: Vec<Poly>,
    pub f_degrees: Vec<i32>,
    pub g_degrees: Vec<i32>,
}

impl LiftMatrix {
    /// Checks the identity `g_j = Σ_i A[i][j] f_i` and the entry degrees.
    pub fn new(ring: &PolyRing, f: Vec<Poly>, g: Vec<Poly>, a: Vec<Vec<Poly>>) -> Result<LiftMatrix, KoszulError> {
        let (n, c) = (f.len(), g.len());
        let found = (a.len(), a.first().map_or(c, |r| r.len()));
        if found != (n, c) || a.iter().any(|r| r.len() != c) {
            return Err(KoszulError::LiftShape { expected: (n, c), found });
        }
        let f_degrees = sequence_degrees(&f)?;
        let g_degrees = sequence_degrees(&g)?;
        let field = ring.field();
        for j in 0..c {
            let mut residual = g[j].clone();
            for i in 0..n {
                let e = &a[i][j];
                if !e.is_zero() {
                    let expected = g_degrees[j] - f_degrees[i];
                    if !e.is_homogeneous() || e.total_degree().map(|d| d as i32) != Some(expected) {
                        return Err(KoszulError::LiftDegree { row: i, column: j, expected });
                    }
                }
                residual = residual.sub(&e.mul(&f[i], field), field);
            }
            if !residual.is_zero() {
                return Err(KoszulError::LiftIdentityFails {
                    column: j,
                    residual: ring.format(&residual),
                });
            }
        }
        Ok(LiftMatrix {
            a,
            f,
            g,
            f_degrees,
            g_degrees,
        })
    }

    /// Computes `A` by division against a Gröbner basis of `(f)`; errors if
    /// some `g_j` is not in `(f)`.
    pub fn compute(ring: &Arc<PolyRing>, f: Vec<Poly>, g: Vec<Poly>) -> Result<LiftMatrix, KoszulError> {
        let f_degrees = sequence_degrees(&f)?;
        let g_degrees = sequence_degrees(&g)?;
        let n = f.len();
        let mut a = vec![Vec::with_capacity(g.len()); n];
        for (j, gj) in g.iter().enumerate() {
            let q = lift_through(ring, gj, &f)?;
            for i in 0..n {
                let d = g_degrees[j] - f_degrees[i];
                let e = if d < 0 { Poly::zero() } else { q[i].homogeneous_part(d as u32) };
                a[i].push(e);
            }
        }
        LiftMatrix::new(ring, f, g, a)
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn c(&self) -> usize {
        self.g.len()
    }

    /// Column `j` as an element of `Λ^1`.
    pub fn column(&self, j: usize) -> ExteriorElement {
        let v: Vec<Poly> = self.a.iter().map(|row| row[j].clone()).collect();
        ExteriorElement::vector(&v)
    }

    /// `Σ deg g_j`.
    pub fn total_g_degree(&self) -> i32 {
        self.g_degrees.iter().sum()
    }

    pub fn total_f_degree(&self) -> i32 {
        self.f_degrees.iter().sum()
    }
}

/// `α = a_1 ∧ … ∧ a_c ∈ Λ^c`; the coefficient on `T` is the minor of `A`
/// on rows `T`.
pub fn alpha_element(a: &LiftMatrix, field: PrimeField) -> ExteriorElement {
    let mut out = ExteriorElement {
        n: a.n(),
        k: 0,
        terms: BTreeMap::from([(0u32, Poly::one())]),
    };
    for j in 0..a.c() {
        out = out.wedge(&a.column(j), field);
    }
    out
}

/// Wedge homotopy for `g = Σ a_i f_i` on the Koszul complex of `f`:
/// component `i` maps `Λ^i -> Λ^{i+1}` by `ω ↦ (Σ a_i e_i) ∧ ω`.
pub fn koszul_homotopy(
    ring: &PolyRing,
    f: &[Poly],
    a: &[Poly],
    g: &Poly,
) -> Result<Vec<PolyMatrix>, KoszulError> {
    let lift = LiftMatrix::new(
        ring,
        f.to_vec(),
        vec![g.clone()],
        a.iter().map(|p| vec![p.clone()]).collect(),
    )?;
    let v = lift.column(0);
    Ok((0..=f.len())
        .map(|i| wedge_map(&v, i, &lift.f_degrees, lift.g_degrees[0], ring.field()))
        .collect())
}
