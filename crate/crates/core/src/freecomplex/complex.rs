use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{BaseRing, ComplexError, GradedFreeModule, PolyMatrix};

/// What lies beyond an end of the stored window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// All terms past this end are zero.
    Closed,
    /// The complex continues past this end but is not stored.
    Truncated,
}

/// A window `[lo, hi]` of a chain complex of graded free modules with
/// differentials `d_i : C_i -> C_{i-1}`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    base: Arc<BaseRing>,
    lo: i32,
    terms: Vec<GradedFreeModule>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<PolyMatrix>,
    lower: Boundary,
    upper: Boundary,
}

impl ChainComplex {
    /// Validates shapes, entry degrees and `d_{i-1} d_i = 0` over the base
    /// ring. Entries are reduced to normal form.
    pub fn new(
        base: Arc<BaseRing>,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<PolyMatrix>,
        lower: Boundary,
        upper: Boundary,
    ) -> Result<ChainComplex, ComplexError> {
        let c = ChainComplex::assemble(base, lo, terms, diffs, lower, upper)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Like [`ChainComplex::new`] without the `d^2 = 0` check, for
    /// constructions that preserve it.
    pub(crate) fn assemble(
        base: Arc<BaseRing>,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<PolyMatrix>,
        lower: Boundary,
        upper: Boundary,
    ) -> Result<ChainComplex, ComplexError> {
        if terms.is_empty() {
            return Err(ComplexError::EmptyWindow);
        }
        if diffs.len() + 1 != terms.len() {
            return Err(ComplexError::ShapeMismatch {
                position: lo,
                expected: (terms.len().saturating_sub(1), 0),
                found: (diffs.len(), 0),
            });
        }
        let mut normalized = Vec::with_capacity(diffs.len());
        for (k, d) in diffs.into_iter().enumerate() {
            let position = lo + k as i32 + 1;
            let (tgt, src) = (&terms[k], &terms[k + 1]);
            if d.rows() != tgt.rank() || d.cols() != src.rank() {
                return Err(ComplexError::ShapeMismatch {
                    position,
                    expected: (tgt.rank(), src.rank()),
                    found: (d.rows(), d.cols()),
                });
            }
            let mut d = d;
            d.target = tgt.degrees.clone();
            d.source = src.degrees.clone();
            let d = d.normalized(&base);
            if let Some((row, col)) = d.degree_violation() {
                return Err(ComplexError::DegreeMismatch {
                    position,
                    row,
                    col,
                    expected: d.entry_degree(row, col),
                });
            }
            normalized.push(d);
        }
        Ok(ChainComplex {
            base,
            lo,
            terms,
            diffs: normalized,
            lower,
            upper,
        })
    }

    fn check_square_zero(&self) -> Result<(), ComplexError> {
        for k in 1..self.diffs.len() {
            let prod = self.diffs[k - 1].mul(&self.diffs[k], &self.base);
            if let Some((row, col)) = first_nonzero(&prod) {
                return Err(ComplexError::NotAComplex {
                    position: self.lo + k as i32 + 1,
                    row,
                    col,
                    entry: self.base.ring().format(prod.get(row, col)),
                });
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<BaseRing> {
        &self.base
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn lower(&self) -> Boundary {
        self.lower
    }

    pub fn upper(&self) -> Boundary {
        self.upper
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn terms(&self) -> &[GradedFreeModule] {
        &self.terms
    }

    /// Stored term at position `i`.
    pub fn term(&self, i: i32) -> Option<&GradedFreeModule> {
        if i < self.lo || i > self.hi() {
            return None;
        }
        self.terms.get((i - self.lo) as usize)
    }

    /// Term at `i`, including the zero modules past a closed end.
    pub fn term_or_zero(&self, i: i32) -> Option<GradedFreeModule> {
        if let Some(t) = self.term(i) {
            return Some(t.clone());
        }
        let closed = if i < self.lo {
            self.lower == Boundary::Closed
        } else {
            self.upper == Boundary::Closed
        };
        closed.then(GradedFreeModule::zero)
    }

    pub fn rank(&self, i: i32) -> usize {
        self.term(i).map_or(0, |t| t.rank())
    }

    /// Stored differential `d_i : C_i -> C_{i-1}`, for `lo < i <= hi`.
    pub fn diff(&self, i: i32) -> Option<&PolyMatrix> {
        if i <= self.lo || i > self.hi() {
            return None;
        }
        self.diffs.get((i - self.lo - 1) as usize)
    }

    pub fn diffs(&self) -> &[PolyMatrix] {
        &self.diffs
    }

    /// `d_i`, or the zero map when one side is a known zero module.
    pub fn diff_or_zero(&self, i: i32) -> Option<PolyMatrix> {
        if let Some(d) = self.diff(i) {
            return Some(d.clone());
        }
        let src = self.term_or_zero(i)?;
        let tgt = self.term_or_zero(i - 1)?;
        Some(PolyMatrix::zeros(tgt.degrees, src.degrees))
    }

    /// Whether homology at `i` is determined by the window.
    pub fn homology_defined(&self, i: i32) -> bool {
        self.term(i).is_some() && self.diff_or_zero(i).is_some() && self.diff_or_zero(i + 1).is_some()
    }

    /// Generator counts per `(position, internal degree)`.
    pub fn betti_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for i in self.positions() {
            for &d in &self.term(i).unwrap().degrees {
                *out.entry((i, d)).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.rank()).collect()
    }

    /// First differential entry that is a unit, as `(position, row, col)`.
    pub fn unit_entry(&self) -> Option<(i32, usize, usize)> {
        self.diffs.iter().enumerate().find_map(|(k, d)| {
            d.unit_entry().map(|(r, c)| (self.lo + k as i32 + 1, r, c))
        })
    }

    pub fn is_minimal(&self) -> bool {
        self.unit_entry().is_none()
    }

    /// Restricts to positions `[lo, hi]`; cut ends become truncated.
    pub fn restrict(&self, lo: i32, hi: i32) -> ChainComplex {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi());
        assert!(lo <= hi, "restriction is empty");
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        ChainComplex {
            base: self.base.clone(),
            lo,
            terms: self.terms[a..=b].to_vec(),
            diffs: self.diffs[a..b].to_vec(),
            lower: if lo == self.lo { self.lower } else { Boundary::Truncated },
            upper: if hi == self.hi() { self.upper } else { Boundary::Truncated },
        }
    }

    /// Replaces the provenance labels of every term.
    pub fn relabel(&mut self, f: impl Fn(i32, &str) -> String) {
        let lo = self.lo;
        for (k, t) in self.terms.iter_mut().enumerate() {
            *t = t.relabel(|l| f(lo + k as i32, l));
        }
    }

    /// The same complex with coefficients pushed to another base ring
    /// (typically `S -> S/I`).
    pub fn over(&self, base: &Arc<BaseRing>) -> ChainComplex {
        ChainComplex {
            base: base.clone(),
            lo: self.lo,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.normalized(base)).collect(),
            lower: self.lower,
            upper: self.upper,
        }
    }

    /// Adds `t` to every generator degree.
    pub fn raise_degrees(&self, t: i32) -> ChainComplex {
        let raise = |v: &[i32]| v.iter().map(|d| d + t).collect::<Vec<_>>();
        ChainComplex {
            base: self.base.clone(),
            lo: self.lo,
            terms: self
                .terms
                .iter()
                .map(|m| GradedFreeModule::labelled(raise(&m.degrees), m.labels.clone()))
                .collect(),
            diffs: self
                .diffs
                .iter()
                .map(|d| {
                    let mut d = d.clone();
                    d.source = raise(&d.source);
                    d.target = raise(&d.target);
                    d
                })
                .collect(),
            lower: self.lower,
            upper: self.upper,
        }
    }
}

pub(crate) fn first_nonzero(m: &PolyMatrix) -> Option<(usize, usize)> {
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            if !m.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// `Hom(C, R)` with internal degrees reflected: `(C*)_{-i} = C_i*` whose
/// generators have degree `shift - deg`. The differential out of position
/// `-i + 1` is `(-1)^i d_i^T`.
pub fn dual(c: &ChainComplex, shift: i32) -> ChainComplex {
    let field = c.base.field();
    let hi = c.hi();
    let terms = (0..c.terms.len())
        .map(|k| {
            let t = c.term(hi - k as i32).unwrap();
            GradedFreeModule::labelled(
                t.degrees.iter().map(|d| shift - d).collect(),
                t.labels.iter().map(|l| dual_label(l)).collect(),
            )
        })
        .collect();
    let diffs = (0..c.diffs.len())
        .map(|k| {
            let i = hi - k as i32;
            c.diff(i).unwrap().dual(shift).signed(i, field)
        })
        .collect();
    ChainComplex {
        base: c.base.clone(),
        lo: -hi,
        terms,
        diffs,
        lower: c.upper,
        upper: c.lower,
    }
}

fn dual_label(l: &str) -> String {
    if l.is_empty() {
        String::new()
    } else if let Some(s) = l.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
        s.to_string()
    } else {
        format!("dual({l})")
    }
}

/// `C[k]`: the term at `j` is `C_{j-k}` and differentials are multiplied
/// by `(-1)^k`.
pub fn shift(c: &ChainComplex, k: i32) -> ChainComplex {
    let field = c.base.field();
    ChainComplex {
        base: c.base.clone(),
        lo: c.lo + k,
        terms: c.terms.clone(),
        diffs: c.diffs.iter().map(|d| d.signed(k, field)).collect(),
        lower: c.lower,
        upper: c.upper,
    }
}

/// Degree-preserving map of complexes, one matrix per position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub components: BTreeMap<i32, PolyMatrix>,
}

impl ChainMap {
    pub fn new() -> Self {
        ChainMap::default()
    }

    pub fn insert(&mut self, i: i32, m: PolyMatrix) {
        self.components.insert(i, m);
    }

    pub fn component(&self, i: i32) -> Option<&PolyMatrix> {
        self.components.get(&i)
    }

    /// `phi_i`, or zero when source or target is a known zero module.
    pub fn component_or_zero(&self, i: i32, c: &ChainComplex, d: &ChainComplex) -> Option<PolyMatrix> {
        if let Some(m) = self.component(i) {
            return Some(m.clone());
        }
        let src = c.term_or_zero(i)?;
        let tgt = d.term_or_zero(i)?;
        (src.rank() == 0 || tgt.rank() == 0).then(|| PolyMatrix::zeros(tgt.degrees, src.degrees))
    }
}

/// Checks `d^D_i phi_i = phi_{i-1} d^C_i` at every position where all four
/// maps are available, plus shapes and degrees of each component.
pub fn check_chain_map(phi: &ChainMap, c: &ChainComplex, d: &ChainComplex) -> Result<(), ComplexError> {
    if !c.base.same_as(&d.base) {
        return Err(ComplexError::RingMismatch);
    }
    let base = &c.base;
    for (&i, m) in &phi.components {
        let (Some(src), Some(tgt)) = (c.term_or_zero(i), d.term_or_zero(i)) else {
            return Err(ComplexError::WindowEdge { position: i });
        };
        if m.rows() != tgt.rank() || m.cols() != src.rank() {
            return Err(ComplexError::ShapeMismatch {
                position: i,
                expected: (tgt.rank(), src.rank()),
                found: (m.rows(), m.cols()),
            });
        }
        if m.source != src.degrees || m.target != tgt.degrees {
            return Err(ComplexError::DegreeMismatch {
                position: i,
                row: 0,
                col: 0,
                expected: 0,
            });
        }
        if let Some((row, col)) = m.degree_violation() {
            return Err(ComplexError::DegreeMismatch {
                position: i,
                row,
                col,
                expected: m.entry_degree(row, col),
            });
        }
    }
    let lo = c.lo.min(d.lo);
    let hi = c.hi().max(d.hi());
    for i in lo..=hi + 1 {
        let (Some(dc), Some(dd), Some(p), Some(q)) = (
            c.diff_or_zero(i),
            d.diff_or_zero(i),
            phi.component_or_zero(i, c, d),
            phi.component_or_zero(i - 1, c, d),
        ) else {
            continue;
        };
        let lhs = dd.mul(&p, base);
        let rhs = q.mul(&dc, base);
        let diff = lhs.sub(&rhs, base.field());
        if let Some((row, col)) = first_nonzero(&diff) {
            return Err(ComplexError::NotAChainMap {
                position: i,
                row,
                col,
                entry: base.ring().format(diff.get(row, col)),
            });
        }
    }
    Ok(())
}

/// Mapping cone of `phi : C -> D`: `T_i = C_i ⊕ D_{i+1}` with
/// `d_i = [[d^C_i, 0], [(-1)^i phi_i, d^D_{i+1}]]`. The window is the set of
/// positions where both summands are known. `phi` must be a chain map.
pub fn mapping_cone(phi: &ChainMap, c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex, ComplexError> {
    check_chain_map(phi, c, d)?;
    let known = |i: i32| c.term_or_zero(i).is_some() && d.term_or_zero(i + 1).is_some();
    let lo_all = c.lo.min(d.lo - 1);
    let hi_all = c.hi().max(d.hi() - 1);
    let positions: Vec<i32> = (lo_all..=hi_all).filter(|&i| known(i)).collect();
    let (Some(&lo), Some(&hi)) = (positions.first(), positions.last()) else {
        return Err(ComplexError::EmptyWindow);
    };
    if positions.len() as i32 != hi - lo + 1 {
        return Err(ComplexError::EmptyWindow);
    }
    let field = c.base.field();
    let terms: Vec<GradedFreeModule> = (lo..=hi)
        .map(|i| c.term_or_zero(i).unwrap().direct_sum(&d.term_or_zero(i + 1).unwrap()))
        .collect();
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        let dc = c.diff_or_zero(i).ok_or(ComplexError::WindowEdge { position: i })?;
        let dd = d.diff_or_zero(i + 1).ok_or(ComplexError::WindowEdge { position: i + 1 })?;
        let p = phi
            .component_or_zero(i, c, d)
            .ok_or(ComplexError::MissingComponent { position: i })?
            .signed(i, field);
        let zero = PolyMatrix::zeros(dc.target.clone(), dd.source.clone());
        diffs.push(PolyMatrix::block(&dc, &zero, &p, &dd));
    }
    let lower_closed = c.lower == super::Boundary::Closed
        && d.lower == super::Boundary::Closed
        && lo <= c.lo
        && lo < d.lo;
    let upper_closed = c.upper == super::Boundary::Closed
        && d.upper == super::Boundary::Closed
        && hi >= c.hi()
        && hi >= d.hi() - 1;
    let b = |closed: bool| if closed { Boundary::Closed } else { Boundary::Truncated };
    ChainComplex::assemble(c.base.clone(), lo, terms, diffs, b(lower_closed), b(upper_closed))
}
