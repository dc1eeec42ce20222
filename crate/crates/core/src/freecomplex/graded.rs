use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{Poly, PrimeField};
use crate::exec::Exec;
use crate::linalg::{sparse_rank, DenseMatrix, SparseVec};

use super::base::DegreeBasis;
use super::{BaseRing, ChainComplex, ComplexError, PolyMatrix};

/// Coordinates on the degree-`d` piece of a graded free module: the
/// standard monomials of each summand, concatenated.
#[derive(Debug, Clone)]
pub struct PieceLayout {
    field: PrimeField,
    bases: Vec<Arc<DegreeBasis>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl PieceLayout {
    pub fn new(base: &BaseRing, degrees: &[i32], d: i32) -> PieceLayout {
        let bases: Vec<_> = degrees.iter().map(|&a| base.degree_basis(d - a)).collect();
        let mut offsets = Vec::with_capacity(bases.len());
        let mut dim = 0;
        for b in &bases {
            offsets.push(dim);
            dim += b.dim();
        }
        PieceLayout {
            field: base.field(),
            bases,
            offsets,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of a module element given in normal form.
    pub fn vector(&self, elem: &[Poly]) -> SparseVec {
        let mut v = Vec::new();
        for (i, p) in elem.iter().enumerate() {
            for (m, c) in p.terms() {
                let k = self.bases[i]
                    .index_of(m)
                    .expect("element is not homogeneous of the layout degree");
                v.push(((self.offsets[i] + k) as u32, *c));
            }
        }
        v.sort_unstable_by_key(|t| t.0);
        v
    }

    /// Module element with the given dense coordinates.
    pub fn element(&self, x: &[u32]) -> Vec<Poly> {
        self.bases
            .iter()
            .zip(&self.offsets)
            .map(|(b, &o)| {
                let terms: Vec<_> = b
                    .monomials
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| x[o + k] != 0)
                    .map(|(k, m)| (*m, x[o + k]))
                    .collect();
                // monomials are listed descending, so terms are canonical
                Poly::from_terms(terms, self.field)
            })
            .collect()
    }
}

/// The degree-`d` component of a matrix map as sparse columns, one per
/// basis element of the source piece.
pub fn graded_piece(base: &BaseRing, m: &PolyMatrix, d: i32) -> (PieceLayout, PieceLayout, Vec<SparseVec>) {
    let field = base.field();
    let src = PieceLayout::new(base, &m.source, d);
    let tgt = PieceLayout::new(base, &m.target, d);
    let mut cols = Vec::with_capacity(src.dim());
    for j in 0..m.cols() {
        for u in &src.bases[j].monomials {
            let mut v: SparseVec = Vec::new();
            for i in 0..m.rows() {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let prod = base.reduce(&e.mul_term(u, 1, field));
                for (mono, c) in prod.terms() {
                    let k = tgt.bases[i].index_of(mono).expect("entry degree mismatch");
                    v.push(((tgt.offsets[i] + k) as u32, *c));
                }
            }
            v.sort_unstable_by_key(|t| t.0);
            cols.push(v);
        }
    }
    (src, tgt, cols)
}

pub fn graded_rank(base: &BaseRing, m: &PolyMatrix, d: i32) -> usize {
    let (_, _, cols) = graded_piece(base, m, d);
    sparse_rank(cols, base.field())
}

pub fn graded_dense(base: &BaseRing, m: &PolyMatrix, d: i32) -> DenseMatrix {
    let (_, tgt, cols) = graded_piece(base, m, d);
    DenseMatrix::from_sparse_columns(tgt.dim(), &cols)
}

/// `dim_k H_i(C)_d` for every `d` in `degrees`.
pub fn homology_dims(
    c: &ChainComplex,
    i: i32,
    degrees: std::ops::RangeInclusive<i32>,
    exec: Exec,
) -> Result<Vec<usize>, ComplexError> {
    let table = homology_table(c, i..=i, degrees, exec)?;
    Ok(table.into_values().collect())
}

/// `dim_k H_i(C)_d` over a grid of positions and internal degrees. Ranks of
/// each differential piece are computed once and shared.
pub fn homology_table(
    c: &ChainComplex,
    positions: std::ops::RangeInclusive<i32>,
    degrees: std::ops::RangeInclusive<i32>,
    exec: Exec,
) -> Result<BTreeMap<(i32, i32), usize>, ComplexError> {
    for i in positions.clone() {
        if !c.homology_defined(i) {
            return Err(ComplexError::WindowEdge { position: i });
        }
    }
    let base = c.base().clone();
    let diff_positions: Vec<i32> = (*positions.start()..=*positions.end() + 1).collect();
    let mut jobs = Vec::new();
    for &i in &diff_positions {
        for d in degrees.clone() {
            jobs.push((i, d));
        }
    }
    let ranks: Vec<usize> = exec.map(jobs.clone(), |(i, d)| {
        let m = c.diff_or_zero(i).expect("checked above");
        if m.is_zero() {
            0
        } else {
            graded_rank(&base, &m, d)
        }
    });
    let rank: BTreeMap<(i32, i32), usize> = jobs.into_iter().zip(ranks).collect();
    let mut out = BTreeMap::new();
    for i in positions {
        let term = c.term(i).unwrap();
        for d in degrees.clone() {
            let dim = PieceLayout::new(&base, &term.degrees, d).dim();
            out.insert((i, d), dim - rank[&(i, d)] - rank[&(i + 1, d)]);
        }
    }
    Ok(out)
}

/// Dimensions of `H_i(C)_d`, `H_j(D)_d` and the rank of the map between
/// them induced by `phi : C_i -> D_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedRank {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InducedRank {
    pub fn is_iso(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }
}

pub fn induced_rank(
    phi: &PolyMatrix,
    c: &ChainComplex,
    i: i32,
    d: &ChainComplex,
    j: i32,
    deg: i32,
) -> Result<InducedRank, ComplexError> {
    if !c.homology_defined(i) {
        return Err(ComplexError::WindowEdge { position: i });
    }
    if !d.homology_defined(j) {
        return Err(ComplexError::WindowEdge { position: j });
    }
    let base = c.base();
    let field = base.field();
    let src_layout = PieceLayout::new(base, &c.term(i).unwrap().degrees, deg);
    let dc = c.diff_or_zero(i).unwrap();
    let cycles: Vec<Vec<u32>> = if dc.rows() == 0 {
        (0..src_layout.dim())
            .map(|k| {
                let mut e = vec![0; src_layout.dim()];
                e[k] = 1;
                e
            })
            .collect()
    } else {
        graded_dense(base, &dc, deg).nullspace(field)
    };
    let (_, _, bcols) = graded_piece(base, &d.diff_or_zero(j + 1).unwrap(), deg);
    let phi_d = graded_dense(base, phi, deg);
    let images: Vec<SparseVec> = cycles
        .iter()
        .map(|z| {
            phi_d
                .mul_vec(z, field)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0)
                .map(|(k, v)| (k as u32, v))
                .collect()
        })
        .collect();
    let rank_b = sparse_rank(bcols.clone(), field);
    let rank_all = sparse_rank(bcols.into_iter().chain(images), field);
    let src_b = graded_rank(base, &c.diff_or_zero(i + 1).unwrap(), deg);
    let tgt_dim = PieceLayout::new(base, &d.term(j).unwrap().degrees, deg).dim();
    let tgt_z = {
        let dd = d.diff_or_zero(j).unwrap();
        tgt_dim - if dd.rows() == 0 { 0 } else { graded_rank(base, &dd, deg) }
    };
    Ok(InducedRank {
        source_dim: cycles.len() - src_b,
        target_dim: tgt_z - rank_b,
        rank: rank_all - rank_b,
    })
}
