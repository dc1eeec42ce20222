//! Degree-by-degree minimal syzygies over `S` or `S/I`, by linear algebra
//! on graded pieces. Only correct up to the caller's degree bound.

use std::sync::Arc;

use crate::freecomplex::{
    graded_dense, BaseRing, Boundary, ChainComplex, ComplexError, GradedFreeModule, PieceLayout, PolyMatrix,
};
use crate::linalg::SparseEchelon;
use crate::arith::Poly;

/// Minimal homogeneous generators of `ker m` in degrees `<= dmax`, in
/// increasing degree; each is a column of polynomials over the source.
pub fn kernel_generators(base: &BaseRing, m: &PolyMatrix, dmax: i32) -> Vec<(i32, Vec<Poly>)> {
    let field = base.field();
    let Some(&dmin) = m.source.iter().min() else {
        return Vec::new();
    };
    let mut gens: Vec<(i32, Vec<Poly>)> = Vec::new();
    for d in dmin..=dmax {
        let layout = PieceLayout::new(base, &m.source, d);
        if layout.dim() == 0 {
            continue;
        }
        let mut span = SparseEchelon::new(field);
        for (e, z) in &gens {
            for u in &base.degree_basis(d - e).monomials {
                let shifted: Vec<Poly> = z.iter().map(|p| base.reduce(&p.mul_term(u, 1, field))).collect();
                span.insert(layout.vector(&shifted));
            }
        }
        let kernel = if m.rows() == 0 {
            (0..layout.dim())
                .map(|k| {
                    let mut v = vec![0; layout.dim()];
                    v[k] = 1;
                    v
                })
                .collect()
        } else {
            graded_dense(base, m, d).nullspace(field)
        };
        for z in kernel {
            let elem = layout.element(&z);
            if span.insert(layout.vector(&elem)) {
                gens.push((d, elem));
            }
        }
    }
    gens
}

/// Matrix whose columns are the given generators.
pub fn generator_matrix(target: &[i32], gens: &[(i32, Vec<Poly>)]) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(target.to_vec(), gens.iter().map(|g| g.0).collect());
    for (j, (_, col)) in gens.iter().enumerate() {
        for (i, p) in col.iter().enumerate() {
            out.set(i, j, p.clone());
        }
    }
    out
}

/// Extends `F_0 <- F_1` (given by `d1`) to `F_0 <- … <- F_len` by
/// minimal kernel generators in degrees `<= dmax`. The upper end is closed
/// when some kernel vanishes below the bound.
pub fn resolve(base: &Arc<BaseRing>, d1: &PolyMatrix, len: usize, dmax: i32) -> Result<ChainComplex, ComplexError> {
    let mut terms = vec![GradedFreeModule::new(d1.target.clone()), GradedFreeModule::new(d1.source.clone())];
    let mut diffs = vec![d1.clone()];
    let mut upper = Boundary::Truncated;
    while terms.len() <= len {
        let last = diffs.last().unwrap();
        let gens = kernel_generators(base, last, dmax);
        if gens.is_empty() {
            upper = Boundary::Closed;
            break;
        }
        let m = generator_matrix(&last.source, &gens);
        terms.push(GradedFreeModule::new(m.source.clone()));
        diffs.push(m);
    }
    if d1.cols() == 0 {
        upper = Boundary::Closed;
        terms.pop();
        diffs.pop();
    }
    ChainComplex::new(base.clone(), 0, terms, diffs, Boundary::Closed, upper)
}
