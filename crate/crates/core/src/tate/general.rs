//! Splice of a resolution `F` of a Cohen–Macaulay module `M` of codimension
//! `m` with the dual of a resolution `G` of `Ext^m(M, R)`. The map on `H_0`
//! is found by linear algebra and lifted column by column.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certify_cone, TateError};
use crate::arith::Poly;
use crate::exec::Exec;
use crate::freecomplex::{
    dual, graded_dense, graded_piece, homology_dims, induced_rank, shift, Boundary, ChainComplex, ChainMap,
    PieceLayout, PolyMatrix,
};
use crate::linalg::{DenseMatrix, SparseEchelon, SparseVec};

const ISO_ATTEMPTS: usize = 8;
const TWIST_SEARCH: i32 = 64;

/// Splices `F` (resolving `M`) with `shift(dual(G, s), m)` where `G`
/// resolves `Ext^m(M, R)`. The twist `s` aligns the lowest degree of
/// `H_0` of the dual side with the lowest generator of `F_0`; the map on
/// `H_0` is a seeded random element of the space of lifts, accepted once it
/// is certified to be an isomorphism.
pub fn general_splice(
    f: &ChainComplex,
    g: &ChainComplex,
    m: i32,
    window: (i32, i32),
    dmax: Option<i32>,
    seed: u64,
    exec: Exec,
) -> Result<super::TateResolution, TateError> {
    let (lo, hi) = window;
    if m < 0 {
        return Err(TateError::NotApplicable(format!("codimension {m} is negative")));
    }
    if !f.base().same_as(g.base()) {
        return Err(TateError::NotApplicable("resolutions live over different rings".into()));
    }
    for (name, c) in [("F", f), ("G", g)] {
        if c.lo() != 0 || c.lower() != Boundary::Closed {
            return Err(TateError::NotApplicable(format!("{name} must start at position 0")));
        }
    }
    if f.diff_or_zero(1).is_none_or(|d| d.is_zero()) {
        return Err(TateError::NotApplicable("M is free".into()));
    }
    let need_g = (m - 1 - lo).max(m + 1);
    if g.upper() == Boundary::Truncated && g.hi() < need_g {
        return Err(TateError::WindowTooSmall {
            lo,
            hi,
            needed: need_g,
            have: g.hi(),
        });
    }
    if f.upper() == Boundary::Truncated && f.hi() < hi.max(1) {
        return Err(TateError::WindowTooSmall {
            lo,
            hi,
            needed: hi.max(1),
            have: f.hi(),
        });
    }
    let base = f.base().clone();
    let field = base.field();
    let f0 = f.term(0).unwrap().degrees.clone();
    let a = *f0.iter().min().ok_or_else(|| TateError::NotApplicable("M is zero".into()))?;

    // twist aligning the bottom of H_0 on both sides
    let d_untwisted = shift(&dual(g, 0), m);
    let d0 = d_untwisted.term(0).ok_or_else(|| TateError::LiftFails("dual side has no position 0".into()))?;
    let bottom = *d0.degrees.iter().min().ok_or_else(|| TateError::LiftFails("Ext^m(M, R) is zero".into()))?;
    let dims = homology_dims(&d_untwisted, 0, bottom..=bottom + TWIST_SEARCH, exec)?;
    let e = dims
        .iter()
        .position(|&x| x != 0)
        .map(|k| bottom + k as i32)
        .ok_or_else(|| TateError::LiftFails("H_0 of the dual side vanishes in the searched range".into()))?;
    let s = a - e;
    let d = shift(&dual(g, s), m);

    let dmin_f = a;
    let dmax_h0 = dmax.unwrap_or_else(|| super::default_dmax(f).max(super::default_dmax(&d)));
    let solutions = h0_lift_space(f, &d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phi0 = None;
    for _ in 0..ISO_ATTEMPTS {
        let cand = combine(&solutions, &f0, &d, &mut rng, field.characteristic());
        let mut iso = true;
        for deg in dmin_f..=dmax_h0 {
            if !induced_rank(&cand, f, 0, &d, 0, deg)?.is_iso() {
                iso = false;
                break;
            }
        }
        if iso {
            phi0 = Some(cand);
            break;
        }
    }
    let phi0 = phi0.ok_or_else(|| TateError::LiftFails("no isomorphism on H_0 among sampled lifts".into()))?;

    let mut phi = ChainMap::new();
    phi.insert(0, phi0);
    let top = m.min(f.hi());
    for i in 1..=top {
        let prev = phi.component(i - 1).unwrap().clone();
        let df = f.diff(i).unwrap();
        let dd = d.diff_or_zero(i).ok_or(crate::freecomplex::ComplexError::WindowEdge { position: i })?;
        let tgt_degrees = d.term(i).unwrap().degrees.clone();
        let mut comp = PolyMatrix::zeros(tgt_degrees.clone(), df.source.clone());
        for k in 0..df.cols() {
            let b = df.source[k];
            let rhs = prev.apply(&df.column(k), &base);
            if rhs.iter().all(|p| p.is_zero()) {
                continue;
            }
            let out_layout = PieceLayout::new(&base, &dd.target, b);
            let in_layout = PieceLayout::new(&base, &tgt_degrees, b);
            let rhs_dense = dense(&out_layout.vector(&rhs), out_layout.dim());
            let x = graded_dense(&base, &dd, b)
                .solve(&rhs_dense, field)
                .ok_or_else(|| TateError::LiftFails(format!("component {i}, column {k}")))?;
            for (row, p) in in_layout.element(&x).into_iter().enumerate() {
                comp.set(row, k, p);
            }
        }
        phi.insert(i, comp);
    }
    certify_cone(f, &d, &phi, m, s, window, dmax, exec)
}

/// Per generator of `F_0`: candidate images (cycles of `D_0` in its degree)
/// and a basis of the coefficient vectors making `φ_0 d^F_1` a boundary.
struct LiftSpace {
    cycles: Vec<Vec<Vec<Poly>>>,
    offsets: Vec<usize>,
    basis: Vec<Vec<u32>>,
}

fn h0_lift_space(f: &ChainComplex, d: &ChainComplex) -> Result<LiftSpace, TateError> {
    let base = f.base();
    let field = base.field();
    let f0 = &f.term(0).unwrap().degrees;
    let d0 = &d.term(0).unwrap().degrees;
    let dd0 = d.diff_or_zero(0).ok_or(crate::freecomplex::ComplexError::WindowEdge { position: 0 })?;
    let mut cycles = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for &aj in f0 {
        let layout = PieceLayout::new(base, d0, aj);
        let z: Vec<Vec<u32>> = if dd0.rows() == 0 {
            (0..layout.dim()).map(|k| unit(layout.dim(), k)).collect()
        } else {
            graded_dense(base, &dd0, aj).nullspace(field)
        };
        offsets.push(total);
        total += z.len();
        cycles.push(z.iter().map(|x| layout.element(x)).collect::<Vec<_>>());
    }
    let df1 = f.diff(1).unwrap();
    let dd1 = d.diff_or_zero(1).ok_or(crate::freecomplex::ComplexError::WindowEdge { position: 1 })?;
    let mut columns: Vec<SparseVec> = vec![Vec::new(); total];
    let mut row_offset = 0u32;
    for k in 0..df1.cols() {
        let b = df1.source[k];
        let layout = PieceLayout::new(base, d0, b);
        let mut boundaries = SparseEchelon::new(field);
        if dd1.cols() > 0 {
            for v in graded_piece(base, &dd1, b).2 {
                boundaries.insert(v);
            }
        }
        for (j, zj) in cycles.iter().enumerate() {
            let coef = df1.get(j, k);
            if coef.is_zero() {
                continue;
            }
            for (t, z) in zj.iter().enumerate() {
                let img: Vec<Poly> = z.iter().map(|p| base.reduce(&p.mul(coef, field))).collect();
                let v = boundaries.normal_form(layout.vector(&img));
                columns[offsets[j] + t].extend(v.into_iter().map(|(r, c)| (r + row_offset, c)));
            }
        }
        row_offset += layout.dim() as u32;
    }
    let basis = if row_offset == 0 {
        (0..total).map(|k| unit(total, k)).collect()
    } else {
        DenseMatrix::from_sparse_columns(row_offset as usize, &columns).nullspace(field)
    };
    Ok(LiftSpace { cycles, offsets, basis })
}

fn combine(space: &LiftSpace, f0: &[i32], d: &ChainComplex, rng: &mut ChaCha8Rng, p: u32) -> PolyMatrix {
    let base = d.base();
    let field = base.field();
    let mut x = vec![0u32; space.offsets.last().map_or(0, |&o| o + space.cycles.last().unwrap().len())];
    for b in &space.basis {
        let c: u32 = rng.gen_range(0..p);
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi = field.add(*xi, field.mul(c, *bi));
        }
    }
    let d0 = d.term(0).unwrap().degrees.clone();
    let mut out = PolyMatrix::zeros(d0, f0.to_vec());
    for (j, zj) in space.cycles.iter().enumerate() {
        for (t, z) in zj.iter().enumerate() {
            let c = x[space.offsets[j] + t];
            if c == 0 {
                continue;
            }
            for (row, p) in z.iter().enumerate() {
                let e = out.get(row, j).add(&p.scale(c, field), field);
                out.set(row, j, e);
            }
        }
    }
    out
}

fn unit(n: usize, k: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[k] = 1;
    e
}

fn dense(v: &SparseVec, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for &(k, c) in v {
        out[k as usize] = c;
    }
    out
}
