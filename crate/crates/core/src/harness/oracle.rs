//! Brute-force homology: `R_d = S_d / I_d` with `I_d` spanned by all
//! monomial multiples of the ideal generators, and plain dense Gaussian
//! elimination. Shares no code with the Gröbner or sparse paths.

use std::collections::HashMap;

use crate::arith::{Monomial, Poly, PolyRing, PrimeField};
use crate::freecomplex::{ChainComplex, PolyMatrix};

/// Reduced row echelon form in place; returns the pivot column of each
/// remaining row.
fn rref(rows: &mut Vec<Vec<u32>>, ncols: usize, field: PrimeField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn rank(mut rows: Vec<Vec<u32>>, ncols: usize, field: PrimeField) -> usize {
    rref(&mut rows, ncols, field).len()
}

/// `S_d / I_d` with coordinates on the non-pivot monomials.
struct QuotientPiece {
    index: HashMap<Monomial, usize>,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    /// Column of each standard monomial, in order.
    free: Vec<usize>,
    monomials: Vec<Monomial>,
}

impl QuotientPiece {
    fn new(ring: &PolyRing, ideal: &[Poly], d: i32) -> QuotientPiece {
        let field = ring.field();
        let monomials = if d < 0 {
            Vec::new()
        } else {
            Monomial::all_of_degree(ring.nvars(), d as u32)
        };
        let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let mut rows = Vec::new();
        for g in ideal {
            let Some(e) = g.total_degree() else { continue };
            let e = d - e as i32;
            if e < 0 {
                continue;
            }
            for u in Monomial::all_of_degree(ring.nvars(), e as u32) {
                let mut row = vec![0u32; monomials.len()];
                for (m, c) in g.terms() {
                    row[index[&m.mul(&u)]] = *c;
                }
                rows.push(row);
            }
        }
        let pivots = rref(&mut rows, monomials.len(), field);
        let free = (0..monomials.len()).filter(|k| !pivots.contains(k)).collect();
        QuotientPiece {
            index,
            rows,
            pivots,
            free,
            monomials,
        }
    }

    fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of a homogeneous degree-`d` polynomial in `S_d / I_d`.
    fn coordinates(&self, p: &Poly, field: PrimeField) -> Vec<u32> {
        let mut v = vec![0u32; self.monomials.len()];
        for (m, c) in p.terms() {
            v[self.index[m]] = *c;
        }
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        self.free.iter().map(|&k| v[k]).collect()
    }
}

/// `dim (S/I)_d`.
pub fn oracle_quotient_dim(ring: &PolyRing, ideal: &[Poly], d: i32) -> usize {
    QuotientPiece::new(ring, ideal, d).dim()
}

struct Pieces<'a> {
    ring: &'a PolyRing,
    ideal: &'a [Poly],
    cache: HashMap<i32, QuotientPiece>,
}

impl Pieces<'_> {
    fn get(&mut self, d: i32) -> &QuotientPiece {
        self.cache
            .entry(d)
            .or_insert_with(|| QuotientPiece::new(self.ring, self.ideal, d))
    }

    fn module_dim(&mut self, degrees: &[i32], d: i32) -> usize {
        degrees.iter().map(|&a| self.get(d - a).dim()).sum()
    }

    fn map_rank(&mut self, m: &PolyMatrix, d: i32) -> usize {
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        let field = self.ring.field();
        let offsets: Vec<usize> = m
            .target
            .iter()
            .scan(0, |acc, &a| {
                let o = *acc;
                *acc += self.get(d - a).dim();
                Some(o)
            })
            .collect();
        let total = offsets.last().map_or(0, |&o| o + self.get(d - m.target[m.target.len() - 1]).dim());
        let mut columns = Vec::new();
        for j in 0..m.cols() {
            let src = self.get(d - m.source[j]);
            let basis: Vec<Monomial> = src.free.iter().map(|&k| src.monomials[k]).collect();
            for u in basis {
                let mut col = vec![0u32; total];
                for r in 0..m.rows() {
                    let e = m.get(r, j);
                    if e.is_zero() {
                        continue;
                    }
                    let img = e.mul(&Poly::monomial(u, 1), field);
                    let coords = self.get(d - m.target[r]).coordinates(&img, field);
                    for (k, c) in coords.into_iter().enumerate() {
                        col[offsets[r] + k] = c;
                    }
                }
                columns.push(col);
            }
        }
        rank(columns, total, field)
    }
}

/// `dim H_i(C)_d` over `S/I` with `I` generated by `ideal`, or `None` when
/// position `i` is at an open end of the window.
pub fn oracle_homology(ring: &PolyRing, ideal: &[Poly], c: &ChainComplex, i: i32, d: i32) -> Option<usize> {
    let term = c.term(i)?;
    let d_in = c.diff_or_zero(i)?;
    let d_out = c.diff_or_zero(i + 1)?;
    let mut pieces = Pieces {
        ring,
        ideal,
        cache: HashMap::new(),
    };
    let dim = pieces.module_dim(&term.degrees, d);
    Some(dim - pieces.map_rank(&d_in, d) - pieces.map_rank(&d_out, d))
}
