//! Gaussian cancellation of unit entries. Cancelling a unit `u` at
//! `(r, c)` of `d_p` replaces `d_p` by `D - b u^{-1} a` on the remaining
//! generators, drops row `c` of `d_{p+1}` and column `r` of `d_{p-1}`. The
//! result is homotopy equivalent to the input with the same homology.

use crate::freecomplex::{ChainComplex, GradedFreeModule, PolyMatrix};

/// Cancels unit entries until none remain, scanning differentials by
/// distance from `center` and each matrix column by column.
pub fn minimize(c: &ChainComplex, center: i32) -> ChainComplex {
    let mut order: Vec<i32> = (c.lo() + 1..=c.hi()).collect();
    order.sort_by_key(|&p| ((2 * (p - center) - 1).abs(), p));
    minimize_with_order(c, &order)
}

/// Cancels unit entries, always taking the first differential in `order`
/// that still has one.
pub fn minimize_with_order(c: &ChainComplex, order: &[i32]) -> ChainComplex {
    let base = c.base().clone();
    let field = base.field();
    let lo = c.lo();
    let mut terms: Vec<GradedFreeModule> = c.terms().to_vec();
    let mut diffs: Vec<PolyMatrix> = c.diffs().to_vec();
    loop {
        let hit = order.iter().find_map(|&p| {
            let k = (p - lo - 1) as usize;
            diffs.get(k).and_then(|d| d.unit_entry()).map(|rc| (k, rc))
        });
        let Some((k, (r, col))) = hit else { break };
        let d = &diffs[k];
        let u = d.get(r, col).constant_term();
        let u_inv = field.inv(u);
        let rows: Vec<usize> = (0..d.rows()).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..d.cols()).filter(|&j| j != col).collect();
        let mut next = d.submatrix(&rows, &cols);
        for (a, &i) in rows.iter().enumerate() {
            let b_i = d.get(i, col);
            if b_i.is_zero() {
                continue;
            }
            let b_i = b_i.scale(u_inv, field);
            for (bb, &j) in cols.iter().enumerate() {
                let a_j = d.get(r, j);
                if a_j.is_zero() {
                    continue;
                }
                let e = next.get(a, bb).sub(&b_i.mul(a_j, field), field);
                next.set(a, bb, base.reduce(&e));
            }
        }
        diffs[k] = next;
        // term k+1 loses generator `col`, term k loses generator `r`
        if let Some(up) = diffs.get(k + 1) {
            let keep_rows: Vec<usize> = (0..up.rows()).filter(|&i| i != col).collect();
            let all: Vec<usize> = (0..up.cols()).collect();
            diffs[k + 1] = up.submatrix(&keep_rows, &all);
        }
        if k > 0 {
            let down = &diffs[k - 1];
            let all: Vec<usize> = (0..down.rows()).collect();
            let keep_cols: Vec<usize> = (0..down.cols()).filter(|&j| j != r).collect();
            diffs[k - 1] = down.submatrix(&all, &keep_cols);
        }
        let keep_src: Vec<usize> = (0..terms[k + 1].rank()).filter(|&j| j != col).collect();
        let keep_tgt: Vec<usize> = (0..terms[k].rank()).filter(|&i| i != r).collect();
        terms[k + 1] = terms[k + 1].select(&keep_src);
        terms[k] = terms[k].select(&keep_tgt);
    }
    ChainComplex::assemble(base, lo, terms, diffs, c.lower(), c.upper())
        .expect("cancellation preserves shapes and degrees")
}
