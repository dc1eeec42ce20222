//! The divided-power resolution of `M = S/(f)` over `R = S/(g)`: the
//! total complex of divided powers of `R^c` tensored with the Koszul
//! complex of `f` over `R`.
//!
//! Term `i` has generators `y^(α) ⊗ e_T` with `|α| = k`, `|T| = i - 2k`, and
//! `d(y^(α) ⊗ ω) = y^(α) ⊗ δ(ω) + Σ_{α_j > 0} y^(α - e_j) ⊗ (a_j ∧ ω)` where
//! `a_j` is column `j` of the lift matrix. No binomial coefficients appear,
//! so the construction is valid in every characteristic.

use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Poly, PolyRing, PrimeField};
use crate::exec::Exec;
use crate::freecomplex::{
    homology_table, BaseRing, Boundary, ChainComplex, ComplexError, GradedFreeModule, PolyMatrix,
};
use crate::groebner::{is_regular_sequence, GroebnerBasis, GroebnerError};
use crate::koszul::{members, subset_label, subset_weight, wedge_sign, ExteriorBasis, KoszulError, LiftMatrix};

pub const MAX_LENGTH: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShamashError {
    #[error("NotInIdeal: g is not contained in (f), remainder {0}")]
    ContainmentFails(String),
    #[error("{which} is not a regular sequence")]
    NotRegular { which: &'static str },
    #[error("resolution length {0} exceeds {MAX_LENGTH}")]
    TooLong(usize),
    #[error("not a complex: {0}")]
    NotAComplex(ComplexError),
    #[error("H_{position} is nonzero in degree {degree} (dimension {dim})")]
    NotExact { position: i32, degree: i32, dim: usize },
    #[error("H_0 has dimension {got} in degree {degree}, expected {want}")]
    WrongH0 { degree: i32, got: usize, want: usize },
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Exponent vectors of divided-power degree `k` in `c` variables, in
/// lexicographic order.
pub fn divided_power_basis(c: usize, k: usize) -> Vec<Vec<u32>> {
    fn go(c: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == c {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=k {
            cur.push(e);
            go(c, k - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if c == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(c, k as u32, &mut Vec::new(), &mut out);
    out
}

/// Generator `y^(α) ⊗ e_T` of the resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EsGenerator {
    pub alpha: Vec<u32>,
    pub subset: u32,
}

impl EsGenerator {
    pub fn label(&self) -> String {
        let a: Vec<String> = self.alpha.iter().map(|e| e.to_string()).collect();
        format!("y({})e{}", a.join(","), subset_label(self.subset))
    }

    pub fn divided_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }
}

/// Generators of term `i`, ordered by divided-power degree, then `α`, then
/// subset.
pub fn es_generators(n: usize, c: usize, i: usize) -> Vec<EsGenerator> {
    let mut out = Vec::new();
    for k in 0..=i / 2 {
        let rest = i - 2 * k;
        if rest > n {
            continue;
        }
        let subsets = ExteriorBasis::new(n, rest);
        for alpha in divided_power_basis(c, k) {
            for &s in subsets.subsets() {
                out.push(EsGenerator {
                    alpha: alpha.clone(),
                    subset: s,
                });
            }
        }
    }
    out
}

/// Checks that `f` and `g` are regular and computes or validates `A`.
pub fn validate_pair(
    ring: &Arc<PolyRing>,
    f: Vec<Poly>,
    g: Vec<Poly>,
    a: Option<Vec<Vec<Poly>>>,
) -> Result<LiftMatrix, ShamashError> {
    if !is_regular_sequence(ring, &f)? {
        return Err(ShamashError::NotRegular { which: "f" });
    }
    if !is_regular_sequence(ring, &g)? {
        return Err(ShamashError::NotRegular { which: "g" });
    }
    let lift = match a {
        Some(a) => LiftMatrix::new(ring, f, g, a),
        None => LiftMatrix::compute(ring, f, g),
    };
    lift.map_err(|e| match e {
        KoszulError::LiftIdentityFails { .. } => ShamashError::ContainmentFails(e.to_string()),
        KoszulError::Groebner(GroebnerError::NotInIdeal { remainder }) => ShamashError::ContainmentFails(remainder),
        e => e.into(),
    })
}

#[derive(Debug, Clone)]
pub struct ShamashResolution {
    pub complex: ChainComplex,
    pub generators: Vec<Vec<EsGenerator>>,
    pub lift: LiftMatrix,
}

impl ShamashResolution {
    pub fn length(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn base(&self) -> &Arc<BaseRing> {
        self.complex.base()
    }
}

/// Builds `R = S/(g)` from a validated lift matrix.
pub fn quotient_ring(ring: &Arc<PolyRing>, lift: &LiftMatrix) -> Result<Arc<BaseRing>, ShamashError> {
    Ok(BaseRing::quotient(GroebnerBasis::buchberger(ring.clone(), &lift.g)?))
}

/// The resolution over `r` (which must be `S/(g)`) up to homological
/// position `len`.
pub fn es_resolution(r: &Arc<BaseRing>, lift: &LiftMatrix, len: usize) -> Result<ShamashResolution, ShamashError> {
    es_build(r, lift, len, true)
}

pub(crate) fn es_build(
    r: &Arc<BaseRing>,
    lift: &LiftMatrix,
    len: usize,
    vertical: bool,
) -> Result<ShamashResolution, ShamashError> {
    if len > MAX_LENGTH {
        return Err(ShamashError::TooLong(len));
    }
    let (n, c) = (lift.n(), lift.c());
    let field = r.field();
    let generators: Vec<Vec<EsGenerator>> = (0..=len).map(|i| es_generators(n, c, i)).collect();
    let degree = |gen: &EsGenerator| -> i32 {
        gen.alpha.iter().zip(&lift.g_degrees).map(|(&e, &d)| e as i32 * d).sum::<i32>()
            + subset_weight(gen.subset, &lift.f_degrees)
    };
    let terms: Vec<GradedFreeModule> = generators
        .iter()
        .map(|gens| {
            GradedFreeModule::labelled(gens.iter().map(degree).collect(), gens.iter().map(|g| g.label()).collect())
        })
        .collect();
    let f_red: Vec<Poly> = lift.f.iter().map(|p| r.reduce(p)).collect();
    let a_red: Vec<Vec<Poly>> = lift.a.iter().map(|row| row.iter().map(|p| r.reduce(p)).collect()).collect();
    let mut diffs = Vec::with_capacity(len);
    for i in 1..=len {
        let src = &generators[i];
        let tgt = &generators[i - 1];
        let index: std::collections::HashMap<&EsGenerator, usize> =
            tgt.iter().enumerate().map(|(k, g)| (g, k)).collect();
        let mut m = PolyMatrix::zeros(terms[i - 1].degrees.clone(), terms[i].degrees.clone());
        for (col, gen) in src.iter().enumerate() {
            // Koszul part
            for (s, t) in members(gen.subset).enumerate() {
                let target = EsGenerator {
                    alpha: gen.alpha.clone(),
                    subset: gen.subset & !(1 << t),
                };
                let row = index[&target];
                let p = if s % 2 == 0 { f_red[t].clone() } else { f_red[t].neg(field) };
                add_entry(&mut m, row, col, &p, field);
            }
            if !vertical {
                continue;
            }
            // divided-power part: y^(α - e_j) ⊗ (a_j ∧ e_T)
            for j in 0..c {
                if gen.alpha[j] == 0 {
                    continue;
                }
                let mut alpha = gen.alpha.clone();
                alpha[j] -= 1;
                for (i_row, row_a) in a_red.iter().enumerate() {
                    let e = &row_a[j];
                    if e.is_zero() {
                        continue;
                    }
                    let Some(sign) = wedge_sign(1 << i_row, gen.subset) else { continue };
                    let target = EsGenerator {
                        alpha: alpha.clone(),
                        subset: gen.subset | (1 << i_row),
                    };
                    let row = index[&target];
                    let p = if sign > 0 { e.clone() } else { e.neg(field) };
                    add_entry(&mut m, row, col, &p, field);
                }
            }
        }
        diffs.push(m);
    }
    let complex = ChainComplex::assemble(r.clone(), 0, terms, diffs, Boundary::Closed, Boundary::Truncated)?;
    Ok(ShamashResolution {
        complex,
        generators,
        lift: lift.clone(),
    })
}

fn add_entry(m: &mut PolyMatrix, row: usize, col: usize, p: &Poly, field: PrimeField) {
    let v = m.get(row, col).add(p, field);
    m.set(row, col, v);
}

/// What [`verify_resolution`] established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionCertificate {
    pub length: usize,
    pub dmax: i32,
    pub h0: Vec<usize>,
}

/// Recomputes `d^2 = 0`, `H_i = 0` for `0 < i < L` and the Hilbert function
/// of `H_0` against `S/(f)`, in internal degrees `0..=dmax`.
pub fn verify_resolution(
    res: &ShamashResolution,
    dmax: i32,
    exec: Exec,
) -> Result<ResolutionCertificate, ShamashError> {
    let c = &res.complex;
    ChainComplex::new(
        c.base().clone(),
        c.lo(),
        c.terms().to_vec(),
        c.diffs().to_vec(),
        c.lower(),
        c.upper(),
    )
    .map_err(ShamashError::NotAComplex)?;
    let len = c.hi();
    let table = homology_table(c, 0..=(len - 1).max(0), 0..=dmax, exec)?;
    for (&(i, d), &dim) in &table {
        if i > 0 && dim != 0 {
            return Err(ShamashError::NotExact { position: i, degree: d, dim });
        }
    }
    let ring = c.base().ring().clone();
    let m = GroebnerBasis::buchberger(ring, &res.lift.f)?;
    let mut h0 = Vec::new();
    for d in 0..=dmax {
        let got = table[&(0, d)];
        let want = m.quotient_degree_basis(d).dim();
        if got != want {
            return Err(ShamashError::WrongH0 { degree: d, got, want });
        }
        h0.push(got);
    }
    Ok(ResolutionCertificate {
        length: len as usize,
        dmax,
        h0,
    })
}

#[cfg(test)]
mod tests;
