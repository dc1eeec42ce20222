//! Homotopies for multiplication by ring elements on free resolutions,
//! their composites `σ_J = τ_{j_1} ∘ … ∘ τ_{j_s}`, and the certificate that
//! `σ_c = τ_1 ∘ … ∘ τ_c` induces `H_0 ≅ H_c` after reducing mod `(g)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Poly, PolyRing};
use crate::exec::Exec;
use crate::freecomplex::{
    check_chain_map, graded_dense, homology_dims, induced_rank, shift, BaseRing, ChainComplex, ChainMap,
    ComplexError, InducedRank, PieceLayout, PolyMatrix,
};
use crate::groebner::{GroebnerBasis, GroebnerError};
use crate::koszul::{koszul_complex, members, wedge_map, wedge_sign, ExteriorBasis, KoszulError, LiftMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("no homotopy component at position {position} for generator {column}")]
    NoSolution { position: i32, column: usize },
    #[error("homotopy identity for g_{generator} fails at position {position}, entry ({row}, {col}): {entry}")]
    IdentityFails {
        generator: usize,
        position: i32,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("sigma_c is not a chain map: {0}")]
    ChainMapFails(ComplexError),
    #[error("H_0 -> H_c is not an isomorphism in degree {degree}: dims {source_dim} -> {target_dim}, rank {rank}")]
    H0HcNotIso {
        degree: i32,
        source_dim: usize,
        target_dim: usize,
        rank: usize,
    },
    #[error("homological length {length} is shorter than c = {c}")]
    WindowTooShort { length: i32, c: usize },
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Degree +1 map `τ` on a complex, one component `K_i -> K_{i+1}` per
/// position.
pub type Homotopy = BTreeMap<i32, PolyMatrix>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopySource {
    KoszulWedge,
    Solved,
}

/// A resolution with one verified homotopy per element `g_j`.
#[derive(Debug, Clone)]
pub struct HomotopySystem {
    pub complex: ChainComplex,
    pub g: Vec<Poly>,
    pub g_degrees: Vec<i32>,
    pub taus: Vec<Homotopy>,
    pub source: HomotopySource,
}

fn degree_of(p: &Poly) -> i32 {
    p.total_degree().map_or(0, |d| d as i32)
}

/// Checks `δ τ + τ δ = g · id` at every position where both sides are
/// determined by the window.
pub fn check_homotopy(k: &ChainComplex, tau: &Homotopy, g: &Poly, generator: usize) -> Result<(), HomotopyError> {
    let base = k.base();
    let field = base.field();
    let g_red = base.reduce(g);
    for (&i, t) in tau {
        let Some(d_up) = k.diff_or_zero(i + 1) else { continue };
        let mut total = d_up.mul(t, base);
        if let Some(d_down) = k.diff(i) {
            let Some(prev) = tau.get(&(i - 1)) else { continue };
            total = total.add(&prev.mul(d_down, base), field);
        } else if k.term_or_zero(i - 1).is_none() {
            continue;
        }
        let degrees = &k.term(i).unwrap().degrees;
        let want = PolyMatrix::scalar(degrees, &g_red, 0);
        let diff = total.sub(&want, field);
        for col in 0..diff.cols() {
            for row in 0..diff.rows() {
                if !diff.get(row, col).is_zero() {
                    return Err(HomotopyError::IdentityFails {
                        generator,
                        position: i,
                        row,
                        col,
                        entry: base.ring().format(diff.get(row, col)),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Finds `τ` with `δ τ + τ δ = g · id` by exact graded solves, one source
/// generator at a time, from the bottom of the window up.
pub fn solve_homotopy(k: &ChainComplex, g: &Poly) -> Result<Homotopy, HomotopyError> {
    let base = k.base();
    let field = base.field();
    let dg = degree_of(g);
    let g_red = base.reduce(g);
    let mut tau = Homotopy::new();
    for i in k.positions() {
        let Some(d_up) = k.diff_or_zero(i + 1) else { break };
        let src = k.term(i).unwrap();
        let mut t = PolyMatrix::zeros(d_up.source.clone(), src.degrees.iter().map(|d| d + dg).collect());
        for (col, &a) in src.degrees.iter().enumerate() {
            let mut rhs = vec![Poly::zero(); src.rank()];
            rhs[col] = g_red.clone();
            if let (Some(d_down), Some(prev)) = (k.diff(i), tau.get(&(i - 1))) {
                let image = prev.apply(&d_down.column(col), base);
                for (r, p) in rhs.iter_mut().zip(image) {
                    *r = r.sub(&p, field);
                }
            }
            let deg = a + dg;
            let layout = PieceLayout::new(base, &src.degrees, deg);
            let b = layout.vector(&rhs);
            let target = PieceLayout::new(base, &d_up.source, deg);
            if target.dim() == 0 {
                if !b.is_empty() {
                    return Err(HomotopyError::NoSolution { position: i, column: col });
                }
                continue;
            }
            let mut dense_b = vec![0; layout.dim()];
            for (idx, v) in b {
                dense_b[idx as usize] = v;
            }
            let x = graded_dense(base, &d_up, deg)
                .solve(&dense_b, field)
                .ok_or(HomotopyError::NoSolution { position: i, column: col })?;
            for (r, p) in target.element(&x).into_iter().enumerate() {
                t.set(r, col, p);
            }
        }
        tau.insert(i, t);
    }
    Ok(tau)
}

impl HomotopySystem {
    /// Koszul complex of `f` over `S` with the wedge homotopies
    /// `τ_j = (Σ_i A[i][j] e_i) ∧ -`.
    pub fn koszul(ring: &Arc<PolyRing>, lift: &LiftMatrix) -> Result<HomotopySystem, HomotopyError> {
        let field = ring.field();
        let k = koszul_complex(&BaseRing::polynomial(ring.clone()), &lift.f)?;
        let taus: Vec<Homotopy> = (0..lift.c())
            .map(|j| {
                let v = lift.column(j);
                (0..=lift.n() as i32)
                    .map(|i| (i, wedge_map(&v, i as usize, &lift.f_degrees, lift.g_degrees[j], field)))
                    .collect()
            })
            .collect();
        let sys = HomotopySystem {
            complex: k,
            g: lift.g.clone(),
            g_degrees: lift.g_degrees.clone(),
            taus,
            source: HomotopySource::KoszulWedge,
        };
        sys.verify()?;
        Ok(sys)
    }

    /// Homotopies found by [`solve_homotopy`] on an arbitrary resolution.
    pub fn solved(k: ChainComplex, g: Vec<Poly>) -> Result<HomotopySystem, HomotopyError> {
        let taus = g.iter().map(|gj| solve_homotopy(&k, gj)).collect::<Result<Vec<_>, _>>()?;
        let sys = HomotopySystem {
            g_degrees: g.iter().map(degree_of).collect(),
            complex: k,
            g,
            taus,
            source: HomotopySource::Solved,
        };
        sys.verify()?;
        Ok(sys)
    }

    pub fn verify(&self) -> Result<(), HomotopyError> {
        for (j, (tau, g)) in self.taus.iter().zip(&self.g).enumerate() {
            check_homotopy(&self.complex, tau, g, j)?;
        }
        Ok(())
    }

    pub fn c(&self) -> usize {
        self.g.len()
    }

    /// `σ_J : K_i -> K_{i+|J|}` for the subset `J` (bitmask over the `g`),
    /// composing homotopies with the largest index applied first. `None`
    /// when a needed component lies outside the window.
    pub fn sigma(&self, subset: u32, i: i32) -> Option<PolyMatrix> {
        let base = self.complex.base();
        let degrees = &self.complex.term(i)?.degrees;
        let mut out = PolyMatrix::identity(degrees);
        let mut raised = 0;
        for (pos, j) in (i..).zip(members(subset).collect::<Vec<_>>().into_iter().rev()) {
            let t = self.taus[j].get(&pos)?;
            out = t.mul(&out, base);
            raised += self.g_degrees[j];
        }
        // the product takes its source degrees from the identity factor
        out.source = degrees.iter().map(|d| d + raised).collect();
        Some(out)
    }

    /// All `σ_J` on `K_i` for `|J| = s`, in the lexicographic subset order.
    pub fn sigma_maps(&self, s: usize, i: i32) -> Vec<Option<PolyMatrix>> {
        ExteriorBasis::new(self.c(), s)
            .subsets()
            .iter()
            .map(|&j| self.sigma(j, i))
            .collect()
    }

    /// `σ_c` reduced mod `(g)` as a chain map `R⊗K(-|g|) -> (R⊗K)[-c]`,
    /// checked as a chain map over `R`, together with the rank of the
    /// induced `H_0 -> H_c` in each internal degree `0..=dmax`.
    pub fn sigma_c_chain_map(&self, dmax: i32, exec: Exec) -> Result<SigmaCertificate, HomotopyError> {
        let c = self.c();
        let k = &self.complex;
        if k.hi() - k.lo() < c as i32 {
            return Err(HomotopyError::WindowTooShort { length: k.hi() - k.lo(), c });
        }
        let ring = k.base().ring().clone();
        let r = BaseRing::quotient(GroebnerBasis::buchberger(ring, &self.g)?);
        let full = (1u32 << c) - 1;
        let total_deg: i32 = self.g_degrees.iter().sum();
        let rk = k.over(&r);
        let source = rk.raise_degrees(total_deg);
        let target = shift(&rk, -(c as i32));
        let mut phi = ChainMap::new();
        for i in k.positions() {
            if let Some(m) = self.sigma(full, i) {
                if k.term(i + c as i32).is_some() {
                    phi.insert(i, m.normalized(&r));
                }
            }
        }
        check_chain_map(&phi, &source, &target).map_err(HomotopyError::ChainMapFails)?;
        let sigma0 = phi.component(k.lo()).cloned().ok_or(HomotopyError::WindowTooShort {
            length: k.hi() - k.lo(),
            c,
        })?;
        let degrees: Vec<i32> = (0..=dmax).collect();
        let ranks = exec.map(degrees.clone(), |d| induced_rank(&sigma0, &source, k.lo(), &target, k.lo(), d));
        let mut out = Vec::new();
        for (d, ir) in degrees.into_iter().zip(ranks) {
            let ir = ir?;
            if !ir.is_iso() {
                return Err(HomotopyError::H0HcNotIso {
                    degree: d,
                    source_dim: ir.source_dim,
                    target_dim: ir.target_dim,
                    rank: ir.rank,
                });
            }
            out.push((d, ir));
        }
        Ok(SigmaCertificate {
            sigma: sigma0,
            degrees: out,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SigmaCertificate {
    /// `σ_c` on the bottom term, reduced mod `(g)`.
    pub sigma: PolyMatrix,
    pub degrees: Vec<(i32, InducedRank)>,
}

/// Compares `dim H_slot(Koszul(g) ⊗ S/J)_d` with `dim (S/J)_{d - |g|}` for
/// `d = 0..=dmax`. For `g` a regular sequence inside `J` and `slot = c`
/// both agree.
pub fn tor_identity_check(
    ring: &Arc<PolyRing>,
    g: &[Poly],
    j: &[Poly],
    slot: i32,
    dmax: i32,
    exec: Exec,
) -> Result<bool, HomotopyError> {
    let m = BaseRing::quotient(GroebnerBasis::buchberger(ring.clone(), j)?);
    let e = koszul_complex(&m, g)?;
    let shift_deg: i32 = g.iter().map(degree_of).sum();
    let dims = homology_dims(&e, slot, 0..=dmax, exec)?;
    Ok(dims
        .iter()
        .zip(0..)
        .all(|(&h, d)| h == m.degree_basis(d - shift_deg).dim()))
}

/// Whether the top differential of a Koszul complex on `c` elements is the
/// transpose of the first one under `Λ^{c-1} ≅ (Λ^1)^*`,
/// `e_W ↦ sign(e_i ∧ e_W) e_i^*` for `W` the complement of `i`.
pub fn koszul_self_dual(k: &ChainComplex) -> bool {
    let c = k.hi();
    if k.lo() != 0 || c < 1 {
        return false;
    }
    let (Some(d1), Some(dc)) = (k.diff(1), k.diff(c)) else {
        return false;
    };
    let field = k.base().field();
    let full = (1u32 << c) - 1;
    let rows = ExteriorBasis::new(c as usize, c as usize - 1);
    (0..c as usize).all(|i| {
        let comp = full & !(1 << i);
        let row = rows.index_of(comp).unwrap();
        let want = if wedge_sign(1 << i, comp) == Some(1) {
            d1.get(0, i).clone()
        } else {
            d1.get(0, i).neg(field)
        };
        *dc.get(row, 0) == want
    })
}

#[cfg(test)]
mod tests;
