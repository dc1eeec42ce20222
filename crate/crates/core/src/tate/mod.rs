//! Tate resolutions as mapping cones of a map from a resolution `F` of `M`
//! to a shifted dual resolution, their minimization, and the maximal
//! Cohen–Macaulay approximation read off in homological degree 0.
//!
//! Conventions: `D = shift(dual(F, s), m)` so `D_i = F_{m-i}^*`, and the
//! cone of `φ : F -> D` has `T_i = F_i ⊕ F_{m-1-i}^*`. For the splice of
//! two complete intersections `m = n - c` and `s = Σ deg f - Σ deg g`.

mod general;
mod mcm;
mod minimize;

use std::sync::Arc;

use thiserror::Error;

use crate::arith::{Poly, PolyRing, PrimeField};
use crate::exec::Exec;
use crate::freecomplex::{
    check_chain_map, dual, homology_table, induced_rank, mapping_cone, shift, BaseRing, ChainComplex, ChainMap,
    ComplexError, InducedRank, PolyMatrix,
};
use crate::koszul::{alpha_element, wedge_sign, ExteriorElement, KoszulError, LiftMatrix};
use crate::shamash::{es_resolution, quotient_ring, ShamashError, ShamashResolution};

pub use general::general_splice;
pub use mcm::{
    betti_match_up_to_twist, dual_betti, matrix_factorization_check, mcm_generator_count, mcm_presentation,
    orthogonality_check, orthogonality_check_with, es_rank, structural_generator_count, syzygy_route,
    MatrixFactorization, McmPresentation, PresentationDegrees, SyzygyRoute,
};
pub use minimize::{minimize, minimize_with_order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TateError {
    #[error("splice map is not a chain map: {0}")]
    NotChainMap(ComplexError),
    #[error("H_{position} of the spliced complex is nonzero in degree {degree} (dimension {dim})")]
    AcyclicityFails { position: i32, degree: i32, dim: usize },
    #[error("splice map is not an isomorphism on H_0 in degree {degree}: {source_dim} -> {target_dim}, rank {rank}")]
    H0IsoFails {
        degree: i32,
        source_dim: usize,
        target_dim: usize,
        rank: usize,
    },
    #[error("window [{lo}, {hi}] needs resolutions of length {needed}, have {have}")]
    WindowTooSmall { lo: i32, hi: i32, needed: i32, have: i32 },
    #[error("no lift of the isomorphism on H_0: {0}")]
    LiftFails(String),
    #[error("{0}")]
    NotApplicable(String),
    #[error(transparent)]
    Shamash(#[from] ShamashError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Certificates recomputed for a spliced window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpliceCertificates {
    pub chain_map: bool,
    /// Internal degrees covered by the acyclicity and `H_0` checks.
    pub degrees: (i32, i32),
    /// Positions whose homology was checked to vanish.
    pub acyclic_positions: (i32, i32),
    pub h0_iso: Vec<(i32, InducedRank)>,
    /// Whether the cone had no unit entries before minimization.
    pub minimal_before: bool,
}

/// A window of a Tate resolution of `M` over `R`.
#[derive(Debug, Clone)]
pub struct TateResolution {
    pub complex: ChainComplex,
    /// Codimension `m` of `M`; the splice occupies positions `0..=m-1`.
    pub codim: i32,
    /// Internal degree shift `s` of the dual resolution.
    pub twist: i32,
    pub certificates: SpliceCertificates,
}

impl TateResolution {
    /// Gaussian cancellation of unit entries, scanning outward from the
    /// splice.
    pub fn minimized(&self) -> TateResolution {
        TateResolution {
            complex: minimize(&self.complex, 0),
            ..self.clone()
        }
    }
}

/// `β`-identification `Λ^j -> (Λ^{n-j})^*`: `e_V ↦ sign(e_V ∧ e_W) e_W^*`
/// with `W` the complement of `V` and `e_1 ∧ … ∧ e_n ↦ 1`.
pub fn beta_sign(v: u32, n: usize) -> i32 {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    wedge_sign(v, full & !v).expect("complement is disjoint")
}

/// Coefficient of `φ'(e_V)` on `e_W^*`: the `β`-pairing of `α ∧ e_V` with
/// `e_W`.
fn phi_prime_entry(alpha: &ExteriorElement, v: u32, w: u32, n: usize, field: PrimeField) -> Option<Poly> {
    let full = (1u32 << n) - 1;
    if v & w != 0 {
        return None;
    }
    let rest = full & !w;
    let u = rest & !v;
    if rest & v != v || u.count_ones() as usize != alpha.k {
        return None;
    }
    let coef = alpha.terms.get(&u)?;
    let sign = wedge_sign(u, v)? * beta_sign(rest, n);
    Some(if sign > 0 { coef.clone() } else { coef.neg(field) })
}

/// `φ = π^* ∘ φ' ∘ π` from `F` to `D = shift(dual(F, s), m)`: zero off the
/// bottom Koszul layer, and on it wedge with `α` followed by `β`.
pub fn splice_map(res: &ShamashResolution, alpha: &ExteriorElement, d: &ChainComplex, m: i32) -> ChainMap {
    let base = res.base();
    let field = base.field();
    let n = res.lift.n();
    let mut phi = ChainMap::new();
    for i in 0..=m.min(res.length() as i32) {
        let (Some(src), Some(tgt)) = (res.complex.term(i), d.term(i)) else {
            continue;
        };
        let src_gens = &res.generators[i as usize];
        let tgt_gens = &res.generators[(m - i) as usize];
        let mut mat = PolyMatrix::zeros(tgt.degrees.clone(), src.degrees.clone());
        for (col, gv) in src_gens.iter().enumerate() {
            if gv.divided_degree() != 0 {
                continue;
            }
            for (row, gw) in tgt_gens.iter().enumerate() {
                if gw.divided_degree() != 0 {
                    continue;
                }
                if let Some(e) = phi_prime_entry(alpha, gv.subset, gw.subset, n, field) {
                    mat.set(row, col, base.reduce(&e));
                }
            }
        }
        phi.insert(i, mat);
    }
    phi
}

/// The Koszul-layer map `Λ^i -> (Λ^{m-i})^*` alone, as a matrix over `S`
/// in the subset bases.
pub fn phi_prime(alpha: &ExteriorElement, i: usize, m: usize, field: PrimeField) -> Vec<Vec<Poly>> {
    let n = alpha.n;
    let src = crate::koszul::ExteriorBasis::new(n, i);
    let tgt = crate::koszul::ExteriorBasis::new(n, m - i);
    tgt.subsets()
        .iter()
        .map(|&w| {
            src.subsets()
                .iter()
                .map(|&v| phi_prime_entry(alpha, v, w, n, field).unwrap_or_default())
                .collect()
        })
        .collect()
}

/// Resolution lengths needed for the window `[lo, hi]` with codimension
/// `m`: `F` up to `hi + 1` and the dual side up to `m - lo`.
pub fn required_length(lo: i32, hi: i32, m: i32) -> i32 {
    (hi + 1).max(m - lo).max(1)
}

/// Splices `F` with its dual along `φ` and certifies the window.
pub fn tate_splice(
    res: &ShamashResolution,
    window: (i32, i32),
    dmax: Option<i32>,
    exec: Exec,
) -> Result<TateResolution, TateError> {
    let lift = &res.lift;
    let (lo, hi) = window;
    let m = (lift.n() - lift.c()) as i32;
    let needed = required_length(lo, hi, m);
    if (res.length() as i32) < needed {
        return Err(TateError::WindowTooSmall {
            lo,
            hi,
            needed,
            have: res.length() as i32,
        });
    }
    let s = lift.total_f_degree() - lift.total_g_degree();
    let alpha = alpha_element(lift, res.base().field());
    let d = shift(&dual(&res.complex, s), m);
    let phi = splice_map(res, &alpha, &d, m);
    certify_cone(&res.complex, &d, &phi, m, s, window, dmax, exec)
}

/// Builds `F` of the needed length over `R = S/(g)` and splices.
pub fn build_tate(
    ring: &Arc<PolyRing>,
    lift: &LiftMatrix,
    window: (i32, i32),
    dmax: Option<i32>,
    exec: Exec,
) -> Result<(Arc<BaseRing>, TateResolution), TateError> {
    let r = quotient_ring(ring, lift)?;
    let m = (lift.n() - lift.c()) as i32;
    let len = required_length(window.0, window.1, m);
    let res = es_resolution(&r, lift, len as usize)?;
    Ok((r, tate_splice(&res, window, dmax, exec)?))
}

/// Default internal-degree bound for a window: six past the largest
/// generator degree.
pub fn default_dmax(c: &ChainComplex) -> i32 {
    c.terms().iter().flat_map(|t| t.degrees.iter().copied()).max().unwrap_or(0) + 6
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn certify_cone(
    f: &ChainComplex,
    d: &ChainComplex,
    phi: &ChainMap,
    m: i32,
    s: i32,
    window: (i32, i32),
    dmax: Option<i32>,
    exec: Exec,
) -> Result<TateResolution, TateError> {
    let (lo, hi) = window;
    check_chain_map(phi, f, d).map_err(TateError::NotChainMap)?;
    let cone = mapping_cone(phi, f, d)?;
    if cone.lo() > lo || cone.hi() < hi {
        return Err(TateError::WindowTooSmall {
            lo,
            hi,
            needed: required_length(lo, hi, m),
            have: f.hi(),
        });
    }
    let t = cone.restrict(lo, hi);
    let minimal_before = t.is_minimal();
    let dmin = t.terms().iter().flat_map(|m| m.degrees.iter().copied()).min().unwrap_or(0);
    let dmax = dmax.unwrap_or_else(|| default_dmax(&t));
    if hi - lo >= 2 {
        let table = homology_table(&t, lo + 1..=hi - 1, dmin..=dmax, exec)?;
        if let Some((&(position, degree), &dim)) = table.iter().find(|(_, &v)| v != 0) {
            return Err(TateError::AcyclicityFails { position, degree, dim });
        }
    }
    let phi0 = phi
        .component_or_zero(0, f, d)
        .ok_or(ComplexError::MissingComponent { position: 0 })?;
    let degrees: Vec<i32> = (dmin..=dmax).collect();
    let ranks = exec.map(degrees.clone(), |deg| induced_rank(&phi0, f, 0, d, 0, deg));
    let mut h0_iso = Vec::new();
    for (deg, ir) in degrees.into_iter().zip(ranks) {
        let ir = ir?;
        if !ir.is_iso() {
            return Err(TateError::H0IsoFails {
                degree: deg,
                source_dim: ir.source_dim,
                target_dim: ir.target_dim,
                rank: ir.rank,
            });
        }
        h0_iso.push((deg, ir));
    }
    Ok(TateResolution {
        complex: t,
        codim: m,
        twist: s,
        certificates: SpliceCertificates {
            chain_map: true,
            degrees: (dmin, dmax),
            acyclic_positions: (lo + 1, hi - 1),
            h0_iso,
            minimal_before,
        },
    })
}
