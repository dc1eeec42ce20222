//! Reading off the MCM approximation, generator counts, the orthogonality
//! of `α` to the lift columns, and the hypersurface and duality checks.

use std::collections::BTreeMap;

use super::{TateError, TateResolution};
use crate::arith::{Poly, PolyRing};
use crate::freecomplex::{dual, shift, BaseRing, ChainComplex, PolyMatrix};
use crate::groebner::GroebnerBasis;
use crate::koszul::{alpha_element, wedge_map, ExteriorElement, LiftMatrix};
use crate::linalg::DenseMatrix;
use std::sync::Arc;

/// Presentation `T_1 -> T_0` of the MCM approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McmPresentation {
    pub matrix: PolyMatrix,
    pub generator_count: usize,
    pub target_twists: Vec<i32>,
    pub source_twists: Vec<i32>,
    pub target_labels: Vec<String>,
    pub source_labels: Vec<String>,
    /// No unit entries, so the cokernel has no free summand.
    pub minimal: bool,
}

/// The differential `T_1 -> T_0`; meant for a minimized resolution.
pub fn mcm_presentation(t: &TateResolution) -> Result<McmPresentation, TateError> {
    let c = &t.complex;
    let (Some(t0), Some(t1), Some(d1)) = (c.term(0), c.term(1), c.diff(1)) else {
        return Err(TateError::WindowTooSmall {
            lo: c.lo(),
            hi: c.hi(),
            needed: 1,
            have: c.hi(),
        });
    };
    Ok(McmPresentation {
        matrix: d1.clone(),
        generator_count: t0.rank(),
        target_twists: t0.twists(),
        source_twists: t1.twists(),
        target_labels: t0.labels.clone(),
        source_labels: t1.labels.clone(),
        minimal: d1.unit_entry().is_none(),
    })
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `1 + Σ_{1 <= i <= (n-c-1)/2} C(n, c+1+2i) C(c-1+i, i)`, evaluated as
/// written.
pub fn mcm_generator_count(n: usize, c: usize) -> u64 {
    let (n, c) = (n as i64, c as i64);
    let top = (n - c - 1).div_euclid(2);
    1 + (1..=top).map(|i| binomial(n, c + 1 + 2 * i) * binomial(c - 1 + i, i)).sum::<u64>()
}

/// Rank of term `j` of the resolution of `S/(f)` over `S/(g)`:
/// `Σ_k C(n, j-2k) C(c-1+k, k)`.
pub fn es_rank(n: usize, c: usize, j: i64) -> u64 {
    if j < 0 {
        return 0;
    }
    (0..=j / 2).map(|k| binomial(n as i64, j - 2 * k) * binomial(c as i64 - 1 + k, k)).sum()
}

/// Generator count of the spliced `T_0 = F_0 ⊕ F_{m-1}^*` with `m = n - c`:
/// `1 + Σ_{i >= 0, i <= (n-c-1)/2} C(n, c+1+2i) C(c-1+i, i)`.
pub fn structural_generator_count(n: usize, c: usize) -> u64 {
    let m = n as i64 - c as i64;
    es_rank(n, c, 0) + es_rank(n, c, m - 1)
}

/// Whether `α ∧ a_j ∧ - = 0` on every exterior power, over `S`.
pub fn orthogonality_check(lift: &LiftMatrix, ring: &Arc<PolyRing>) -> bool {
    let alpha = alpha_element(lift, ring.field());
    orthogonality_check_with(&alpha, lift, ring)
}

/// [`orthogonality_check`] for a given `α`, to detect corrupted minors.
pub fn orthogonality_check_with(alpha: &ExteriorElement, lift: &LiftMatrix, ring: &Arc<PolyRing>) -> bool {
    let field = ring.field();
    let s = BaseRing::polynomial(ring.clone());
    let (n, c) = (lift.n(), lift.c());
    let w = &lift.f_degrees;
    let total = lift.total_g_degree();
    (0..c).all(|j| {
        let a = lift.column(j);
        (0..n.saturating_sub(c)).all(|i| {
            let inner = wedge_map(&a, i, w, lift.g_degrees[j], field);
            let outer = wedge_map(alpha, i + 1, w, total, field);
            outer.mul(&inner, &s).is_zero()
        })
    })
}

/// Outcome of the hypersurface check on a window over `S/(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    /// Every raw product `d_i d_{i+1}` lifted to `S` is `g` times an
    /// invertible scalar matrix.
    pub raw_scalar_multiples: bool,
    /// Differentials `d_{lo+1}, …, d_hi` after the change of basis making
    /// every product exactly `g · id`.
    pub normalized: Vec<PolyMatrix>,
    /// `d_i d_{i+1} = g · id` and `d_{i+1} d_i = g · id` over `S`.
    pub identity_both_ways: bool,
    /// `d_i = d_{i+2}` entrywise.
    pub periodic: bool,
}

/// Lifts consecutive differentials to `S`, checks their products are
/// scalar multiples of `g`, normalizes them to `g · id` by a change of
/// basis in each term and checks 2-periodicity.
pub fn matrix_factorization_check(c: &ChainComplex, g: &Poly) -> Result<MatrixFactorization, TateError> {
    let ring = c.base().ring().clone();
    let field = ring.field();
    let s = BaseRing::polynomial(ring.clone());
    let gb = GroebnerBasis::buchberger(ring.clone(), std::slice::from_ref(g))
        .map_err(|e| TateError::NotApplicable(e.to_string()))?;
    let gdeg = g.total_degree().unwrap_or(0) as i32;
    let mut diffs: Vec<PolyMatrix> = c.diffs().to_vec();
    let mut raw = true;
    for k in 1..diffs.len() {
        let Some(u) = scalar_quotient(&diffs[k - 1].mul(&diffs[k], &s), &gb) else {
            raw = false;
            break;
        };
        let Some(u_inv) = invert(&u, field) else {
            raw = false;
            break;
        };
        // change basis of the shared term: d_k <- d_k u^{-1}, d_{k+1} <- u d_{k+1}
        let deg = diffs[k].source.clone();
        diffs[k] = diffs[k].mul(&to_poly(&u_inv, &deg, &deg), &s);
        if let Some(next) = diffs.get(k + 1) {
            let tgt = next.target.clone();
            diffs[k + 1] = to_poly(&u, &tgt, &tgt).mul(next, &s);
        }
    }
    let mut identity = raw;
    if raw {
        for k in 1..diffs.len() {
            let (a, b) = (&diffs[k - 1], &diffs[k]);
            if a.rows() != b.cols() {
                identity = false;
                break;
            }
            let want_ab = PolyMatrix::scalar(&b.source, g, gdeg);
            let want_ba = PolyMatrix::scalar(&a.source, g, gdeg);
            if a.mul(b, &s).entries() != want_ab.entries() || b.mul(a, &s).entries() != want_ba.entries() {
                identity = false;
                break;
            }
        }
    }
    let periodic = raw && (2..diffs.len()).all(|k| diffs[k].entries() == diffs[k - 2].entries());
    Ok(MatrixFactorization {
        raw_scalar_multiples: raw,
        normalized: diffs,
        identity_both_ways: identity,
        periodic,
    })
}

/// `p / g` entrywise when every quotient is a constant.
fn scalar_quotient(p: &PolyMatrix, gb: &GroebnerBasis) -> Option<DenseMatrix> {
    let mut out = DenseMatrix::zeros(p.rows(), p.cols());
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let e = p.get(i, j);
            if e.is_zero() {
                continue;
            }
            let q = gb.lift(e).ok()?;
            let q = q.first()?;
            if q.total_degree() != Some(0) {
                return None;
            }
            out.set(i, j, q.constant_term());
        }
    }
    Some(out)
}

fn invert(u: &DenseMatrix, field: crate::arith::PrimeField) -> Option<DenseMatrix> {
    let n = u.rows;
    if u.cols != n || u.rank(field) != n {
        return None;
    }
    let mut inv = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let x = u.solve(&e, field)?;
        for (i, v) in x.into_iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Some(inv)
}

fn to_poly(u: &DenseMatrix, target: &[i32], source: &[i32]) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(target.to_vec(), source.to_vec());
    for i in 0..u.rows {
        for j in 0..u.cols {
            let v = u.get(i, j);
            if v != 0 {
                out.set(i, j, Poly::constant(v));
            }
        }
    }
    out
}

/// Betti table of `shift(dual(c, 0), k)`.
pub fn dual_betti(c: &ChainComplex, k: i32) -> BTreeMap<(i32, i32), usize> {
    shift(&dual(c, 0), k).betti_table()
}

/// The internal-degree offset `o` with `b[(i, d + o)] = a[(i, d)]` on
/// every position present in both tables, if one exists.
pub fn betti_match_up_to_twist(
    a: &BTreeMap<(i32, i32), usize>,
    b: &BTreeMap<(i32, i32), usize>,
) -> Option<i32> {
    let pos = |t: &BTreeMap<(i32, i32), usize>| t.keys().map(|k| k.0).collect::<std::collections::BTreeSet<_>>();
    let common: Vec<i32> = pos(a).intersection(&pos(b)).copied().collect();
    let restrict = |t: &BTreeMap<(i32, i32), usize>| -> BTreeMap<(i32, i32), usize> {
        t.iter()
            .filter(|(k, v)| common.contains(&k.0) && **v != 0)
            .map(|(k, v)| (*k, *v))
            .collect()
    };
    let (ra, rb) = (restrict(a), restrict(b));
    if ra.len() != rb.len() {
        return None;
    }
    let ((ia, da), _) = ra.iter().next()?;
    let offset = rb.keys().find(|k| k.0 == *ia).map(|k| k.1 - da)?;
    let shifted: BTreeMap<(i32, i32), usize> = ra.iter().map(|(&(i, d), &v)| ((i, d + offset), v)).collect();
    (shifted == rb).then_some(offset)
}

/// Degrees of generators and relations of a minimal presentation.
pub type PresentationDegrees = (Vec<i32>, Vec<i32>);

/// Presentations computed by kernels alone: `N = Ω^k((Ω^k M)^*)` and its
/// dual `N^*`, which is the essential MCM approximation of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyzygyRoute {
    pub syzygy: PresentationDegrees,
    pub approximation: PresentationDegrees,
}

/// Builds both modules of [`SyzygyRoute`] from a minimal resolution `f`
/// of `M` known up to position `k + 1`.
pub fn syzygy_route(f: &ChainComplex, k: i32, dmax: i32) -> Result<SyzygyRoute, TateError> {
    let base = f.base();
    let dk1 = f.diff(k + 1).ok_or(crate::freecomplex::ComplexError::WindowEdge { position: k + 1 })?;
    // (Ω^k M)^* = ker(d_{k+1}^T : F_k^* -> F_{k+1}^*)
    let syz = kernel_presentation(base, &dk1.dual(0), k as usize + 1, dmax)?;
    let pres = syz.diff(k + 2).ok_or(crate::freecomplex::ComplexError::WindowEdge { position: k + 2 })?;
    let degrees = |c: &ChainComplex, j: i32| c.term(j).map(|t| t.degrees.clone()).unwrap_or_default();
    let syzygy = (degrees(&syz, k + 1), degrees(&syz, k + 2));
    // N^* = ker(pres^T)
    let dual_res = kernel_presentation(base, &pres.dual(0), 1, dmax)?;
    let approximation = (degrees(&dual_res, 1), degrees(&dual_res, 2));
    Ok(SyzygyRoute { syzygy, approximation })
}

/// Resolves `ker m` by minimal kernel generators: the returned complex has
/// the source of `m` at position 0 and the kernel's free cover at position
/// 1, continued for `len` more steps.
fn kernel_presentation(
    base: &Arc<BaseRing>,
    m: &PolyMatrix,
    len: usize,
    dmax: i32,
) -> Result<ChainComplex, TateError> {
    let gens = crate::syzygy::kernel_generators(base, m, dmax);
    if gens.is_empty() {
        return Err(TateError::NotApplicable("kernel vanishes below the degree bound".into()));
    }
    let inclusion = crate::syzygy::generator_matrix(&m.source, &gens);
    let res = crate::syzygy::resolve(base, &inclusion, len + 1, dmax)?;
    Ok(res)
}
