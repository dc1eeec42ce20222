//! Problem instances, the end-to-end build and verify pipelines, Betti
//! table rendering and a dense brute-force homology oracle.

mod oracle;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Poly, PolyRing, PrimeField};
use crate::exec::Exec;
use crate::freecomplex::serial::{self, ComplexJson};
use crate::freecomplex::{homology_table, ChainComplex, ComplexError};
use crate::homotopy::{HomotopyError, HomotopySystem};
use crate::koszul::{alpha_element, subset_label, LiftMatrix};
use crate::shamash::{es_resolution, quotient_ring, validate_pair, verify_resolution, ShamashError};
use crate::tate::{
    default_dmax, mcm_presentation, minimize, orthogonality_check, required_length, tate_splice, TateError,
};

pub use oracle::{oracle_homology, oracle_quotient_dim};

pub const DEFAULT_WINDOW: (i32, i32) = (-6, 8);
/// Upper bound on the internal degrees swept by the `σ_c` certificate.
pub const SIGMA_DMAX: i32 = 10;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// The instance is malformed or violates a hypothesis.
    #[error("invalid instance: {0}")]
    Validation(String),
    /// A recomputed certificate failed.
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl HarnessError {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 2,
            HarnessError::Certificate(_) => 3,
            HarnessError::Parse(_) => 4,
        }
    }
}

impl From<ArithError> for HarnessError {
    fn from(e: ArithError) -> Self {
        HarnessError::Validation(e.to_string())
    }
}

impl From<ShamashError> for HarnessError {
    fn from(e: ShamashError) -> Self {
        match e {
            ShamashError::NotAComplex(_) | ShamashError::NotExact { .. } | ShamashError::WrongH0 { .. } => {
                HarnessError::Certificate(e.to_string())
            }
            e => HarnessError::Validation(e.to_string()),
        }
    }
}

impl From<TateError> for HarnessError {
    fn from(e: TateError) -> Self {
        match e {
            TateError::NotChainMap(_) | TateError::AcyclicityFails { .. } | TateError::H0IsoFails { .. } => {
                HarnessError::Certificate(e.to_string())
            }
            TateError::Shamash(e) => e.into(),
            e => HarnessError::Validation(e.to_string()),
        }
    }
}

impl From<HomotopyError> for HarnessError {
    fn from(e: HomotopyError) -> Self {
        match e {
            HomotopyError::Koszul(_) | HomotopyError::Groebner(_) => HarnessError::Validation(e.to_string()),
            e => HarnessError::Certificate(e.to_string()),
        }
    }
}

impl From<ComplexError> for HarnessError {
    fn from(e: ComplexError) -> Self {
        HarnessError::Certificate(e.to_string())
    }
}

/// A pair of complete intersections `(g) ⊆ (f)` in `F_p[variables]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInstance {
    pub field_char: u32,
    pub variables: Vec<String>,
    pub f: Vec<String>,
    pub g: Vec<String>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_internal_degree: Option<i32>,
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Validated {
    pub ring: Arc<PolyRing>,
    pub lift: LiftMatrix,
    pub window: (i32, i32),
}

impl ProblemInstance {
    pub fn from_json(text: &str) -> Result<ProblemInstance, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
    }

    /// Parses polynomials and checks regularity, containment and the lift
    /// identity.
    pub fn validate(&self) -> Result<Validated, HarnessError> {
        let field = PrimeField::new(self.field_char)?;
        let ring = PolyRing::from_names(field, self.variables.clone())?;
        let parse = |v: &[String]| -> Result<Vec<Poly>, HarnessError> {
            v.iter().map(|s| ring.parse(s).map_err(HarnessError::from)).collect()
        };
        let f = parse(&self.f)?;
        let g = parse(&self.g)?;
        if f.is_empty() || g.is_empty() {
            return Err(HarnessError::Validation("f and g must be nonempty".into()));
        }
        if g.len() > f.len() {
            return Err(HarnessError::Validation("g has more elements than f".into()));
        }
        let a = match &self.a {
            Some(rows) => Some(rows.iter().map(|r| parse(r)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let lift = validate_pair(&ring, f, g, a)?;
        let window = self.window.map_or(DEFAULT_WINDOW, |[lo, hi]| (lo, hi));
        if window.0 > window.1 {
            return Err(HarnessError::Validation(format!("empty window [{}, {}]", window.0, window.1)));
        }
        Ok(Validated { ring, lift, window })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiEntry {
    pub position: i32,
    pub twist: i32,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McmJson {
    pub generator_count: usize,
    pub target_twists: Vec<i32>,
    pub source_twists: Vec<i32>,
    pub target_labels: Vec<String>,
    pub source_labels: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificatesJson {
    /// Length and degree bound of the verified resolution of `M`.
    pub resolution_length: usize,
    /// Hilbert function of `H_0` of that resolution, degrees `0..=dmax`.
    pub resolution_h0: Vec<usize>,
    pub orthogonality: bool,
    /// Internal degrees in which `σ_c` induces `H_0 ≅ H_c`.
    pub sigma_iso_degrees: [i32; 2],
    pub chain_map: bool,
    pub acyclic_positions: [i32; 2],
    pub degrees: [i32; 2],
    /// `dim H_0` in each certified degree, where the splice map is an
    /// isomorphism.
    pub h0_dims: Vec<[i64; 2]>,
    pub minimal_before: bool,
    pub minimal_after: bool,
}

/// Everything `build` writes: the instance with defaults filled in, the
/// spliced and minimized windows, certificates, Betti table and the MCM
/// presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildOutput {
    pub instance: ProblemInstance,
    pub codim: i32,
    pub twist: i32,
    pub lift_matrix: Vec<Vec<String>>,
    /// Minors of the lift matrix, keyed by row subset.
    pub alpha: BTreeMap<String, String>,
    pub splice: ComplexJson,
    pub minimal: ComplexJson,
    pub certificates: CertificatesJson,
    pub betti: Vec<BettiEntry>,
    pub mcm: McmJson,
}

impl BuildOutput {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<BuildOutput, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
    }
}

/// Full pipeline: validate, resolve `M`, splice with the dual, minimize and
/// read off the MCM approximation, recording every certificate.
pub fn run_build(instance: &ProblemInstance, exec: Exec) -> Result<BuildOutput, HarnessError> {
    let v = instance.validate()?;
    let ring = &v.ring;
    let lift = &v.lift;
    let (lo, hi) = v.window;
    let m = (lift.n() - lift.c()) as i32;
    let r = quotient_ring(ring, lift)?;
    let len = required_length(lo, hi, m) as usize;
    let res = es_resolution(&r, lift, len)?;
    let t = tate_splice(&res, (lo, hi), instance.max_internal_degree, exec)?;
    let dmax = t.certificates.degrees.1;
    let res_cert = verify_resolution(&res, dmax, exec)?;
    let orthogonality = orthogonality_check(lift, ring);
    if !orthogonality {
        return Err(HarnessError::Certificate("α ∧ a_j is nonzero for some column".into()));
    }
    let sigma_dmax = dmax.min(SIGMA_DMAX);
    HomotopySystem::koszul(ring, lift)?.sigma_c_chain_map(sigma_dmax, exec)?;
    let min = minimize(&t.complex, 0);
    let minimal_after = min.is_minimal();
    let min_t = crate::tate::TateResolution {
        complex: min.clone(),
        ..t.clone()
    };
    let mcm = mcm_presentation(&min_t)?;
    let field = ring.field();
    let alpha = alpha_element(lift, field);
    let cert = &t.certificates;
    let mut normalized = instance.clone();
    normalized.window = Some([lo, hi]);
    normalized.max_internal_degree = Some(dmax);
    Ok(BuildOutput {
        instance: normalized,
        codim: t.codim,
        twist: t.twist,
        lift_matrix: lift.a.iter().map(|row| row.iter().map(|p| ring.format(p)).collect()).collect(),
        alpha: alpha
            .terms
            .iter()
            .map(|(&s, p)| (subset_label(s), ring.format(p)))
            .collect(),
        splice: serial::to_json(&t.complex),
        minimal: serial::to_json(&min),
        certificates: CertificatesJson {
            resolution_length: res_cert.length,
            resolution_h0: res_cert.h0,
            orthogonality,
            sigma_iso_degrees: [0, sigma_dmax],
            chain_map: cert.chain_map,
            acyclic_positions: [cert.acyclic_positions.0, cert.acyclic_positions.1],
            degrees: [cert.degrees.0, cert.degrees.1],
            h0_dims: cert.h0_iso.iter().map(|(d, ir)| [*d as i64, ir.source_dim as i64]).collect(),
            minimal_before: cert.minimal_before,
            minimal_after,
        },
        betti: betti_entries(&min),
        mcm: McmJson {
            generator_count: mcm.generator_count,
            target_twists: mcm.target_twists,
            source_twists: mcm.source_twists,
            target_labels: mcm.target_labels,
            source_labels: mcm.source_labels,
            matrix: (0..mcm.matrix.rows())
                .map(|i| (0..mcm.matrix.cols()).map(|j| ring.format(mcm.matrix.get(i, j))).collect())
                .collect(),
            minimal: mcm.minimal,
        },
    })
}

pub fn betti_entries(c: &ChainComplex) -> Vec<BettiEntry> {
    c.betti_table()
        .into_iter()
        .map(|((position, degree), rank)| BettiEntry {
            position,
            twist: -degree,
            rank,
        })
        .collect()
}

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Witness on failure, summary on success.
    pub detail: String,
}

/// What `verify` recomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub degrees: (i32, i32),
    pub checks: Vec<Check>,
    /// Window ends of the spliced complex, where homology is not defined.
    pub window_edges: Vec<i32>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `Err` with the first failing check's witness.
    pub fn ensure_passed(&self) -> Result<(), HarnessError> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(HarnessError::Certificate(format!("{}: {}", c.name, c.detail))),
            None => Ok(()),
        }
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{status}  {:<width$}  {}", c.name, c.detail);
        }
        for i in &self.window_edges {
            let _ = writeln!(out, "edge  H_{i} not defined at the window end (WindowEdge)");
        }
        out
    }
}

fn check(name: &str, result: Result<String, String>) -> Check {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Parses a stored complex; a failing `d^2 = 0` becomes a failed check,
/// any other problem a parse error.
fn load_complex(name: &str, j: &ComplexJson, checks: &mut Vec<Check>) -> Result<Option<ChainComplex>, HarnessError> {
    let label = format!("{name}: d^2 = 0");
    match serial::from_json(j) {
        Ok(c) => {
            checks.push(check(&label, Ok(format!("positions {}..{}", c.lo(), c.hi()))));
            Ok(Some(c))
        }
        Err(e @ ComplexError::NotAComplex { .. }) => {
            checks.push(check(&label, Err(e.to_string())));
            Ok(None)
        }
        Err(e) => Err(HarnessError::Parse(e.to_string())),
    }
}

fn acyclicity(c: &ChainComplex, dmin: i32, dmax: i32, exec: Exec) -> Result<String, String> {
    let (lo, hi) = (c.lo(), c.hi());
    let interior: Vec<i32> = (lo..=hi).filter(|&i| c.homology_defined(i)).collect();
    let (Some(&a), Some(&b)) = (interior.first(), interior.last()) else {
        return Ok("no interior positions".into());
    };
    let table = homology_table(c, a..=b, dmin..=dmax, exec).map_err(|e| e.to_string())?;
    match table.iter().find(|(_, &v)| v != 0) {
        Some((&(i, d), &dim)) => Err(format!("H_{i} has dimension {dim} in degree {d}")),
        None => Ok(format!("H_i = 0 for i in {a}..{b}, degrees {dmin}..{dmax}")),
    }
}

/// Re-parses both complexes, recomputes `d^2 = 0`, interior homology of
/// each up to internal degree `dmax`, minimality of the minimized window,
/// and consistency of the Betti table and MCM presentation. Every check is
/// run and reported; only malformed input is an error.
pub fn run_verify(output: &BuildOutput, dmax: Option<i32>, exec: Exec) -> Result<VerifyReport, HarnessError> {
    let mut checks = Vec::new();
    let splice = load_complex("splice", &output.splice, &mut checks)?;
    let minimal = load_complex("minimal", &output.minimal, &mut checks)?;
    let degree_source = splice.as_ref().or(minimal.as_ref());
    let dmin = degree_source
        .map(|c| c.terms().iter().flat_map(|t| t.degrees.iter().copied()).min().unwrap_or(0))
        .unwrap_or(0);
    let dmax = dmax
        .or(output.instance.max_internal_degree)
        .unwrap_or_else(|| degree_source.map_or(0, default_dmax));
    let skipped = || Err("skipped: complex failed d^2 = 0".to_string());
    for (name, c) in [("splice", &splice), ("minimal", &minimal)] {
        let r = c.as_ref().map_or_else(skipped, |c| acyclicity(c, dmin, dmax, exec));
        checks.push(check(&format!("{name}: acyclic"), r));
    }
    let window_edges = splice
        .as_ref()
        .map(|c| c.positions().filter(|&i| !c.homology_defined(i)).collect())
        .unwrap_or_default();
    let Some(minimal) = minimal else {
        for name in ["minimal: no unit entries", "betti table", "mcm presentation"] {
            checks.push(check(name, skipped()));
        }
        return Ok(VerifyReport {
            degrees: (dmin, dmax),
            checks,
            window_edges,
        });
    };
    checks.push(check(
        "minimal: no unit entries",
        match minimal.unit_entry() {
            Some((i, row, col)) => Err(format!("d_{i} has a unit at ({row}, {col})")),
            None => Ok("all entries in the maximal ideal".into()),
        },
    ));
    let betti = betti_entries(&minimal);
    checks.push(check(
        "betti table",
        if betti == output.betti {
            Ok(format!("{} entries", betti.len()))
        } else {
            Err("stored table differs from the minimized window".into())
        },
    ));
    let ring = minimal.base().ring();
    let mcm = match minimal.diff(1) {
        None => Err("window does not contain positions 0 and 1".to_string()),
        Some(d1) => {
            let matrix: Vec<Vec<String>> = (0..d1.rows())
                .map(|i| (0..d1.cols()).map(|j| ring.format(d1.get(i, j))).collect())
                .collect();
            if matrix != output.mcm.matrix {
                Err("stored matrix differs from T_1 -> T_0".into())
            } else if minimal.rank(0) != output.mcm.generator_count {
                Err(format!(
                    "stored generator count {} but T_0 has rank {}",
                    output.mcm.generator_count,
                    minimal.rank(0)
                ))
            } else {
                Ok(format!("generator count {}", output.mcm.generator_count))
            }
        }
    };
    checks.push(check("mcm presentation", mcm));
    Ok(VerifyReport {
        degrees: (dmin, dmax),
        checks,
        window_edges,
    })
}

/// Renders a Betti table: one column per homological position, one row per
/// internal degree.
pub fn format_betti(entries: &[BettiEntry]) -> String {
    let mut table: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for e in entries {
        table.insert((-e.twist, e.position), e.rank);
    }
    let positions: Vec<i32> = {
        let mut p: Vec<i32> = entries.iter().map(|e| e.position).collect();
        p.sort();
        p.dedup();
        p
    };
    let degrees: Vec<i32> = {
        let mut d: Vec<i32> = entries.iter().map(|e| -e.twist).collect();
        d.sort();
        d.dedup();
        d
    };
    let width = 4;
    let mut out = String::new();
    let _ = write!(out, "{:>6} |", "deg");
    for p in &positions {
        let _ = write!(out, "{p:>width$}");
    }
    out.push('\n');
    out.push_str(&"-".repeat(8 + width * positions.len()));
    out.push('\n');
    for d in &degrees {
        let _ = write!(out, "{d:>6} |");
        for p in &positions {
            match table.get(&(*d, *p)) {
                Some(r) => {
                    let _ = write!(out, "{r:>width$}");
                }
                None => {
                    let _ = write!(out, "{:>width$}", ".");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>6} |", "total");
    for p in &positions {
        let total: usize = entries.iter().filter(|e| e.position == *p).map(|e| e.rank).sum();
        let _ = write!(out, "{total:>width$}");
    }
    out.push('\n');
    out
}
