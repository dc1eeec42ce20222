//! JSON form of a complex. Keys are emitted in a fixed order and every
//! polynomial in canonical form, so equal complexes serialize to identical
//! bytes.

use serde::{Deserialize, Serialize};

use crate::arith::{PolyRing, PrimeField};
use crate::groebner::GroebnerBasis;

use super::{BaseRing, Boundary, ChainComplex, ComplexError, GradedFreeModule, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub field_char: u32,
    pub variables: Vec<String>,
    /// Reduced Gröbner basis of the base ideal (empty over `S`).
    pub ideal: Vec<String>,
    pub window: [i32; 2],
    pub boundary: BoundaryJson,
    pub terms: Vec<TermJson>,
    pub differentials: Vec<DiffJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryJson {
    pub lower: Boundary,
    pub upper: Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub position: i32,
    pub twists: Vec<i32>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffJson {
    /// The map goes from this position to the one below.
    pub position: i32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn to_json(c: &ChainComplex) -> ComplexJson {
    let ring = c.base().ring();
    let terms = c
        .positions()
        .map(|i| {
            let t = c.term(i).unwrap();
            TermJson {
                position: i,
                twists: t.twists(),
                labels: t.labels.clone(),
            }
        })
        .collect();
    let differentials = (c.lo() + 1..=c.hi())
        .map(|i| {
            let d = c.diff(i).unwrap();
            DiffJson {
                position: i,
                rows: d.rows(),
                cols: d.cols(),
                entries: (0..d.rows())
                    .map(|r| (0..d.cols()).map(|k| ring.format(d.get(r, k))).collect())
                    .collect(),
            }
        })
        .collect();
    ComplexJson {
        field_char: ring.field().characteristic(),
        variables: ring.variables().to_vec(),
        ideal: c.base().ideal().generators().iter().map(|g| ring.format(g)).collect(),
        window: [c.lo(), c.hi()],
        boundary: BoundaryJson {
            lower: c.lower(),
            upper: c.upper(),
        },
        terms,
        differentials,
    }
}

pub fn to_string(c: &ChainComplex) -> String {
    serde_json::to_string_pretty(&to_json(c)).expect("complex serializes")
}

/// Rebuilds and re-verifies a complex.
pub fn from_json(j: &ComplexJson) -> Result<ChainComplex, ComplexError> {
    let bad = |m: String| ComplexError::Malformed(m);
    let field = PrimeField::new(j.field_char).map_err(|e| bad(e.to_string()))?;
    let ring = PolyRing::from_names(field, j.variables.clone()).map_err(|e| bad(e.to_string()))?;
    let base = if j.ideal.is_empty() {
        BaseRing::polynomial(ring.clone())
    } else {
        let gens = j
            .ideal
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        let gb = GroebnerBasis::buchberger(ring.clone(), &gens).map_err(|e| bad(e.to_string()))?;
        BaseRing::quotient(gb)
    };
    let [lo, hi] = j.window;
    if hi < lo || j.terms.len() != (hi - lo + 1) as usize {
        return Err(bad("window does not match the number of terms".into()));
    }
    let mut terms = Vec::new();
    for (k, t) in j.terms.iter().enumerate() {
        if t.position != lo + k as i32 || t.labels.len() != t.twists.len() {
            return Err(bad(format!("term {k} is out of order or mislabelled")));
        }
        terms.push(GradedFreeModule::labelled(
            t.twists.iter().map(|x| -x).collect(),
            t.labels.clone(),
        ));
    }
    if j.differentials.len() != terms.len() - 1 {
        return Err(bad("wrong number of differentials".into()));
    }
    let mut diffs = Vec::new();
    for (k, dj) in j.differentials.iter().enumerate() {
        let position = lo + k as i32 + 1;
        if dj.position != position {
            return Err(bad(format!("differential {k} is out of order")));
        }
        if dj.entries.len() != dj.rows || dj.entries.iter().any(|r| r.len() != dj.cols) {
            return Err(bad(format!("differential at {position} has ragged entries")));
        }
        let tgt = &terms[k];
        let src = &terms[k + 1];
        if dj.rows != tgt.rank() || dj.cols != src.rank() {
            return Err(ComplexError::ShapeMismatch {
                position,
                expected: (tgt.rank(), src.rank()),
                found: (dj.rows, dj.cols),
            });
        }
        let mut m = PolyMatrix::zeros(tgt.degrees.clone(), src.degrees.clone());
        for (r, row) in dj.entries.iter().enumerate() {
            for (cidx, s) in row.iter().enumerate() {
                m.set(r, cidx, ring.parse(s).map_err(|e| bad(e.to_string()))?);
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(base, lo, terms, diffs, j.boundary.lower, j.boundary.upper)
}

pub fn from_str(s: &str) -> Result<ChainComplex, ComplexError> {
    let j: ComplexJson = serde_json::from_str(s).map_err(|e| ComplexError::Malformed(e.to_string()))?;
    from_json(&j)
}
