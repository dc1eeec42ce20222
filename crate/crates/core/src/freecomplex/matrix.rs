use crate::arith::{Poly, PrimeField};

use super::BaseRing;

/// Graded free module: generator degrees plus optional provenance labels.
///
/// A generator of degree `a` spans a copy of the ring shifted so that the
/// generator sits in internal degree `a`; the conventional twist is `-a`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedFreeModule {
    pub degrees: Vec<i32>,
    pub labels: Vec<String>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i32>) -> Self {
        let labels = vec![String::new(); degrees.len()];
        GradedFreeModule { degrees, labels }
    }

    pub fn labelled(degrees: Vec<i32>, labels: Vec<String>) -> Self {
        assert_eq!(degrees.len(), labels.len());
        GradedFreeModule { degrees, labels }
    }

    pub fn zero() -> Self {
        GradedFreeModule::default()
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn twists(&self) -> Vec<i32> {
        self.degrees.iter().map(|d| -d).collect()
    }

    pub fn direct_sum(&self, other: &GradedFreeModule) -> GradedFreeModule {
        let mut out = self.clone();
        out.degrees.extend_from_slice(&other.degrees);
        out.labels.extend_from_slice(&other.labels);
        out
    }

    pub fn relabel(&self, f: impl Fn(&str) -> String) -> GradedFreeModule {
        GradedFreeModule {
            degrees: self.degrees.clone(),
            labels: self.labels.iter().map(|l| f(l)).collect(),
        }
    }

    pub fn select(&self, keep: &[usize]) -> GradedFreeModule {
        GradedFreeModule {
            degrees: keep.iter().map(|&i| self.degrees[i]).collect(),
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

/// Matrix of homogeneous polynomials representing a degree-preserving map
/// of graded free modules. Column `j` is the image of source generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    /// Generator degrees of the target (one per row).
    pub target: Vec<i32>,
    /// Generator degrees of the source (one per column).
    pub source: Vec<i32>,
}

impl PolyMatrix {
    pub fn zeros(target: Vec<i32>, source: Vec<i32>) -> PolyMatrix {
        let (rows, cols) = (target.len(), source.len());
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
            target,
            source,
        }
    }

    /// `c * id` on a module with the given degrees. The target degrees are
    /// lowered by `shift` so that multiplication by a form of degree `shift`
    /// stays homogeneous.
    pub fn scalar(degrees: &[i32], c: &Poly, shift: i32) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(degrees.iter().map(|d| d - shift).collect(), degrees.to_vec());
        for i in 0..degrees.len() {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn identity(degrees: &[i32]) -> PolyMatrix {
        PolyMatrix::scalar(degrees, &Poly::one(), 0)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Expected degree of entry `(i, j)`.
    pub fn entry_degree(&self, i: usize, j: usize) -> i32 {
        self.source[j] - self.target[i]
    }

    /// First entry that is not homogeneous of the expected degree.
    pub fn degree_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = self.entry_degree(i, j);
                if !e.is_homogeneous() || e.total_degree().map(|d| d as i32) != Some(want) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Reduces every entry modulo the base ideal.
    pub fn normalized(&self, base: &BaseRing) -> PolyMatrix {
        let mut out = self.clone();
        if !base.is_polynomial_ring() {
            for e in out.entries.iter_mut() {
                *e = base.reduce(e);
            }
        }
        out
    }

    /// `self * other`, reduced over `base`.
    pub fn mul(&self, other: &PolyMatrix, base: &BaseRing) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let field = base.field();
        let mut out = PolyMatrix::zeros(self.target.clone(), other.source.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b, field), field);
                }
            }
        }
        out.normalized(base)
    }

    pub fn add(&self, other: &PolyMatrix, field: PrimeField) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b, field);
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix, field: PrimeField) -> PolyMatrix {
        self.add(&other.scale(field.neg(1), field), field)
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> PolyMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.scale(c, field);
        }
        out
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: i32, field: PrimeField) -> PolyMatrix {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.scale(field.neg(1), field)
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.source.clone(), self.target.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Transpose viewed as a map of dual modules: degrees are negated and
    /// shifted by `shift`.
    pub fn dual(&self, shift: i32) -> PolyMatrix {
        let mut t = self.transpose();
        t.source = self.target.iter().map(|d| shift - d).collect();
        t.target = self.source.iter().map(|d| shift - d).collect();
        t
    }

    /// Block matrix `[[a, b], [c, d]]`; blocks must agree on degrees.
    pub fn block(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> PolyMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let target: Vec<i32> = a.target.iter().chain(&c.target).copied().collect();
        let source: Vec<i32> = a.source.iter().chain(&b.source).copied().collect();
        let mut out = PolyMatrix::zeros(target, source);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(
            rows.iter().map(|&i| self.target[i]).collect(),
            cols.iter().map(|&j| self.source[j]).collect(),
        );
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// First entry with a non-zero constant term (a unit in the graded
    /// local sense).
    pub fn unit_entry(&self) -> Option<(usize, usize)> {
        for j in 0..self.cols {
            for i in 0..self.rows {
                if self.get(i, j).constant_term() != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Applies the matrix to a column of polynomials.
    pub fn apply(&self, v: &[Poly], base: &BaseRing) -> Vec<Poly> {
        let field = base.field();
        (0..self.rows)
            .map(|i| {
                let s = (0..self.cols).fold(Poly::zero(), |acc, j| {
                    acc.add(&self.get(i, j).mul(&v[j], field), field)
                });
                base.reduce(&s)
            })
            .collect()
    }
}
