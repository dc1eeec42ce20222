//! Linear algebra over `F_p`: sparse elimination for ranks and a small dense
//! matrix type for solving and kernels.

use crate::arith::PrimeField;

/// Sparse vector: strictly increasing indices, non-zero values.
pub type SparseVec = Vec<(u32, u32)>;

/// `a - c*b` for sparse vectors.
fn axpy(a: &SparseVec, c: u32, b: &SparseVec, field: PrimeField) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(u32::MAX, |t| t.0);
        let kb = b.get(j).map_or(u32::MAX, |t| t.0);
        if ka < kb {
            out.push(a[i]);
            i += 1;
        } else if kb < ka {
            out.push((kb, field.neg(field.mul(c, b[j].1))));
            j += 1;
        } else {
            let v = field.sub(a[i].1, field.mul(c, b[j].1));
            if v != 0 {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental echelon form over sparse vectors, keyed by leading index.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    field: PrimeField,
    pivots: std::collections::HashMap<u32, SparseVec>,
}

impl SparseEchelon {
    pub fn new(field: PrimeField) -> Self {
        SparseEchelon {
            field,
            pivots: Default::default(),
        }
    }

    /// Reduces `v` by the current pivots until its leading index is free.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some(&(lead, c)) = v.first() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, c, p, self.field),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        match v.first() {
            None => false,
            Some(&(lead, c)) => {
                let inv = self.field.inv(c);
                let v = v.into_iter().map(|(k, x)| (k, self.field.mul(x, inv))).collect();
                self.pivots.insert(lead, v);
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Fully reduces `v`: the result has no entry at any pivot index and
    /// differs from `v` by an element of the span. Linear in `v`.
    pub fn normal_form(&self, mut v: SparseVec) -> SparseVec {
        let mut idx = 0;
        while idx < v.len() {
            let (k, c) = v[idx];
            match self.pivots.get(&k) {
                Some(p) => v = axpy(&v, c, p, self.field),
                None => idx += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a set of sparse vectors.
pub fn sparse_rank(vectors: impl IntoIterator<Item = SparseVec>, field: PrimeField) -> usize {
    let mut ech = SparseEchelon::new(field);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Dense row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_sparse_columns(rows: usize, cols: &[SparseVec]) -> Self {
        let mut m = DenseMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                m.set(i as usize, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, field: PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field.inv(self.get(r, c));
            for j in c..self.cols {
                let v = field.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(self.get(i, j), field.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: PrimeField) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self, field: PrimeField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u32; self.cols];
            x[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = field.neg(m.get(r, free));
            }
            out.push(x);
        }
        out
    }

    /// Some solution of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[u32], field: PrimeField) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, bi);
        }
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn mul_vec(&self, x: &[u32], field: PrimeField) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u32, |acc, j| field.add(acc, field.mul(self.get(i, j), x[j])))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn rank_small() {
        let cols = vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 4)], vec![(2, 5)]];
        assert_eq!(sparse_rank(cols.clone(), f()), 2);
        assert_eq!(DenseMatrix::from_sparse_columns(3, &cols).rank(f()), 2);
    }

    #[test]
    fn solve_and_kernel() {
        let mut m = DenseMatrix::zeros(2, 3);
        m.data = vec![1, 2, 3, 0, 1, 4];
        let b = vec![5, 6];
        let x = m.solve(&b, f()).unwrap();
        assert_eq!(m.mul_vec(&x, f()), b);
        let ker = m.nullspace(f());
        assert_eq!(ker.len(), 1);
        assert_eq!(m.mul_vec(&ker[0], f()), vec![0, 0]);
        let mut z = DenseMatrix::zeros(2, 1);
        z.data = vec![0, 0];
        assert!(z.solve(&[1, 0], f()).is_none());
    }

    proptest! {
        #[test]
        fn sparse_and_dense_rank_agree(entries in proptest::collection::vec(0u32..3, 48)) {
            // 6x8 matrices with many zeros
            let field = f();
            let cols: Vec<SparseVec> = (0..8)
                .map(|j| (0..6u32).filter_map(|i| {
                    let v = entries[(j * 6 + i as usize) % 48];
                    (v != 0).then_some((i, v))
                }).collect())
                .collect();
            let dense = DenseMatrix::from_sparse_columns(6, &cols);
            prop_assert_eq!(sparse_rank(cols, field), dense.rank(field));
            let ker = dense.nullspace(field);
            prop_assert_eq!(ker.len() + dense.rank(field), 8);
        }
    }
}
