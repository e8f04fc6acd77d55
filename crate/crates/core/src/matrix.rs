//! Dense matrices over a finite field, with just enough linear algebra for
//! rank certificates, kernels and module arithmetic: Gaussian elimination
//! throughout, no pivoting heuristics needed over exact fields.

use crate::gf::Gf;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Gf,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: Gf, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Gf, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Gf, rows: &[Vec<u64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for &v in row {
                debug_assert!(field.is_element(v));
                data.push(v);
            }
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let add = f.mul(a, other.get(k, c));
                    let cur = out.get(r, c);
                    out.set(r, c, f.add(cur, add));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0;
                for (c, &vc) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.get(r, c), vc));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = f.add(self.data[i], other.data[i]);
        }
        out
    }

    pub fn scale(&self, s: u64) -> Matrix {
        let f = &self.field;
        let mut out = self.clone();
        for v in &mut out.data {
            *v = f.mul(*v, s);
        }
        out
    }

    /// Stack matrices vertically.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let field = blocks[0].field.clone();
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Reduce in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pivot_row != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    self.set(row, c, self.get(pivot_row, c));
                    self.set(pivot_row, c, tmp);
                }
            }
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel {v : Av = 0}.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field.clone();
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                // Pivot variable = -(coefficient of the free column).
                v[pc] = f.neg(reduced.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Rank of the span of a set of vectors.
    pub fn span_rank(field: &Gf, vectors: &[Vec<u64>]) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        Matrix::from_rows(field.clone(), vectors).rank()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over GF({})",
            self.rows,
            self.cols,
            self.field.size()
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.get(r, c).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Gf {
        Gf::prime(7).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = Matrix::from_rows(f7(), &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::identity(f7(), 4).rank(), 4);
        assert_eq!(Matrix::zeros(f7(), 3, 5).rank(), 0);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let m = Matrix::from_rows(
            f7(),
            &[vec![1, 0, 2, 5], vec![3, 3, 0, 1], vec![4, 3, 2, 6]],
        );
        assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let m = Matrix::from_rows(f7(), &[vec![1, 2, 3], vec![2, 4, 6]]);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        assert_eq!(Matrix::span_rank(&f7(), &kernel), 2);
    }

    #[test]
    fn kernel_over_an_extension_field() {
        let f = Gf::extension(2, 3).unwrap();
        let m = Matrix::from_rows(f.clone(), &[vec![1, 3], vec![2, 6]]);
        // Row 2 = 2 * row 1 iff 2*3 == 6 in GF(8); the product depends on
        // the modulus, so compute the expected kernel size from the rank.
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2 - m.rank());
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn product_respects_identity() {
        let m = Matrix::from_rows(f7(), &[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let id = Matrix::identity(f7(), 2);
        assert_eq!(m.mul(&id), m);
    }
}
