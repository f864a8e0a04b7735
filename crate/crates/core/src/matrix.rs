//! Dense exact matrices over Q or F_p with rank, kernel and solve.
//!
//! Everything is immutable from the caller's point of view: operations
//! return fresh matrices. Elimination picks the first nonzero entry in
//! column order as pivot, which keeps runs reproducible across platforms.

use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    tag: FieldTag,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(tag: FieldTag, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, tag, data: vec![Scalar::zero(tag); rows * cols] }
    }

    pub fn identity(tag: FieldTag, n: usize) -> Self {
        let mut m = Matrix::zeros(tag, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(tag));
        }
        m
    }

    pub fn from_fn(tag: FieldTag, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                assert_eq!(v.tag(), tag, "entry from a different field");
                data.push(v);
            }
        }
        Matrix { rows, cols, tag, data }
    }

    /// Integer literal rows, mainly for tests and fixtures.
    pub fn from_i64_rows(tag: FieldTag, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(tag, r, c, |i, j| Scalar::from_i64(tag, rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        debug_assert!(r < self.rows && c < self.cols);
        r * self.cols + c
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[self.idx(r, c)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.tag(), self.tag);
        let i = self.idx(r, c);
        self.data[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.tag, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix::from_fn(self.tag, self.rows, self.cols, |r, c| self.get(r, c).add(other.get(r, c)))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Matrix::from_fn(self.tag, self.rows, self.cols, |r, c| self.get(r, c).sub(other.get(r, c)))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.tag, self.rows, self.cols, |r, c| self.get(r, c).neg())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_fn(self.tag, self.rows, self.cols, |r, c| self.get(r, c).mul(s))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.tag, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        let mut out = vec![Scalar::zero(self.tag); self.rows];
        for r in 0..self.rows {
            let mut acc = Scalar::zero(self.tag);
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc = acc.add(&a.mul(&v[c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        Matrix::from_fn(self.tag, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.get(r, c).clone() } else { other.get(r, c - self.cols).clone() }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        Matrix::from_fn(self.tag, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self.get(r, c).clone() } else { other.get(r - self.rows, c).clone() }
        })
    }

    /// Block diagonal sum of two maps.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.tag, self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.get(r, c).clone()
            } else if r >= self.rows && c >= self.cols {
                other.get(r - self.rows, c - self.cols).clone()
            } else {
                Scalar::zero(self.tag)
            }
        })
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for col in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let found = (pr..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(src) = found else { continue };
            if src != pr {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, src * m.cols + c);
                }
            }
            let inv = m.get(pr, col).inv();
            if !inv.is_one() {
                for c in col..m.cols {
                    let v = m.get(pr, c).mul(&inv);
                    m.set(pr, c, v);
                }
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let src_v = m.get(pr, c);
                    if src_v.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c).sub(&factor.mul(src_v));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right null space, one basis vector per column.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut out = Matrix::zeros(self.tag, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, Scalar::one(self.tag));
            for (row, &col) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if !v.is_zero() {
                    out.set(col, j, v.neg());
                }
            }
        }
        out
    }

    /// Any solution of `self * x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: matrix has {} rows but right-hand side has {} entries",
                self.rows,
                b.len()
            )));
        }
        let rhs = Matrix::from_fn(self.tag, self.rows, 1, |r, _| b[r].clone());
        Ok(self.solve_matrix(&rhs)?.map(|m| m.column(0)))
    }

    /// Simultaneous solve for every column of `b`; `None` when any column is
    /// inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: matrix has {} rows but right-hand side has {}",
                self.rows,
                b.rows()
            )));
        }
        let (r, pivots) = self.hstack(b).rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut out = Matrix::zeros(self.tag, self.cols, b.cols());
        for (row, &col) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                out.set(col, j, r.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(out))
    }

    /// Indices of a maximal independent set of columns (pivot columns).
    pub fn column_space_pivots(&self) -> Vec<usize> {
        self.rref().1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldTag {
        FieldTag::Q
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(q(), 3).rank(), 3);
        assert_eq!(Matrix::zeros(q(), 2, 5).rank(), 0);
        let m = Matrix::from_i64_rows(q(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let m = Matrix::from_i64_rows(q(), &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![Scalar::from_i64(q(), -2), Scalar::from_i64(q(), 1)]);
        assert!(Matrix::identity(q(), 4).kernel().cols() == 0);
    }

    #[test]
    fn solve_examples() {
        let m = Matrix::from_i64_rows(q(), &[vec![1, 2], vec![2, 4]]);
        let b = vec![Scalar::from_i64(q(), 1), Scalar::from_i64(q(), 2)];
        let x = m.solve(&b).unwrap().expect("consistent");
        assert_eq!(m.apply(&x), b);
        let bad = vec![Scalar::from_i64(q(), 1), Scalar::from_i64(q(), 3)];
        assert_eq!(m.solve(&bad).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Matrix::identity(q(), 2);
        let b = vec![Scalar::from_i64(q(), 1)];
        assert!(matches!(m.solve(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn fp_elimination() {
        let t = FieldTag::Fp(5);
        // 2x2 with determinant 0 mod 5 but not over Z: [[1,2],[3,1]] has det -5.
        let m = Matrix::from_i64_rows(t, &[vec![1, 2], vec![3, 1]]);
        assert_eq!(m.rank(), 1);
        let mq = Matrix::from_i64_rows(q(), &[vec![1, 2], vec![3, 1]]);
        assert_eq!(mq.rank(), 2);
    }

    fn small_matrix(tag: FieldTag) -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                let mut m = Matrix::zeros(tag, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, Scalar::from_i64(tag, vals[i * c + j]));
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(m in small_matrix(FieldTag::Q)) {
            prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
        }

        #[test]
        fn kernel_is_annihilated(m in small_matrix(FieldTag::Q)) {
            let k = m.kernel();
            if k.cols() > 0 {
                prop_assert!(m.mul(&k).is_zero());
            }
        }

        #[test]
        fn rank_transpose_invariant(m in small_matrix(FieldTag::Fp(5))) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solve_solves(m in small_matrix(FieldTag::Q), x in proptest::collection::vec(-3i64..4, 1..5)) {
            if x.len() == m.cols() {
                let xv: Vec<Scalar> = x.iter().map(|&v| Scalar::from_i64(FieldTag::Q, v)).collect();
                let b = m.apply(&xv);
                let sol = m.solve(&b).unwrap().expect("constructed to be consistent");
                prop_assert_eq!(m.apply(&sol), b);
            }
        }
    }
}
