//! Small dense matrices over a field context.
//!
//! Determinants use fraction-free (Bareiss) elimination, taking as pivot the
//! first nonzero entry of the column in row order. Sizes here are tiny
//! (Dickson, Moore and Gram matrices with n ≤ 8), so nothing is blocked or
//! vectorized.

use crate::gf::{FieldCtx, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entry codes, row-major.
    pub fn to_codes(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.code()).collect())
            .collect()
    }

    pub fn mul(&self, field: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(field.zero(), |acc, k| {
                field.add(acc, field.mul(self.get(i, k), other.get(k, j)))
            })
        })
    }

    /// Determinant by Bareiss elimination. Every division is exact.
    pub fn det(&self, field: &FieldCtx) -> FieldElem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return field.one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = field.one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return field.zero();
            };
            if piv != k {
                a.swap_rows(piv, k);
                negate = !negate;
            }
            let akk = a.get(k, k);
            for i in k + 1..n {
                let aik = a.get(i, k);
                for j in k + 1..n {
                    let num = field.sub(field.mul(a.get(i, j), akk), field.mul(aik, a.get(k, j)));
                    let v = field.div(num, prev).expect("Bareiss pivot is nonzero");
                    a.set(i, j, v);
                }
                a.set(i, k, field.zero());
            }
            prev = akk;
        }
        let d = a.get(n - 1, n - 1);
        if negate {
            field.neg(d)
        } else {
            d
        }
    }

    /// The matrix with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                data.push(self.get(r, c));
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// `(-1)^(i+j) · det(minor(i, j))`.
    pub fn cofactor(&self, field: &FieldCtx, i: usize, j: usize) -> FieldElem {
        let d = self.minor(i, j).det(field);
        if (i + j) % 2 == 1 {
            field.neg(d)
        } else {
            d
        }
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, field: &FieldCtx) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(field, n);
        for k in 0..n {
            let piv = (k..n).find(|&r| !a.get(r, k).is_zero())?;
            a.swap_rows(piv, k);
            inv.swap_rows(piv, k);
            let s = field.inv(a.get(k, k))?;
            for j in 0..n {
                a.set(k, j, field.mul(a.get(k, j), s));
                inv.set(k, j, field.mul(inv.get(k, j), s));
            }
            for i in (0..n).filter(|&i| i != k) {
                let f = a.get(i, k);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, field.sub(a.get(i, j), field.mul(f, a.get(k, j))));
                    inv.set(i, j, field.sub(inv.get(i, j), field.mul(f, inv.get(k, j))));
                }
            }
        }
        Some(inv)
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self, field: &FieldCtx) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, rank);
            let s = field.inv(a.get(rank, col)).unwrap();
            for i in rank + 1..self.rows {
                let f = field.mul(a.get(i, col), s);
                for j in col..self.cols {
                    a.set(i, j, field.sub(a.get(i, j), field.mul(f, a.get(rank, j))));
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use itertools::Itertools;

    /// Leibniz expansion: the independent oracle for `det`.
    fn leibniz(field: &FieldCtx, m: &Matrix) -> FieldElem {
        let n = m.rows();
        let mut acc = field.zero();
        for perm in (0..n).permutations(n) {
            let inversions = (0..n)
                .tuple_combinations()
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let term = (0..n).fold(field.one(), |t, i| field.mul(t, m.get(i, perm[i])));
            acc = if inversions % 2 == 0 {
                field.add(acc, term)
            } else {
                field.sub(acc, term)
            };
        }
        acc
    }

    #[test]
    fn bareiss_matches_leibniz() {
        for (p, m) in [(2, 3), (3, 2), (5, 1), (7, 1)] {
            let f = make_field(p, m, None).unwrap();
            let q = f.order() as u64;
            for n in 1..=4usize {
                for seed in 0..40u64 {
                    let mat = Matrix::from_fn(n, n, |i, j| {
                        let h = (seed * 2654435761 + (i * 7 + j * 13) as u64 * 40503) % 1000003;
                        // sprinkle zeros so pivot search is exercised
                        if h % 5 == 0 {
                            f.zero()
                        } else {
                            f.element((h % q) as u32)
                        }
                    });
                    assert_eq!(mat.det(&f), leibniz(&f, &mat), "{p}^{m} n={n} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn inverse_and_rank() {
        let f = make_field(3, 2, None).unwrap();
        let m = Matrix::from_fn(3, 3, |i, j| f.element(((i * 3 + j * j + 1) % 9) as u32));
        let det = m.det(&f);
        match m.inverse(&f) {
            Some(inv) => {
                assert!(!det.is_zero());
                assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 3));
                assert_eq!(m.rank(&f), 3);
            }
            None => {
                assert!(det.is_zero());
                assert!(m.rank(&f) < 3);
            }
        }
        let singular = Matrix::from_fn(2, 2, |_, j| f.element(j as u32 + 1));
        assert!(singular.inverse(&f).is_none());
        assert_eq!(singular.rank(&f), 1);
    }

    #[test]
    fn cofactor_expansion() {
        let f = make_field(2, 3, None).unwrap();
        let m = Matrix::from_fn(3, 3, |i, j| f.element(((i * 5 + j * 3 + 2) % 8) as u32));
        let by_col0 = (0..3).fold(f.zero(), |acc, i| {
            f.add(acc, f.mul(m.get(i, 0), m.cofactor(&f, i, 0)))
        });
        assert_eq!(by_col0, m.det(&f));
    }
}
