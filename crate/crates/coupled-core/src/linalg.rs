//! Small dense matrices with just enough linear algebra for the information
//! recursion: products, inverses, Cholesky log-determinants and symmetric
//! eigenvalues via cyclic Jacobi sweeps. State dimensions in this problem
//! are tiny (single digits), so direct O(n^3) routines are the right tool.

use crate::error::{Error, Result};
use crate::scalar::{scalar, Scalar};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Instance("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// `diag * I_n`.
    pub fn scaled_identity(n: usize, diag: T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { diag } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { T::one() } else { T::zero() })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.set(i, j, out.get(i, j) + a * rhs.get(k, j));
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = *a - *b;
        }
        out
    }

    /// Rank-one update `self += w * v vᵀ`.
    pub fn add_outer(&mut self, v: &[T], w: T) {
        assert_eq!(self.rows, v.len());
        assert_eq!(self.cols, v.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                self.set(i, j, self.get(i, j) + w * v[i] * v[j]);
            }
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let half = scalar::<T>(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i)) * half
        })
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` when a pivot
    /// degenerates relative to the matrix scale.
    pub fn try_inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let tiny = self.max_abs().max(T::one()) * T::epsilon() * scalar::<T>(8.0);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a.get(r1, col)
                        .abs()
                        .partial_cmp(&a.get(r2, col).abs())
                        .expect("pivot comparison")
                })
                .unwrap();
            if a.get(pivot_row, col).abs() <= tiny {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot_row, j));
                    a.set(col, j, y);
                    a.set(pivot_row, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(pivot_row, j));
                    inv.set(col, j, y);
                    inv.set(pivot_row, j, x);
                }
            }
            let pivot = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / pivot);
                inv.set(col, j, inv.get(col, j) / pivot);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a.get(row, col);
                if factor == T::zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(row, j, a.get(row, j) - factor * a.get(col, j));
                    inv.set(row, j, inv.get(row, j) - factor * inv.get(col, j));
                }
            }
        }
        Some(inv)
    }

    /// Log-determinant of a symmetric positive-definite matrix through its
    /// Cholesky factor. Fails when a pivot is non-positive.
    pub fn cholesky_logdet(&self) -> Result<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        let mut logdet = T::zero();
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d = d - l.get(j, k) * l.get(j, k);
            }
            if d <= T::zero() {
                return Err(Error::NotPositiveDefinite);
            }
            let diag = d.sqrt();
            l.set(j, j, diag);
            logdet = logdet + diag.ln();
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s = s - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / diag);
            }
        }
        Ok(logdet + logdet)
    }

    /// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
    /// rotations.
    pub fn sym_eigenvalues(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.symmetrized();
        let tol = T::epsilon() * scalar::<T>(16.0) * a.max_abs().max(T::one());
        for _sweep in 0..64 {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a.get(p, q).abs());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() <= tol {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (scalar::<T>(2.0) * apq);
                    let t = {
                        let sign = if theta < T::zero() {
                            -T::one()
                        } else {
                            T::one()
                        };
                        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        let mut eigs: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalue comparison"));
        eigs
    }

    pub fn min_sym_eigenvalue(&self) -> T {
        self.sym_eigenvalues()
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Positive semidefinite within `tol`: smallest eigenvalue >= -tol.
    pub fn is_psd(&self, tol: T) -> bool {
        self.min_sym_eigenvalue() >= -tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<f64>>) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn matmul_and_transpose() {
        let a = m(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = m(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(a.matmul(&b), m(vec![vec![2.0, 1.0], vec![4.0, 3.0]]));
        assert_eq!(a.transpose(), m(vec![vec![1.0, 3.0], vec![2.0, 4.0]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ]);
        let inv = a.try_inverse().unwrap();
        let prod = a.matmul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - want).abs() < 1e-12);
            }
        }
        let singular = m(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(singular.try_inverse().is_none());
    }

    #[test]
    fn cholesky_logdet_matches_closed_form() {
        // det [[a, b], [b, c]] = a c - b^2
        let a = m(vec![vec![4.0, 1.0], vec![1.0, 3.0]]);
        let want = (4.0f64 * 3.0 - 1.0).ln();
        assert!((a.cholesky_logdet().unwrap() - want).abs() < 1e-12);

        let not_pd = m(vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert_eq!(not_pd.cholesky_logdet(), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn jacobi_eigenvalues() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let a = m(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let eig = a.sym_eigenvalues();
        assert!((eig[0] - 1.0).abs() < 1e-10);
        assert!((eig[1] - 3.0).abs() < 1e-10);

        let diag = m(vec![
            vec![5.0, 0.0, 0.0],
            vec![0.0, -2.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ]);
        let eig = diag.sym_eigenvalues();
        assert_eq!(eig.len(), 3);
        assert!((eig[0] + 2.0).abs() < 1e-12);
        assert!((eig[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn psd_checks() {
        let id: Matrix<f64> = Matrix::identity(3);
        assert!(id.is_psd(1e-9));
        let neg = m(vec![vec![1.0, 0.0], vec![0.0, -1e-3]]);
        assert!(!neg.is_psd(1e-9));
        // borderline: exactly singular is PSD within tolerance
        let sing = m(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(sing.is_psd(1e-9));
    }

    #[test]
    fn rank_one_update() {
        let mut a: Matrix<f64> = Matrix::zeros(2, 2);
        a.add_outer(&[1.0, 2.0], 3.0);
        assert_eq!(a, m(vec![vec![3.0, 6.0], vec![6.0, 12.0]]));
    }

    #[test]
    fn works_at_f32() {
        let a: Matrix<f32> = Matrix::from_rows(vec![vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let want = (4.0f32 * 3.0 - 1.0).ln();
        assert!((a.cholesky_logdet().unwrap() - want).abs() < 1e-5);
    }
}
