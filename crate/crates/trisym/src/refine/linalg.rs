//! Small dense-matrix helpers for the normal-equation solves.

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Real> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn at(&self, i: usize, j: usize) -> R {
        self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut R {
        &mut self.data[i * self.cols + j]
    }

    /// AᵀA, a cols×cols symmetric matrix.
    pub fn gram(&self) -> Matrix<R> {
        let n = self.cols;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = R::zero();
                for k in 0..self.rows {
                    s = s + self.at(k, i) * self.at(k, j);
                }
                *g.at_mut(i, j) = s;
                *g.at_mut(j, i) = s;
            }
        }
        g
    }

    /// Aᵀv.
    pub fn transpose_times(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![R::zero(); self.cols];
        for (k, vk) in v.iter().enumerate() {
            for j in 0..self.cols {
                out[j] = out[j] + self.at(k, j) * *vk;
            }
        }
        out
    }

    /// Solves A·x = −b for symmetric positive definite A by Cholesky
    /// factorization; `None` when a pivot is not positive.
    pub fn cholesky_solve_neg(&self, b: &[R]) -> Option<Vec<R>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.at(i, j);
                for k in 0..j {
                    s = s - l.at(i, k) * l.at(j, k);
                }
                if i == j {
                    if s <= R::zero() {
                        return None;
                    }
                    *l.at_mut(i, i) = s.sqrt();
                } else {
                    *l.at_mut(i, j) = s / l.at(j, j);
                }
            }
        }
        // Forward substitution L·y = −b, then backward Lᵀ·x = y.
        let mut y = vec![R::zero(); n];
        for i in 0..n {
            let mut s = -b[i];
            for k in 0..i {
                s = s - l.at(i, k) * y[k];
            }
            y[i] = s / l.at(i, i);
        }
        let mut x = vec![R::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - l.at(k, i) * x[k];
            }
            x[i] = s / l.at(i, i);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_a_known_spd_system() {
        // A = [[4,2],[2,3]], b = [8, 7]; A·x = −b has x = (−1, −5/4)·…
        let mut a = Matrix::zeros(2, 2);
        *a.at_mut(0, 0) = 4.0;
        *a.at_mut(0, 1) = 2.0;
        *a.at_mut(1, 0) = 2.0;
        *a.at_mut(1, 1) = 3.0;
        let x = a.cholesky_solve_neg(&[8.0, 7.0]).unwrap();
        // Solve manually: 4x₀+2x₁=−8, 2x₀+3x₁=−7 → x₀=−5/4, x₁=−3/2.
        assert!((x[0] + 1.25).abs() < 1e-14);
        assert!((x[1] + 1.5).abs() < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite_input() {
        let mut a = Matrix::zeros(2, 2);
        *a.at_mut(0, 0) = 1.0;
        *a.at_mut(0, 1) = 2.0;
        *a.at_mut(1, 0) = 2.0;
        *a.at_mut(1, 1) = 1.0;
        assert!(a.cholesky_solve_neg(&[1.0, 1.0]).is_none());
    }

    #[test]
    fn gram_and_transpose_product() {
        let mut a = Matrix::zeros(3, 2);
        for (idx, v) in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0].into_iter().enumerate() {
            *a.at_mut(idx / 2, idx % 2) = v;
        }
        let g = a.gram();
        assert_eq!(g.at(0, 0), 35.0);
        assert_eq!(g.at(0, 1), 44.0);
        assert_eq!(g.at(1, 1), 56.0);
        let v = a.transpose_times(&[1.0, 1.0, 1.0]);
        assert_eq!(v, vec![9.0, 12.0]);
    }
}
