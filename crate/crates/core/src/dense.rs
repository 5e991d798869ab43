//! Small dense matrices for classical oracles and problem construction.
//!
//! Sizes stay at or below 256x256 (eight qubits), so textbook O(n^3)
//! algorithms with partial pivoting are plenty; no external linear algebra
//! dependency is warranted at this scale.

use std::ops::{AddAssign, Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Scalar};

/// Dense row-major matrix over element type `E`.
///
/// `E` is a real scalar for problem matrices and `Complex<T>` for operator
/// oracles. Only real matrices get factorization routines; the solver never
/// needs a complex inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy + Zero> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::SizeMismatch {
                    context: "matrix row length",
                    left: row.len(),
                    right: n_cols,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn map<F2, F>(&self, f: F) -> Matrix<F2>
    where
        F2: Copy + Zero,
        F: Fn(E) -> F2,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f(e)).collect(),
        }
    }
}

impl<E> Matrix<E>
where
    E: Copy + Zero + One + AddAssign + Mul<Output = E>,
{
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                context: "matmul inner dimension",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[E]) -> Result<Vec<E>> {
        if self.cols != v.len() {
            return Err(Error::SizeMismatch {
                context: "matvec dimension",
                left: self.cols,
                right: v.len(),
            });
        }
        let mut out = vec![E::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = E::zero();
            for c in 0..self.cols {
                acc += self[(r, c)] * v[c];
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch {
                context: "matrix add shape",
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: E) -> Self {
        self.map(|e| e * factor)
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    fn index(&self, (r, c): (usize, usize)) -> &E {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut E {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn to_complex(&self) -> Matrix<Complex<T>> {
        self.map(|e| Complex::new(e, T::zero()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    ///
    /// Errors with [`Error::Singular`] when the best pivot drops below 1e-12;
    /// matrices here are O(1)-scaled so an absolute threshold is adequate.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::SizeMismatch {
                context: "solve requires square matrix",
                left: self.rows,
                right: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(Error::SizeMismatch {
                context: "solve right-hand side",
                left: b.len(),
                right: self.rows,
            });
        }
        let n = self.rows;
        let tol = T::from_f64_lossy(1e-12);
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a[col * n + col].abs();
            for r in col + 1..n {
                let mag = a[r * n + col].abs();
                if mag > pivot_mag {
                    pivot_row = r;
                    pivot_mag = mag;
                }
            }
            if pivot_mag < tol {
                return Err(Error::Singular {
                    pivot: pivot_mag.to_f64().unwrap_or(0.0),
                });
            }
            if pivot_row != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot_row * n + c);
                }
                x.swap(col, pivot_row);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor == T::zero() {
                    continue;
                }
                for c in col..n {
                    let above = a[col * n + c];
                    a[r * n + c] = a[r * n + c] - factor * above;
                }
                x[r] = x[r] - factor * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut acc = x[col];
            for c in col + 1..n {
                acc = acc - a[col * n + c] * x[c];
            }
            x[col] = acc / a[col * n + col];
        }
        Ok(x)
    }

    /// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
    ///
    /// Pre: the matrix is symmetric (checked to 1e-10 scale). Returned values
    /// are unsorted.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::SizeMismatch {
                context: "eigenvalues require square matrix",
                left: self.rows,
                right: self.cols,
            });
        }
        let n = self.rows;
        let fro = self
            .data
            .iter()
            .map(|&e| e * e)
            .fold(T::zero(), |acc, e| acc + e)
            .sqrt();
        let sym_tol = T::from_f64_lossy(1e-10) * T::max(T::one(), fro);
        for r in 0..n {
            for c in r + 1..n {
                if (self[(r, c)] - self[(c, r)]).abs() > sym_tol {
                    return Err(Error::InvalidArgument(
                        "eigenvalue routine requires a symmetric matrix".into(),
                    ));
                }
            }
        }
        let mut a = self.data.clone();
        let off_tol = T::epsilon() * T::max(T::one(), fro);
        for _sweep in 0..100 {
            let mut off = T::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off = off + a[p * n + q] * a[p * n + q];
                }
            }
            if off.sqrt() <= off_tol {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq.abs() <= off_tol * T::from_f64_lossy(1e-3) {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (apq + apq);
                    let t = {
                        let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                        if theta >= T::zero() {
                            T::one() / denom
                        } else {
                            -T::one() / denom
                        }
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        Ok((0..n).map(|i| a[i * n + i]).collect())
    }

    /// Singular values, descending, via eigenvalues of `A^T A`.
    pub fn singular_values(&self) -> Result<Vec<T>> {
        let gram = self.transpose().matmul(self)?;
        let mut sv: Vec<T> = gram
            .symmetric_eigenvalues()?
            .into_iter()
            .map(|e| e.max(T::zero()).sqrt())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        Ok(sv)
    }
}

impl<T: Scalar> Matrix<Complex<T>> {
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn max_abs_diff_complex(&self, other: &Self) -> T {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}
