use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Dense complex matrix stored row-major.
///
/// Serializes as `{"rows":n,"cols":m,"re":[[..]],"im":[[..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixEnvelope<T>", into = "MatrixEnvelope<T>", bound = "T: RealScalar")]
pub struct Matrix<T: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Wire form of [`Matrix`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: RealScalar")]
pub struct MatrixEnvelope<T: RealScalar> {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<T>>,
    pub im: Vec<Vec<T>>,
}

impl<T: RealScalar> TryFrom<MatrixEnvelope<T>> for Matrix<T> {
    type Error = Error;

    fn try_from(env: MatrixEnvelope<T>) -> Result<Self> {
        if env.re.len() != env.rows || env.im.len() != env.rows {
            return Err(Error::InvalidShape(format!(
                "expected {} rows in re/im, got {}/{}",
                env.rows,
                env.re.len(),
                env.im.len()
            )));
        }
        let mut data = Vec::with_capacity(env.rows * env.cols);
        for (re_row, im_row) in env.re.iter().zip(&env.im) {
            if re_row.len() != env.cols || im_row.len() != env.cols {
                return Err(Error::InvalidShape(format!("expected {} columns per row", env.cols)));
            }
            data.extend(re_row.iter().zip(im_row).map(|(&r, &i)| Complex::new(r, i)));
        }
        let m = Matrix {
            rows: env.rows,
            cols: env.cols,
            data,
        };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }
}

impl<T: RealScalar> From<Matrix<T>> for MatrixEnvelope<T> {
    fn from(m: Matrix<T>) -> Self {
        let re = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m[(i, j)].im).collect())
            .collect();
        MatrixEnvelope {
            rows: m.rows,
            cols: m.cols,
            re,
            im,
        }
    }
}

impl<T: RealScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| {
            assert_eq!(rows[i].len(), c, "ragged rows");
            Complex::new(T::lit(rows[i][j]), T::zero())
        })
    }

    pub fn diag_real(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidShape("columns of unequal length".into()));
        }
        Ok(Self::from_fn(n, cols.len(), |i, j| cols[j][i]))
    }

    /// Rank-one projector `|v><v|`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `self · x · self†`.
    pub fn conjugate(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > T::check_tol() {
            return Err(Error::NotUnitary(dev.to_f64().unwrap_or(f64::INFINITY)));
        }
        Ok(())
    }

    /// Converts every entry to another scalar type.
    pub fn cast<U: RealScalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| {
                    Complex::new(
                        U::from_f64(z.re.to_f64().unwrap()).unwrap(),
                        U::from_f64(z.im.to_f64().unwrap()).unwrap(),
                    )
                })
                .collect(),
        }
    }
}

impl<T: RealScalar> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: RealScalar> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: RealScalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: RealScalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: RealScalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

/// Euclidean norm of a ket.
pub fn vec_norm<T: RealScalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `<a|b>`.
pub fn inner<T: RealScalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
