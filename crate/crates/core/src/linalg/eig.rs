//! Hermitian eigensolver (cyclic complex Jacobi) and the decompositions
//! built on it.

use num_complex::Complex;
use num_traits::Zero;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::RealScalar;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigResult<T: RealScalar> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: Matrix<T>,
}

impl<T: RealScalar> EigResult<T> {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.vectors.conjugate(&Matrix::diag_real(&self.values))
    }

    /// Applies `f` to the spectrum: `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> Matrix<T> {
        let n = self.values.len();
        let mut d = Matrix::zeros(n, n);
        for (i, &l) in self.values.iter().enumerate() {
            d[(i, i)] = f(l);
        }
        self.vectors.conjugate(&d)
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
///
/// Cyclic Jacobi: each pivot `(p, q)` is annihilated by the unitary
/// `diag(1, e^{-iφ}) · R(θ)` where `φ = arg h_pq`, which first makes the
/// pivot real and then applies the classic real rotation. Sweeps stop once
/// the off-diagonal Frobenius norm is below `T::jacobi_tol()` times the
/// matrix norm.
pub fn hermitian_eig<T: RealScalar>(h: &Matrix<T>) -> Result<EigResult<T>> {
    if !h.is_square() {
        return Err(Error::InvalidShape(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = T::one().max(h.max_abs());
    let dev = h.hermiticity_deviation();
    if dev > T::check_tol() * scale {
        return Err(Error::NotHermitian(dev.to_f64().unwrap_or(f64::INFINITY)));
    }

    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(h[(i, i)].re, T::zero())
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * T::lit(0.5)
        }
    });
    let mut v = Matrix::identity(n);
    let norm = a.frobenius_norm();
    let threshold = T::jacobi_tol() * norm;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigResult { values, vectors })
}

fn off_diagonal_norm<T: RealScalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<T: RealScalar>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let h = a[(p, q)];
    let mag = h.norm();
    if mag == T::zero() {
        return;
    }
    let phase = h / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (T::lit(2.0) * mag);
    let sign = if tau >= T::zero() { T::one() } else { -T::one() };
    let t = sign / (tau.abs() + (T::one() + tau * tau).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let n = a.rows();
    let cphase = phase.conj();

    // a <- a G, v <- v G
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - cphase * akq * s;
        a[(k, q)] = akp * s + cphase * akq * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - cphase * vkq * s;
        v[(k, q)] = vkp * s + cphase * vkq * c;
    }
    // a <- G† a
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - phase * aqk * s;
        a[(q, k)] = apk * s + phase * aqk * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
}

/// Singular value decomposition `M = U · diag(s) · V†` (thin).
#[derive(Clone, Debug)]
pub struct Svd<T: RealScalar> {
    /// Descending, nonnegative.
    pub values: Vec<T>,
    /// Left singular vectors as columns; zero columns for vanishing values.
    pub u: Matrix<T>,
    /// Right singular vectors as columns.
    pub v: Matrix<T>,
}

/// SVD through the eigenvectors of `M†M`.
///
/// Singular values are taken as `‖M v_k‖` rather than `sqrt(λ_k)`, which
/// keeps values of null directions near `ε‖M‖` instead of `sqrt(ε)‖M‖`.
pub fn svd<T: RealScalar>(m: &Matrix<T>) -> Svd<T> {
    let gram = m.adjoint().matmul(m);
    let eig = hermitian_eig(&gram).expect("gram matrix is Hermitian");
    let k = m.cols();
    #[allow(clippy::type_complexity)]
    let mut triples: Vec<(T, Vec<Complex<T>>, Vec<Complex<T>>)> = (0..k)
        .map(|j| {
            let vj = eig.vectors.column(j);
            let mv = m.mul_vec(&vj);
            let s = super::vec_norm(&mv);
            (s, mv, vj)
        })
        .collect();
    triples.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let floor = T::epsilon() * T::lit(16.0) * triples.first().map_or(T::zero(), |t| t.0);
    let values: Vec<T> = triples.iter().map(|t| t.0).collect();
    let ucols: Vec<Vec<Complex<T>>> = triples
        .iter()
        .map(|(s, mv, _)| {
            if *s > floor {
                mv.iter().map(|z| *z / *s).collect()
            } else {
                vec![Complex::zero(); m.rows()]
            }
        })
        .collect();
    let vcols: Vec<Vec<Complex<T>>> = triples.into_iter().map(|t| t.2).collect();
    Svd {
        values,
        u: Matrix::from_columns(&ucols).unwrap_or_else(|_| Matrix::zeros(m.rows(), 0)),
        v: Matrix::from_columns(&vcols).unwrap_or_else(|_| Matrix::zeros(k, 0)),
    }
}

/// Singular values in descending order.
pub fn svd_values<T: RealScalar>(m: &Matrix<T>) -> Vec<T> {
    svd(m).values
}

/// Number of values above `rel_tol · max(values)`.
pub fn numerical_rank<T: RealScalar>(values: &[T], rel_tol: T) -> usize {
    let max = values.iter().copied().fold(T::zero(), T::max);
    if max <= T::zero() {
        return 0;
    }
    values.iter().filter(|&&v| v > rel_tol * max).count()
}

/// `exp(i·t·H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_i_hermitian<T: RealScalar>(h: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    let eig = hermitian_eig(h)?;
    Ok(eig.map_spectrum(|l| Complex::new(T::zero(), t * l).exp()))
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn sqrt_psd<T: RealScalar>(h: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = hermitian_eig(h)?;
    Ok(eig.map_spectrum(|l| Complex::new(l.max(T::zero()).sqrt(), T::zero())))
}
