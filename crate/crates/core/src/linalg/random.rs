//! Haar-random unitaries and the random-walk proposal used by the annealer.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{expm_i_hermitian, inner, vec_norm, Matrix};
use crate::scalar::RealScalar;

/// Deterministic generator used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians (real and imaginary parts
/// each `N(0, 1/2)`).
pub fn ginibre<T: RealScalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re * s), T::lit(im * s))
    })
}

/// Q factor of a QR decomposition by modified Gram-Schmidt with one
/// re-orthogonalization pass. `R` has a positive real diagonal, so applied
/// to a Ginibre matrix this yields a Haar-distributed unitary.
///
/// Linearly dependent columns are replaced by the first standard basis
/// vector that is independent of the columns already accepted.
pub fn orthonormalize_columns<T: RealScalar>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.rows();
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(m.cols());
    let tiny = T::lit(1e-10);
    for j in 0..m.cols() {
        let mut v = m.column(j);
        let mut candidate = 0;
        loop {
            for _ in 0..2 {
                for q in &cols {
                    let proj = inner(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi = *vi - *qi * proj;
                    }
                }
            }
            let norm = vec_norm(&v);
            if norm > tiny || candidate >= n {
                let norm = if norm > T::zero() { norm } else { T::one() };
                cols.push(v.iter().map(|z| *z / norm).collect());
                break;
            }
            v = vec![Complex::zero(); n];
            v[candidate] = Complex::new(T::one(), T::zero());
            candidate += 1;
        }
    }
    Matrix::from_columns(&cols).expect("equal column lengths")
}

/// Haar-random `d×d` unitary from `seed`.
pub fn random_unitary<T: RealScalar>(d: usize, seed: u64) -> Matrix<T> {
    random_unitary_with(&mut seeded_rng(seed), d)
}

pub fn random_unitary_with<T: RealScalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Matrix<T> {
    orthonormalize_columns(&ginibre::<T, R>(rng, d, d))
}

/// Random Hermitian matrix with unit Frobenius norm.
pub fn random_unit_hermitian<T: RealScalar, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Matrix<T> {
    let g = ginibre::<T, R>(rng, d, d);
    let h = (&g + &g.adjoint()).scale_real(T::lit(0.5));
    let norm = h.frobenius_norm();
    h.scale_real(T::one() / norm)
}

/// `exp(i·eps·H)·u` with `H` a random unit-Frobenius Hermitian drawn from
/// `seed`.
pub fn unitary_step<T: RealScalar>(u: &Matrix<T>, seed: u64, eps: T) -> Matrix<T> {
    unitary_step_with(&mut seeded_rng(seed), u, eps)
}

pub fn unitary_step_with<T: RealScalar, R: Rng + ?Sized>(rng: &mut R, u: &Matrix<T>, eps: T) -> Matrix<T> {
    let h = random_unit_hermitian::<T, R>(rng, u.rows());
    let step = expm_i_hermitian(&h, eps).expect("Hermitian by construction");
    step.matmul(u)
}
