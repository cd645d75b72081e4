//! Tensor-product structure on top of [`Matrix`].
//!
//! Subsystem `0` is always the leftmost Kronecker factor, so for dims
//! `[d0, d1, .., dn]` the flat index of the digits `(i0, i1, .., in)` is
//! `((i0 * d1 + i1) * d2 + ..) * dn + in`.

use num_complex::Complex;
use num_traits::Zero;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Which factor of a bipartite system an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "a" | "A" => Ok(Side::A),
            "b" | "B" => Ok(Side::B),
            other => Err(format!("unknown side `{other}` (expected a or b)")),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: RealScalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (p, q) = (b.rows(), b.cols());
    Matrix::from_fn(a.rows() * p, a.cols() * q, |r, c| a[(r / p, c / q)] * b[(r % p, c % q)])
}

/// Kronecker product of kets.
pub fn kron_vec<T: RealScalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn check_dims<T: RealScalar>(m: &Matrix<T>, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total || dims.is_empty() {
        return Err(Error::InvalidShape(format!(
            "{}x{} matrix does not factor as {:?}",
            m.rows(),
            m.cols(),
            dims
        )));
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat offsets of every multi-index over `subsystems` (in order).
fn offsets(dims: &[usize], strides: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &s in subsystems {
        out = out
            .iter()
            .flat_map(|&base| (0..dims[s]).map(move |i| base + i * strides[s]))
            .collect();
    }
    out
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept subsystems appear in ascending order in the result.
pub fn partial_trace<T: RealScalar>(m: &Matrix<T>, dims: &[usize], keep: &[usize]) -> Result<Matrix<T>> {
    check_dims(m, dims)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidShape(format!(
            "keep set {keep:?} invalid for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();
    let st = strides(dims);
    let ko = offsets(dims, &st, &kept);
    let to = offsets(dims, &st, &traced);
    let n = ko.len();
    Ok(Matrix::from_fn(n, n, |i, j| {
        to.iter()
            .map(|&t| m[(ko[i] + t, ko[j] + t)])
            .fold(Complex::zero(), |acc, z| acc + z)
    }))
}

/// Reorders tensor factors: factor `k` of the result is factor `perm[k]`
/// of the input.
pub fn permute_subsystems<T: RealScalar>(m: &Matrix<T>, dims: &[usize], perm: &[usize]) -> Result<Matrix<T>> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len()
        || perm
            .iter()
            .any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidShape(format!("{perm:?} is not a permutation")));
    }
    let st = strides(dims);
    // offsets enumerates in the order of `perm`, i.e. the new flat order.
    let map = offsets(dims, &st, perm);
    let n = map.len();
    Ok(Matrix::from_fn(n, n, |i, j| m[(map[i], map[j])]))
}

/// Transposes the chosen factor of a bipartite operator.
pub fn partial_transpose<T: RealScalar>(m: &Matrix<T>, dims: [usize; 2], side: Side) -> Result<Matrix<T>> {
    check_dims(m, &dims)?;
    let db = dims[1];
    Ok(Matrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (ia, ib) = (r / db, r % db);
        let (ja, jb) = (c / db, c % db);
        match side {
            Side::A => m[(ja * db + ib, ia * db + jb)],
            Side::B => m[(ia * db + jb, ja * db + ib)],
        }
    }))
}
