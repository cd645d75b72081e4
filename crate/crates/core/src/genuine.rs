//! Correlation matrix of a bipartite state in local Hermitian operator
//! bases, `ρ = Σ_{mn} r_mn A_m ⊗ B_n`, and the rank criterion `L_R > d_min`
//! for correlations that cannot be created locally from classical states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, numerical_rank, svd, Matrix};
use crate::states::DensityMatrix;
use crate::{CMatrix, C64};

/// Relative singular-value cutoff for `L_R`.
pub const RANK_TOL: f64 = 1e-8;

/// Trace-orthonormal Hermitian basis of `d×d` matrices.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    pub d: usize,
    pub ops: Vec<CMatrix>,
}

/// `I/√d`, then the symmetric, antisymmetric and diagonal generalized
/// Gell-Mann matrices, all normalized so `tr(A_m A_n) = δ_mn`. For `d = 2`
/// this is `{I, σ_x, σ_y, σ_z}/√2`.
pub fn hermitian_basis(d: usize) -> Result<HermitianBasis> {
    if d == 0 {
        return Err(Error::InvalidShape("dimension must be positive".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ops = vec![CMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt())];
    let unit = |j: usize, k: usize, z: C64| {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = z;
        m
    };
    for j in 0..d {
        for k in j + 1..d {
            ops.push(&unit(j, k, C64::new(s, 0.0)) + &unit(k, j, C64::new(s, 0.0)));
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            ops.push(&unit(j, k, C64::new(0.0, -s)) + &unit(k, j, C64::new(0.0, s)));
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|m| match m.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        ops.push(CMatrix::diag_real(&diag));
    }
    Ok(HermitianBasis { d, ops })
}

/// `tr(x y)` without forming the product.
fn trace_product(x: &CMatrix, y: &CMatrix) -> C64 {
    let n = x.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

impl HermitianBasis {
    /// `c_m = tr(A_m h)`.
    pub fn coefficients(&self, h: &CMatrix) -> Vec<f64> {
        self.ops.iter().map(|a| trace_product(a, h).re).collect()
    }

    pub fn reconstruct(&self, coeffs: &[f64]) -> CMatrix {
        self.ops
            .iter()
            .zip(coeffs)
            .fold(CMatrix::zeros(self.d, self.d), |acc, (a, &c)| &acc + &a.scale_real(c))
    }

    /// Largest deviation of `tr(A_m A_n)` from `δ_mn`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (m, a) in self.ops.iter().enumerate() {
            for (n, b) in self.ops.iter().enumerate() {
                let want = if m == n { 1.0 } else { 0.0 };
                dev = dev.max((trace_product(a, b) - C64::new(want, 0.0)).norm());
            }
        }
        dev
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub d_a: usize,
    pub d_b: usize,
    /// `r_mn`, a `d_a² × d_b²` real matrix.
    pub entries: Vec<Vec<f64>>,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

impl CorrelationMatrix {
    fn as_matrix(&self) -> CMatrix {
        let rows = self.entries.len();
        let cols = self.entries[0].len();
        Matrix::from_fn(rows, cols, |m, n| C64::new(self.entries[m][n], 0.0))
    }

    /// `(s_l, F_l, G_l)` with `ρ = Σ_l s_l F_l ⊗ G_l`, for the nonzero
    /// singular values.
    pub fn operator_pairs(&self) -> Result<Vec<(f64, CMatrix, CMatrix)>> {
        let ba = hermitian_basis(self.d_a)?;
        let bb = hermitian_basis(self.d_b)?;
        let dec = svd(&self.as_matrix());
        Ok((0..self.rank)
            .map(|l| {
                let f: Vec<f64> = (0..ba.ops.len()).map(|m| dec.u[(m, l)].re).collect();
                let g: Vec<f64> = (0..bb.ops.len()).map(|n| dec.v[(n, l)].re).collect();
                (dec.values[l], ba.reconstruct(&f), bb.reconstruct(&g))
            })
            .collect())
    }

    /// `Σ_mn r_mn A_m ⊗ B_n`.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let ba = hermitian_basis(self.d_a)?;
        let bb = hermitian_basis(self.d_b)?;
        let n = self.d_a * self.d_b;
        let mut acc = CMatrix::zeros(n, n);
        for (m, a) in ba.ops.iter().enumerate() {
            for (k, b) in bb.ops.iter().enumerate() {
                let r = self.entries[m][k];
                if r != 0.0 {
                    acc = &acc + &kron(a, b).scale_real(r);
                }
            }
        }
        Ok(acc)
    }
}

/// `r_mn = tr[ρ (A_m ⊗ B_n)]` with singular values and rank.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix> {
    let [d_a, d_b] = rho.bipartite_dims()?;
    let ba = hermitian_basis(d_a)?;
    let bb = hermitian_basis(d_b)?;
    // r_mn = Σ tr_b[ tr_a((A_m ⊗ I) ρ) B_n ]; contract a first.
    let mat = rho.matrix();
    let entries: Vec<Vec<f64>> = ba
        .ops
        .iter()
        .map(|a| {
            let reduced = Matrix::from_fn(d_b, d_b, |r, c| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..d_a {
                    for j in 0..d_a {
                        acc += a[(i, j)] * mat[(j * d_b + r, i * d_b + c)];
                    }
                }
                acc
            });
            bb.coefficients(&reduced)
        })
        .collect();
    let cm = CorrelationMatrix {
        d_a,
        d_b,
        entries,
        singular_values: vec![],
        rank: 0,
    };
    let singular_values = crate::linalg::svd_values(&cm.as_matrix());
    let rank = numerical_rank(&singular_values, RANK_TOL);
    Ok(CorrelationMatrix {
        singular_values,
        rank,
        ..cm
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenuinenessReport {
    pub genuine: bool,
    pub rank: usize,
    pub d_min: usize,
    pub singular_values: Vec<f64>,
}

/// `L_R > min(d_a, d_b)`.
pub fn is_genuinely_quantum(rho: &DensityMatrix) -> Result<GenuinenessReport> {
    let cm = correlation_matrix(rho)?;
    let d_min = cm.d_a.min(cm.d_b);
    Ok(GenuinenessReport {
        genuine: cm.rank > d_min,
        rank: cm.rank,
        d_min,
        singular_values: cm.singular_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::liluo_extend;
    use crate::linalg::random_unitary;
    use crate::mdss::{rho_tilde_max_d, sic_from_fiducial, sic_tetrahedron};
    use crate::states::{family_state, haar_state, make_density, pauli, z_set, Family, ProductEnsemble};

    fn random_hermitian(d: usize, seed: u64) -> CMatrix {
        let g = crate::linalg::ginibre::<f64, _>(&mut crate::linalg::seeded_rng(seed), d, d);
        (&g + &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn qubit_basis_is_scaled_paulis() {
        let b = hermitian_basis(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (k, op) in b.ops.iter().enumerate() {
            assert!(op.max_abs_diff(&pauli(k).scale_real(s)) < 1e-15, "{k}");
        }
    }

    #[test]
    fn bases_are_orthonormal_and_complete() {
        for d in 1..=5 {
            let b = hermitian_basis(d).unwrap();
            assert_eq!(b.ops.len(), d * d);
            assert!(b.orthonormality_deviation() < 1e-12);
            assert!(b.ops.iter().all(|a| a.hermiticity_deviation() == 0.0));
            for seed in 0..5 {
                let h = random_hermitian(d, seed);
                assert!(b.reconstruct(&b.coefficients(&h)).max_abs_diff(&h) < 1e-10);
            }
        }
    }

    /// Direct `tr[ρ (A ⊗ B)]` with full Kronecker products.
    fn entries_oracle(rho: &DensityMatrix) -> Vec<Vec<f64>> {
        let [da, db] = rho.bipartite_dims().unwrap();
        let ba = hermitian_basis(da).unwrap();
        let bb = hermitian_basis(db).unwrap();
        ba.ops
            .iter()
            .map(|a| {
                bb.ops
                    .iter()
                    .map(|b| rho.matrix().matmul(&kron(a, b)).trace().re)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn entries_match_oracle_and_reconstruct() {
        for (seed, dims) in [(1, [2, 2]), (2, [2, 3]), (3, [3, 2]), (4, [3, 3])] {
            let d = dims[0] * dims[1];
            let rho = haar_state(d, d, seed).unwrap().with_dims(dims.to_vec()).unwrap();
            let cm = correlation_matrix(&rho).unwrap();
            let oracle = entries_oracle(&rho);
            for (row, orow) in cm.entries.iter().zip(&oracle) {
                for (x, y) in row.iter().zip(orow) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
            assert!(cm.reconstruct().unwrap().max_abs_diff(rho.matrix()) < 1e-10);
            let pairs = cm.operator_pairs().unwrap();
            let sum = pairs
                .iter()
                .fold(CMatrix::zeros(d, d), |acc, (s, f, g)| &acc + &kron(f, g).scale_real(*s));
            assert!(sum.max_abs_diff(rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn product_state_has_rank_one() {
        let a = random_unitary::<f64>(2, 1).column(0);
        let b = random_unitary::<f64>(3, 2).column(0);
        let rho = ProductEnsemble::new(vec![1.0], vec![a], vec![b]).unwrap().to_state();
        assert_eq!(correlation_matrix(&rho).unwrap().rank, 1);
    }

    #[test]
    fn reference_states() {
        let tilde = is_genuinely_quantum(&family_state(Family::TildeMax, None).unwrap()).unwrap();
        assert_eq!((tilde.rank, tilde.d_min, tilde.genuine), (4, 2, true));
        let l2 = is_genuinely_quantum(&family_state(Family::MaxL2, None).unwrap()).unwrap();
        assert_eq!((l2.rank, l2.genuine), (2, false));
    }

    #[test]
    fn sic_states_have_full_rank() {
        let r2 = correlation_matrix(&rho_tilde_max_d(&sic_tetrahedron()).unwrap()).unwrap();
        assert_eq!(r2.rank, 4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let fid = vec![C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)];
        let sic3 = sic_from_fiducial(3, &fid).unwrap();
        let r3 = is_genuinely_quantum(&rho_tilde_max_d(&sic3).unwrap()).unwrap();
        assert_eq!(r3.rank, 9);
        assert!(r3.genuine);
    }

    /// `Σ_i p_i |i><i| ⊗ ρ_i` with a random local basis on the classical
    /// side.
    fn random_cq(d_cl: usize, d_q: usize, seed: u64) -> DensityMatrix {
        let u = random_unitary::<f64>(d_cl, seed);
        let n = d_cl * d_q;
        let mut acc = CMatrix::zeros(n, n);
        for i in 0..d_cl {
            let rho_i = haar_state(d_q, d_q, seed * 31 + i as u64).unwrap();
            acc = &acc + &kron(&CMatrix::outer(&u.column(i)), rho_i.matrix()).scale_real(1.0 / d_cl as f64);
        }
        make_density(acc, vec![d_cl, d_q]).unwrap()
    }

    #[test]
    fn cq_rank_is_bounded_by_the_classical_side() {
        for seed in 0..10 {
            for (dc, dq) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
                let r = correlation_matrix(&random_cq(dc, dq, seed)).unwrap().rank;
                assert!(r <= dc.min(dq * dq), "({dc},{dq}): {r}");
                if dc <= dq {
                    assert!(r <= dc.min(dq));
                }
            }
        }
    }

    #[test]
    fn extension_rank_exceeds_quantum_side_dimension() {
        // Across the (ā a | b) cut the classical side is 8-dimensional, so
        // the bound min(d_A, d_b) = 2 does not apply; the rank equals the
        // dimension of span{ρ^b_k}, which is 4 for the tetrahedron.
        let ext = liluo_extend(&z_set());
        let flat = ext.state.clone().with_dims(vec![8, 2]).unwrap();
        assert_eq!(correlation_matrix(&flat).unwrap().rank, 4);
    }
}
