//! Validated density matrices, the named two-qubit families, Bloch-sphere
//! kets, separable product ensembles and Haar sampling of fixed-rank states.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ginibre, hermitian_eig, kron, partial_trace, partial_transpose, seeded_rng, vec_norm, Side};
use crate::{CMatrix, Ket, C64};

/// Tolerance for Hermiticity, unit trace and positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Polar angle of the tetrahedral kets, `arccos(-1/3)`.
pub fn theta_star() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// A validated density operator on `⊗_k C^{dims[k]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

/// Wire form: the matrix envelope plus a `dims` field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(flatten)]
    pub matrix: CMatrix,
    pub dims: Vec<usize>,
}

impl TryFrom<StateFile> for DensityMatrix {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        make_density(f.matrix, f.dims)
    }
}

impl From<DensityMatrix> for StateFile {
    fn from(d: DensityMatrix) -> Self {
        StateFile {
            matrix: d.mat,
            dims: d.dims,
        }
    }
}

/// Validates `mat` as a density matrix with the given factorization.
pub fn make_density(mat: CMatrix, dims: Vec<usize>) -> Result<DensityMatrix> {
    if !mat.is_square() {
        return Err(Error::InvalidShape(format!(
            "{}x{} is not square",
            mat.rows(),
            mat.cols()
        )));
    }
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != mat.rows() {
        return Err(Error::InvalidShape(format!(
            "dims {dims:?} do not multiply to {}",
            mat.rows()
        )));
    }
    if !mat.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = mat.hermiticity_deviation();
    if herm > STATE_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let tr = mat.trace().re;
    if (tr - 1.0).abs() > STATE_TOL {
        return Err(Error::TraceNotOne(tr));
    }
    let min = hermitian_eig(&mat)?.values[0];
    if min < -STATE_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(DensityMatrix { mat, dims })
}

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Same operator under a different factorization.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().product::<usize>() != self.dim() {
            return Err(Error::InvalidShape(format!(
                "dims {dims:?} do not multiply to {}",
                self.dim()
            )));
        }
        Ok(DensityMatrix { mat: self.mat, dims })
    }

    /// `[d_a, d_b]` for a bipartite state.
    pub fn bipartite_dims(&self) -> Result<[usize; 2]> {
        match self.dims[..] {
            [a, b] => Ok([a, b]),
            _ => Err(Error::InvalidShape(format!(
                "expected 2 subsystems, found {}",
                self.dims.len()
            ))),
        }
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.mat).expect("validated state").values
    }

    /// Reduced state on the listed subsystems.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mat = partial_trace(&self.mat, &self.dims, &kept)?;
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix { mat, dims })
    }

    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// `U ρ U†` for a unitary acting on the whole space.
    pub fn transformed(&self, u: &CMatrix) -> Result<DensityMatrix> {
        u.ensure_unitary()?;
        if u.rows() != self.dim() {
            return Err(Error::InvalidShape("unitary dimension mismatch".into()));
        }
        Ok(DensityMatrix {
            mat: u.conjugate(&self.mat),
            dims: self.dims.clone(),
        })
    }

    /// Builds a state the caller guarantees is valid up to rounding; used by
    /// constructions that are positive by design.
    pub(crate) fn from_trusted(mat: CMatrix, dims: Vec<usize>) -> DensityMatrix {
        debug_assert!(make_density(mat.clone(), dims.clone()).is_ok());
        DensityMatrix { mat, dims }
    }
}

/// The named two-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `ρ_α`, parameter `α ∈ [0, 1]`.
    Alpha,
    /// `ρ(β)`, parameter `β ∈ [0, 1]`.
    Beta,
    /// `(1-ξ)·I/4 + ξ|ψ⁻><ψ⁻|`, parameter `ξ ∈ [-1/3, 1]`.
    Werner,
    MaxL4,
    MaxL3,
    MaxL2,
    TildeMax,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Alpha,
        Family::Beta,
        Family::Werner,
        Family::MaxL4,
        Family::MaxL3,
        Family::MaxL2,
        Family::TildeMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Werner => "werner",
            Family::MaxL4 => "max_l4",
            Family::MaxL3 => "max_l3",
            Family::MaxL2 => "max_l2",
            Family::TildeMax => "tilde_max",
        }
    }

    /// Valid parameter interval, `None` for the fixed states.
    pub fn param_range(self) -> Option<(f64, f64)> {
        match self {
            Family::Alpha | Family::Beta => Some((0.0, 1.0)),
            Family::Werner => Some((-1.0 / 3.0, 1.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

fn check_param(family: Family, param: Option<f64>) -> Result<f64> {
    let (lo, hi) = family.param_range().expect("parametrized family");
    let p = param.ok_or_else(|| Error::MissingParameter(family.name().into()))?;
    // Small slack so that `-1/3` typed as a decimal is accepted.
    if !(p >= lo - 1e-12 && p <= hi + 1e-12) {
        return Err(Error::ParameterOutOfRange {
            name: match family {
                Family::Alpha => "alpha",
                Family::Beta => "beta",
                _ => "xi",
            },
            value: p,
            lo,
            hi,
        });
    }
    Ok(p.clamp(lo, hi))
}

/// The matrix of a named family. Fixed states ignore `param`.
pub fn family_state(family: Family, param: Option<f64>) -> Result<DensityMatrix> {
    let mat = match family {
        Family::Alpha => {
            let a = check_param(family, param)?;
            CMatrix::from_real_rows(&[
                &[a, 0.0, 0.0, a],
                &[0.0, 1.0 - a, 0.0, 0.0],
                &[0.0, 0.0, 1.0 - a, 0.0],
                &[a, 0.0, 0.0, a],
            ])
            .scale_real(0.5)
        }
        Family::Beta => {
            let b = check_param(family, param)?;
            let c = 1.0 - b;
            CMatrix::from_real_rows(&[
                &[b, 0.0, 0.0, b],
                &[0.0, c, c, 0.0],
                &[0.0, c, c, 0.0],
                &[b, 0.0, 0.0, b],
            ])
            .scale_real(0.5)
        }
        Family::Werner => {
            let xi = check_param(family, param)?;
            let s = FRAC_1_SQRT_2;
            let singlet = CMatrix::outer(&[c(0.0), c(s), c(-s), c(0.0)]);
            &CMatrix::identity(4).scale_real((1.0 - xi) / 4.0) + &singlet.scale_real(xi)
        }
        Family::MaxL4 => CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 2.0, 0.0, 0.0],
            &[0.0, 0.0, 2.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ])
        .scale_real(1.0 / 6.0),
        Family::MaxL3 => CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ])
        .scale_real(0.25),
        Family::MaxL2 => {
            let s = FRAC_1_SQRT_2;
            let p00 = CMatrix::outer(&[c(1.0), c(0.0), c(0.0), c(0.0)]);
            // |+>|1>
            let pp1 = CMatrix::outer(&[c(0.0), c(s), c(0.0), c(s)]);
            (&p00 + &pp1).scale_real(0.5)
        }
        Family::TildeMax => CMatrix::from_real_rows(&[
            &[2.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 1.0, 0.0],
            &[0.0, 1.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 2.0],
        ])
        .scale_real(1.0 / 6.0),
    };
    make_density(mat, vec![2, 2])
}

/// The local swap `1 ⊗ σ_x` relating `max_l4` and `tilde_max`.
pub fn swap_b() -> CMatrix {
    kron(&CMatrix::identity(2), &pauli(1))
}

#[inline]
fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Pauli matrices: `0 → I`, `1 → σ_x`, `2 → σ_y`, `3 → σ_z`.
pub fn pauli(k: usize) -> CMatrix {
    let i = C64::i();
    let z = C64::new(0.0, 0.0);
    let one = c(1.0);
    let data = match k {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -i, i, z],
        3 => vec![one, z, z, -one],
        _ => panic!("pauli index {k} out of range"),
    };
    CMatrix::from_vec(2, 2, data).expect("2x2")
}

/// Point on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochKet {
    pub theta: f64,
    pub phi: f64,
}

impl BlochKet {
    pub fn new(theta: f64, phi: f64) -> Self {
        BlochKet { theta, phi }
    }

    /// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
    pub fn ket(&self) -> Ket {
        bloch_ket(self.theta, self.phi)
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`; angles outside their ranges are
/// accepted, the trigonometric form wraps them.
pub fn bloch_ket(theta: f64, phi: f64) -> Ket {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![c(co), C64::from_polar(s, phi)]
}

/// Bloch vector `(<σ_x>, <σ_y>, <σ_z>)` of a qubit ket.
pub fn bloch_vector(ket: &[C64]) -> [f64; 3] {
    let p = CMatrix::outer(ket);
    [1, 2, 3].map(|k| pauli(k).matmul(&p).trace().re)
}

/// Ket envelope `{"re":[..],"im":[..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KetEnvelope {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl KetEnvelope {
    pub fn from_ket(k: &[C64]) -> Self {
        KetEnvelope {
            re: k.iter().map(|z| z.re).collect(),
            im: k.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_ket(&self) -> Result<Ket> {
        if self.re.len() != self.im.len() {
            return Err(Error::InvalidShape("re/im lengths differ".into()));
        }
        Ok(self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect())
    }
}

/// `Σ_k p_k |a_k><a_k| ⊗ |b_k><b_k|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleFile", into = "EnsembleFile")]
pub struct ProductEnsemble {
    weights: Vec<f64>,
    a_kets: Vec<Ket>,
    b_kets: Vec<Ket>,
}

/// Wire form of [`ProductEnsemble`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub weights: Vec<f64>,
    pub a_kets: Vec<KetEnvelope>,
    pub b_kets: Vec<KetEnvelope>,
}

impl TryFrom<EnsembleFile> for ProductEnsemble {
    type Error = Error;

    fn try_from(f: EnsembleFile) -> Result<Self> {
        let a = f.a_kets.iter().map(KetEnvelope::to_ket).collect::<Result<Vec<_>>>()?;
        let b = f.b_kets.iter().map(KetEnvelope::to_ket).collect::<Result<Vec<_>>>()?;
        ProductEnsemble::new(f.weights, a, b)
    }
}

impl From<ProductEnsemble> for EnsembleFile {
    fn from(e: ProductEnsemble) -> Self {
        EnsembleFile {
            weights: e.weights,
            a_kets: e.a_kets.iter().map(|k| KetEnvelope::from_ket(k)).collect(),
            b_kets: e.b_kets.iter().map(|k| KetEnvelope::from_ket(k)).collect(),
        }
    }
}

const ENSEMBLE_TOL: f64 = 1e-12;

impl ProductEnsemble {
    pub fn new(weights: Vec<f64>, a_kets: Vec<Ket>, b_kets: Vec<Ket>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || a_kets.len() != n || b_kets.len() != n {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights, {} a-kets, {} b-kets",
                n,
                a_kets.len(),
                b_kets.len()
            )));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidEnsemble("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > ENSEMBLE_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        for (side, kets) in [("a", &a_kets), ("b", &b_kets)] {
            let d = kets[0].len();
            if d == 0 || kets.iter().any(|k| k.len() != d) {
                return Err(Error::InvalidEnsemble(format!(
                    "{side}-kets have inconsistent dimension"
                )));
            }
            if let Some(k) = kets.iter().find(|k| (vec_norm(k) - 1.0).abs() > ENSEMBLE_TOL) {
                return Err(Error::InvalidEnsemble(format!(
                    "{side}-ket with norm {} is not normalized",
                    vec_norm(k)
                )));
            }
        }
        Ok(ProductEnsemble {
            weights,
            a_kets,
            b_kets,
        })
    }

    /// Number of product terms.
    pub fn length(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn a_kets(&self) -> &[Ket] {
        &self.a_kets
    }

    pub fn b_kets(&self) -> &[Ket] {
        &self.b_kets
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.a_kets[0].len(), self.b_kets[0].len()]
    }

    /// The separable state this ensemble decomposes.
    pub fn to_state(&self) -> DensityMatrix {
        ensemble_to_state(self)
    }
}

/// `Σ_k p_k |a_k><a_k| ⊗ |b_k><b_k|`.
pub fn ensemble_to_state(e: &ProductEnsemble) -> DensityMatrix {
    let [da, db] = e.dims();
    let mut acc = CMatrix::zeros(da * db, da * db);
    for ((w, a), b) in e.weights.iter().zip(&e.a_kets).zip(&e.b_kets) {
        let term = kron(&CMatrix::outer(a), &CMatrix::outer(b)).scale_real(*w);
        acc = &acc + &term;
    }
    DensityMatrix::from_trusted(acc, vec![da, db])
}

/// `{|0,0>, |2π/3,0>, |2π/3,π>}` on both sides with weights 1/3.
pub fn w_set() -> ProductEnsemble {
    let kets: Vec<Ket> = [(0.0, 0.0), (2.0 * PI / 3.0, 0.0), (2.0 * PI / 3.0, PI)]
        .iter()
        .map(|&(t, p)| bloch_ket(t, p))
        .collect();
    ProductEnsemble::new(vec![1.0 / 3.0; 3], kets.clone(), kets).expect("valid")
}

/// The four tetrahedral kets `{|0,0>, |θ*,0>, |θ*,2π/3>, |θ*,4π/3>}`.
pub fn z_kets() -> Vec<Ket> {
    let t = theta_star();
    [(0.0, 0.0), (t, 0.0), (t, 2.0 * PI / 3.0), (t, 4.0 * PI / 3.0)]
        .iter()
        .map(|&(th, ph)| bloch_ket(th, ph))
        .collect()
}

/// Tetrahedral kets on both sides with weights 1/4.
pub fn z_set() -> ProductEnsemble {
    let kets = z_kets();
    ProductEnsemble::new(vec![0.25; 4], kets.clone(), kets).expect("valid")
}

/// `G G† / tr(G G†)` with `G` a `d×rank` Ginibre matrix; dims `[d]`.
pub fn haar_state(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidShape(format!("rank {rank} outside 1..={d}")));
    }
    let mut rng = seeded_rng(seed);
    let g = ginibre::<f64, _>(&mut rng, d, rank);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    let mut mat = w.scale_real(1.0 / tr);
    // Exact Hermiticity.
    mat = (&mat + &mat.adjoint()).scale_real(0.5);
    Ok(DensityMatrix::from_trusted(mat, vec![d]))
}

/// `max(rk ρ, rk ρ^{T_b})` for a separable two-qubit state.
pub fn length_two_qubits(rho: &DensityMatrix) -> Result<usize> {
    if rho.dims() != [2, 2] {
        return Err(Error::InvalidShape(format!(
            "expected dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let r = rho.rank(STATE_TOL);
    let pt = partial_transpose(rho.matrix(), [2, 2], Side::B)?;
    let rpt = hermitian_eig(&pt)?
        .values
        .iter()
        .filter(|&&l| l.abs() > STATE_TOL)
        .count();
    Ok(r.max(rpt))
}
