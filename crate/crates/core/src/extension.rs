//! Classical-quantum extensions of separable states and the ancilla
//! dimension bounds.
//!
//! For `ρ = Σ_k p_k ρ^a_k ⊗ ρ^b_k` with eigen-expansions
//! `ρ^a_k = Σ_u a_{ku} |ψ_{ku}><ψ_{ku}|`, the extension is
//!
//! `σ = Σ_{k,u} p_k a_{ku} (|k><k| ⊗ |ψ_{ku}><ψ_{ku}|) ⊗ ρ^b_k`
//!
//! on `C^K ⊗ C^{d_a} ⊗ C^{d_b}`, ancilla first. It is classical on the
//! `ā a` factor and tracing out the ancilla returns `ρ`.

use serde::{Deserialize, Serialize};

use crate::correlations::entropy;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inner, kron, vec_norm};
use crate::states::{DensityMatrix, ProductEnsemble};
use crate::{CMatrix, Ket, C64};

/// Eigenvalues below this are dropped from the eigen-expansion.
const EIG_DROP: f64 = 1e-12;
/// Residual below which a state counts as classical-quantum.
pub const CQ_TOL: f64 = 1e-10;

/// A weighted list of product terms `p_k ρ^a_k ⊗ ρ^b_k` (possibly mixed).
#[derive(Clone, Debug)]
pub struct SeparableTerms {
    pub weights: Vec<f64>,
    pub a_states: Vec<CMatrix>,
    pub b_states: Vec<CMatrix>,
}

impl SeparableTerms {
    pub fn new(weights: Vec<f64>, a_states: Vec<CMatrix>, b_states: Vec<CMatrix>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || a_states.len() != n || b_states.len() != n {
            return Err(Error::InvalidEnsemble(
                "term lists must be non-empty and of equal length".into(),
            ));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble("weights must be a probability vector".into()));
        }
        for set in [&a_states, &b_states] {
            let d = set[0].rows();
            for s in set.iter() {
                if s.rows() != d {
                    return Err(Error::InvalidEnsemble("mixed local dimensions".into()));
                }
                crate::states::make_density(s.clone(), vec![d])?;
            }
        }
        Ok(SeparableTerms {
            weights,
            a_states,
            b_states,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.a_states[0].rows(), self.b_states[0].rows()]
    }

    pub fn to_state(&self) -> DensityMatrix {
        let [da, db] = self.dims();
        let mut acc = CMatrix::zeros(da * db, da * db);
        for ((w, a), b) in self.weights.iter().zip(&self.a_states).zip(&self.b_states) {
            acc = &acc + &kron(a, b).scale_real(*w);
        }
        DensityMatrix::from_trusted(acc, vec![da, db])
    }
}

impl From<&ProductEnsemble> for SeparableTerms {
    fn from(e: &ProductEnsemble) -> Self {
        SeparableTerms {
            weights: e.weights().to_vec(),
            a_states: e.a_kets().iter().map(|k| CMatrix::outer(k)).collect(),
            b_states: e.b_kets().iter().map(|k| CMatrix::outer(k)).collect(),
        }
    }
}

/// A classical-quantum extension with dims `[K, d_a, d_b]`.
#[derive(Clone, Debug)]
pub struct CqExtension {
    pub state: DensityMatrix,
    /// Orthonormal basis of `C^K ⊗ C^{d_a}` in which the state is classical.
    pub dephasing_basis: Vec<Ket>,
    pub source: SeparableTerms,
    pub ancilla_dim: usize,
}

impl CqExtension {
    pub fn projectors(&self) -> Vec<CMatrix> {
        self.dephasing_basis.iter().map(|k| CMatrix::outer(k)).collect()
    }

    /// `tr_ā σ`.
    pub fn reduction(&self) -> DensityMatrix {
        self.state.marginal(&[1, 2]).expect("three-factor state")
    }

    pub fn diagnostics(&self) -> AncillaDiagnostics {
        ancilla_diagnostics_of(&self.state).expect("three-factor state")
    }
}

/// Completes `start` (orthonormal) to a basis of `C^d` with standard basis
/// vectors.
fn complete_basis(start: Vec<Ket>, d: usize) -> Vec<Ket> {
    let mut out = start;
    for e in 0..d {
        if out.len() == d {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &out {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= qi * p;
                }
            }
        }
        let n = vec_norm(&v);
        if n > 1e-6 {
            out.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    out
}

/// Weighted eigenkets of one local state and a completed basis.
type Expansion = (Vec<(f64, Ket)>, Vec<Ket>);

/// `(a_{ku}, ψ_{ku})` with eigenvalues below [`EIG_DROP`] removed, plus a
/// full basis of `C^{d_a}` whose first entries are the kept `ψ_{ku}`.
fn eigen_expansion(rho: &CMatrix) -> Result<Expansion> {
    let d = rho.rows();
    let eig = hermitian_eig(rho)?;
    let mut terms: Vec<(f64, Ket)> = (0..d)
        .rev()
        .filter(|&i| eig.values[i] > EIG_DROP)
        .map(|i| (eig.values[i], eig.vectors.column(i)))
        .collect();
    // A pure state keeps its own ket (up to the eigensolver's phase).
    if terms.len() == 1 {
        terms[0].0 = 1.0;
    }
    let basis = complete_basis(terms.iter().map(|(_, k)| k.clone()).collect(), d);
    Ok((terms, basis))
}

fn build_extension(source: SeparableTerms, expansions: Vec<Expansion>) -> CqExtension {
    let k_dim = source.len();
    let [da, db] = source.dims();
    let n = k_dim * da * db;
    let mut acc = CMatrix::zeros(n, n);
    let mut basis = Vec::with_capacity(k_dim * da);
    for (k, (terms, full)) in expansions.into_iter().enumerate() {
        let mut anc = vec![C64::new(0.0, 0.0); k_dim];
        anc[k] = C64::new(1.0, 0.0);
        for (a, psi) in &terms {
            let big = crate::linalg::kron_vec(&anc, psi);
            let w = source.weights[k] * a;
            acc = &acc + &kron(&CMatrix::outer(&big), &source.b_states[k]).scale_real(w);
        }
        basis.extend(full.iter().map(|v| crate::linalg::kron_vec(&anc, v)));
    }
    CqExtension {
        state: DensityMatrix::from_trusted(acc, vec![k_dim, da, db]),
        dephasing_basis: basis,
        source,
        ancilla_dim: k_dim,
    }
}

/// Extension of a pure-product ensemble; one ancilla level per term.
pub fn liluo_extend(e: &ProductEnsemble) -> CqExtension {
    let source = SeparableTerms::from(e);
    let da = e.dims()[0];
    let expansions = e
        .a_kets()
        .iter()
        .map(|k| (vec![(1.0, k.clone())], complete_basis(vec![k.clone()], da)))
        .collect();
    build_extension(source, expansions)
}

/// Extension of a general separable decomposition, eigen-expanding each
/// `ρ^a_k`.
pub fn liluo_extend_terms(source: SeparableTerms) -> Result<CqExtension> {
    let expansions = source
        .a_states
        .iter()
        .map(eigen_expansion)
        .collect::<Result<Vec<_>>>()?;
    Ok(build_extension(source, expansions))
}

/// Outcome of a classicality check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CqCheck {
    pub is_cq: bool,
    /// Max-abs difference between the state and its dephasing.
    pub residual: f64,
}

/// Checks `Σ_i (Π_i ⊗ I) ρ (Π_i ⊗ I) = ρ` where the projectors act on the
/// first `cut` tensor factors.
pub fn verify_cq(state: &DensityMatrix, basis: &[CMatrix], cut: usize) -> Result<CqCheck> {
    let dims = state.dims();
    if cut == 0 || cut >= dims.len() {
        return Err(Error::InvalidShape(format!("cut {cut} invalid for dims {dims:?}")));
    }
    let dl: usize = dims[..cut].iter().product();
    let dr: usize = dims[cut..].iter().product();
    if basis.iter().any(|p| p.rows() != dl || !p.is_square()) {
        return Err(Error::InvalidShape(format!("projectors must be {dl}x{dl}")));
    }
    let mut sum = CMatrix::zeros(dl, dl);
    for p in basis {
        sum = &sum + p;
    }
    let completeness = sum.max_abs_diff(&CMatrix::identity(dl));
    if completeness > CQ_TOL {
        return Err(Error::IncompleteBasis(format!(
            "projectors sum to identity only within {completeness:e}"
        )));
    }
    for (i, p) in basis.iter().enumerate() {
        for q in &basis[i..] {
            let dev = if std::ptr::eq(p, q) {
                p.matmul(p).max_abs_diff(p)
            } else {
                p.matmul(q).max_abs()
            };
            if dev > CQ_TOL {
                return Err(Error::IncompleteBasis(
                    "projectors are not orthogonal and idempotent".into(),
                ));
            }
        }
    }
    let id = CMatrix::identity(dr);
    let rho = state.matrix();
    let mut dephased = CMatrix::zeros(rho.rows(), rho.cols());
    for p in basis {
        let big = kron(p, &id);
        dephased = &dephased + &big.matmul(rho).matmul(&big);
    }
    let residual = dephased.max_abs_diff(rho);
    Ok(CqCheck {
        is_cq: residual < CQ_TOL,
        residual,
    })
}

/// Mutual informations between the ancilla and the rest, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncillaDiagnostics {
    pub i_anc_a: f64,
    pub i_anc_b: f64,
    pub i_anc_ab: f64,
}

pub fn ancilla_diagnostics(ext: &CqExtension) -> AncillaDiagnostics {
    ext.diagnostics()
}

/// Diagnostics for any state with dims `[d_ā, d_a, d_b]`.
pub fn ancilla_diagnostics_of(state: &DensityMatrix) -> Result<AncillaDiagnostics> {
    if state.dims().len() != 3 {
        return Err(Error::InvalidShape(format!(
            "expected three factors, got {:?}",
            state.dims()
        )));
    }
    let s = |keep: &[usize]| -> Result<f64> { Ok(entropy(&state.marginal(keep)?)) };
    let s_anc = s(&[0])?;
    Ok(AncillaDiagnostics {
        i_anc_a: s_anc + s(&[1])? - s(&[0, 1])?,
        i_anc_b: s_anc + s(&[2])? - s(&[0, 2])?,
        i_anc_ab: s_anc + s(&[1, 2])? - entropy(state),
    })
}

/// Positive root of `d_a² x² + d_a(d_b² - 1) x + ℓ(3 - 2d_a - 2d_b)`.
///
/// Computed as `-2c₀ / (c₁ + √(c₁² - 4c₂c₀))`, which has no cancellation
/// since `c₀ < 0 ≤ c₁`.
pub fn bound_f(d_a: usize, d_b: usize, length: usize) -> Result<f64> {
    for (name, v) in [("d_a", d_a), ("d_b", d_b), ("length", length)] {
        if v == 0 {
            return Err(Error::ParameterOutOfRange {
                name,
                value: 0.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
    }
    let (da, db, l) = (d_a as f64, d_b as f64, length as f64);
    let c2 = da * da;
    let c1 = da * (db * db - 1.0);
    let c0 = l * (3.0 - 2.0 * da - 2.0 * db);
    Ok(-2.0 * c0 / (c1 + (c1 * c1 - 4.0 * c2 * c0).sqrt()))
}

/// Ceiling that ignores round-off just above an integer.
pub fn nudged_ceil(x: f64) -> usize {
    (x - 1e-9).ceil().max(1.0) as usize
}

/// One row of the ancilla bound for a given length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d_a: usize,
    pub d_b: usize,
    pub length: usize,
    pub f_value: f64,
    pub min_ancilla: usize,
    pub luo_ancilla: usize,
}

pub fn bound_report(d_a: usize, d_b: usize, length: usize) -> Result<BoundReport> {
    let f = bound_f(d_a, d_b, length)?;
    Ok(BoundReport {
        d_a,
        d_b,
        length,
        f_value: f,
        min_ancilla: nudged_ceil(f),
        luo_ancilla: length,
    })
}

/// `(⌈f(r)⌉, ⌈f(r²)⌉)`: the length of a rank-`r` separable state lies in
/// `[r, r²]`.
pub fn bound_range(d_a: usize, d_b: usize, rank: usize) -> Result<(usize, usize)> {
    Ok((
        nudged_ceil(bound_f(d_a, d_b, rank)?),
        nudged_ceil(bound_f(d_a, d_b, rank * rank)?),
    ))
}

/// Real parameters of a classical-classical state on `C^{d_A} ⊗ C^{d_B}`.
pub fn cc_parameter_count(d_big_a: usize, d_big_b: usize) -> usize {
    d_big_a * d_big_b - 1 + d_big_a * (d_big_a - 1) + d_big_b * (d_big_b - 1)
}

/// Real parameters of a length-`ℓ` separable decomposition of pure
/// products.
pub fn separable_parameter_count(d_a: usize, d_b: usize, length: usize) -> usize {
    length - 1 + length * (2 * d_a + 2 * d_b - 4)
}

/// Smallest ancilla pairs for a classical-classical extension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcBound {
    pub d_a: usize,
    pub d_b: usize,
    pub length: usize,
    /// Minimal `d_ā · d_b̄`.
    pub product: usize,
    /// Every `(d_ā, d_b̄)` achieving it, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
}

pub fn bound_cc(d_a: usize, d_b: usize, length: usize) -> Result<CcBound> {
    bound_f(d_a, d_b, length)?;
    let need = separable_parameter_count(d_a, d_b, length);
    let mut product = 1;
    loop {
        let pairs: Vec<(usize, usize)> = (1..=product)
            .filter(|x| product % x == 0)
            .map(|x| (x, product / x))
            .filter(|&(x, y)| cc_parameter_count(x * d_a, y * d_b) >= need)
            .collect();
        if !pairs.is_empty() {
            return Ok(CcBound {
                d_a,
                d_b,
                length,
                product,
                pairs,
            });
        }
        product += 1;
    }
}

/// Ancilla bounds for `d_a = d_b = d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub d: usize,
    pub rank: usize,
    pub min_low: usize,
    pub min_high: usize,
    pub luo_low: usize,
    pub luo_high: usize,
    pub f_low: f64,
    pub f_high: f64,
}

/// Rows `d = 1..=4` for full-rank states (`r = d²`, `ℓ ∈ [r, r²]`).
/// For two qubits the length of a full-rank separable state is known to be
/// 4, so that row collapses to `ℓ = 4`.
pub fn table1() -> Vec<Table1Row> {
    (1..=4)
        .map(|d| {
            let rank = d * d;
            let (lo, hi) = if d == 2 { (4, 4) } else { (rank, rank * rank) };
            let f_low = bound_f(d, d, lo).expect("positive dims");
            let f_high = bound_f(d, d, hi).expect("positive dims");
            Table1Row {
                d,
                rank,
                min_low: nudged_ceil(f_low),
                min_high: nudged_ceil(f_high),
                luo_low: lo,
                luo_high: hi,
                f_low,
                f_high,
            }
        })
        .collect()
}
