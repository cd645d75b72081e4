//! Entropic correlation measures: von Neumann entropy, mutual information,
//! measured classical correlation, quantum discord, and two-qubit
//! concurrence / entanglement of formation.
//!
//! Entropies are in bits. The classical correlation optimizes over rank-one
//! projective measurements on the measured side, and the post-measurement
//! conditional entropy is `Σ_i p_i S(ρ_other | i)`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, permute_subsystems, seeded_rng, sqrt_psd, Matrix, Side};
use crate::scalar::RealScalar;
use crate::search::{maximize_over_unitaries, Schedule};
use crate::states::{bloch_ket, pauli, BlochKet, DensityMatrix};
use crate::{CMatrix, C64};

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy (bits) of a spectrum; eigenvalues in `(-1e-10, 0]` are
/// treated as zero.
pub fn spectrum_entropy<T: RealScalar>(values: &[T]) -> T {
    values.iter().filter(|&&l| l > T::zero()).map(|&l| -l * l.log2()).sum()
}

/// Von Neumann entropy of any Hermitian, positive, unit-trace matrix.
pub fn von_neumann_entropy<T: RealScalar>(m: &Matrix<T>) -> Result<T> {
    Ok(spectrum_entropy(&hermitian_eig(m)?.values))
}

/// `-Σ λ log2 λ`.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues())
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    eta(p) + eta(1.0 - p)
}

/// `S(ρ_a) + S(ρ_b) - S(ρ_ab)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let sa = entropy(&rho.marginal(&[0])?);
    let sb = entropy(&rho.marginal(&[1])?);
    Ok(sa + sb - entropy(rho))
}

/// Settings of the measurement optimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasurementOptConfig {
    /// Grid points per Bloch angle in the coarse scan.
    pub coarse_grid: usize,
    /// Local stencil iterations after the coarse scan.
    pub refine_iters: usize,
    /// Stencil shrink factor per iteration.
    pub refine_shrink: f64,
    /// Independent refinements; the first starts from the best grid point,
    /// the rest from seeded random points.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for MeasurementOptConfig {
    fn default() -> Self {
        MeasurementOptConfig {
            coarse_grid: 48,
            refine_iters: 25,
            refine_shrink: 0.5,
            restarts: 3,
            seed: 0,
        }
    }
}

impl MeasurementOptConfig {
    /// Reduced-accuracy settings for inner loops.
    pub fn fast() -> Self {
        MeasurementOptConfig {
            coarse_grid: 24,
            restarts: 1,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid < 2 || self.refine_iters < 1 || self.restarts < 1 {
            return Err(Error::InvalidConfig(
                "coarse_grid must be >= 2, refine_iters and restarts >= 1".into(),
            ));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::InvalidConfig("refine_shrink must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// The optimal measurement found for the classical correlation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Measurement {
    /// Columns are the outcome kets on the measured side.
    pub basis: CMatrix,
    /// Bloch direction of the first outcome, for qubit sides.
    pub bloch: Option<BlochKet>,
}

#[derive(Clone, Debug)]
pub struct ClassicalCorrelation {
    /// `S(ρ_other) - min H`.
    pub value: f64,
    /// Minimal measured conditional entropy.
    pub conditional_entropy: f64,
    pub measurement: Measurement,
}

/// Blocks `<i|ρ|j>` (operators on the unmeasured side) of a bipartite
/// state whose measured factor comes first.
struct Conditioner {
    dm: usize,
    dother: usize,
    blocks: Vec<CMatrix>,
}

impl Conditioner {
    fn new(rho: &DensityMatrix, side: Side) -> Result<Self> {
        let [da, db] = rho.bipartite_dims()?;
        let (mat, dm, dother) = match side {
            Side::A => (rho.matrix().clone(), da, db),
            Side::B => (permute_subsystems(rho.matrix(), &[da, db], &[1, 0])?, db, da),
        };
        let mut blocks = Vec::with_capacity(dm * dm);
        for i in 0..dm {
            for j in 0..dm {
                blocks.push(Matrix::from_fn(dother, dother, |r, c| {
                    mat[(i * dother + r, j * dother + c)]
                }));
            }
        }
        Ok(Conditioner { dm, dother, blocks })
    }

    /// Unnormalized conditional state `<e|ρ|e>` for measured ket `e`.
    fn conditional(&self, e: &[C64]) -> CMatrix {
        let n = self.dother;
        let mut out = CMatrix::zeros(n, n);
        for i in 0..self.dm {
            for j in 0..self.dm {
                let w = e[i].conj() * e[j];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                let b = &self.blocks[i * self.dm + j];
                for r in 0..n {
                    for c in 0..n {
                        out[(r, c)] += w * b[(r, c)];
                    }
                }
            }
        }
        out
    }

    /// `Σ_i p_i S(M_i / p_i) = Σ_i [S_unnorm(M_i) + p_i log p_i]`.
    fn entropy_term(&self, m: &CMatrix) -> f64 {
        let p = m.trace().re;
        let unnorm: f64 = if self.dother == 2 {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let half = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
            eta(half + rad) + eta(half - rad)
        } else {
            let herm = (m + &m.adjoint()).scale_real(0.5);
            hermitian_eig(&herm)
                .map(|e| e.values.iter().map(|&l| eta(l)).sum())
                .unwrap_or(f64::NAN)
        };
        unnorm - eta(p)
    }

    /// Measured conditional entropy for the orthonormal basis given as
    /// columns.
    fn conditional_entropy(&self, basis: &CMatrix) -> f64 {
        (0..basis.cols())
            .map(|k| self.entropy_term(&self.conditional(&basis.column(k))))
            .sum()
    }

    fn qubit_entropy(&self, theta: f64, phi: f64) -> f64 {
        let up = bloch_ket(theta, phi);
        let down = bloch_ket(PI - theta, phi + PI);
        self.entropy_term(&self.conditional(&up)) + self.entropy_term(&self.conditional(&down))
    }
}

fn qubit_basis(theta: f64, phi: f64) -> CMatrix {
    CMatrix::from_columns(&[bloch_ket(theta, phi), bloch_ket(PI - theta, phi + PI)]).expect("2x2")
}

/// Coarse Bloch-hemisphere grid, then shrinking 5×5 stencils.
fn minimize_qubit(cond: &Conditioner, cfg: &MeasurementOptConfig) -> (f64, f64, f64) {
    let g = cfg.coarse_grid;
    let dtheta = 0.5 * PI / (g - 1) as f64;
    let dphi = 2.0 * PI / g as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..g {
        let theta = i as f64 * dtheta;
        for j in 0..g {
            let phi = j as f64 * dphi;
            let h = cond.qubit_entropy(theta, phi);
            if h < best.0 {
                best = (h, theta, phi);
            }
        }
    }

    let mut rng = seeded_rng(cfg.seed);
    let mut overall = best;
    for r in 0..cfg.restarts {
        let start = if r == 0 {
            best
        } else {
            let theta = rng.random::<f64>() * PI;
            let phi = rng.random::<f64>() * 2.0 * PI;
            (cond.qubit_entropy(theta, phi), theta, phi)
        };
        let refined = refine(cond, start, dtheta, dphi, cfg);
        if refined.0 < overall.0 {
            overall = refined;
        }
    }
    overall
}

fn refine(
    cond: &Conditioner,
    start: (f64, f64, f64),
    dtheta: f64,
    dphi: f64,
    cfg: &MeasurementOptConfig,
) -> (f64, f64, f64) {
    let (mut best, mut theta, mut phi) = start;
    let (mut ht, mut hp) = (dtheta, dphi);
    for _ in 0..cfg.refine_iters {
        let (ct, cp) = (theta, phi);
        for a in -2i32..=2 {
            for b in -2i32..=2 {
                if a == 0 && b == 0 {
                    continue;
                }
                let t = ct + a as f64 * ht;
                let p = cp + b as f64 * hp;
                let h = cond.qubit_entropy(t, p);
                if h < best {
                    best = h;
                    theta = t;
                    phi = p;
                }
            }
        }
        ht *= cfg.refine_shrink;
        hp *= cfg.refine_shrink;
    }
    (best, theta, phi)
}

/// Minimizes the measured conditional entropy over orthonormal bases of a
/// measured side of dimension > 2 by annealing the basis unitary.
fn minimize_general(cond: &Conditioner, cfg: &MeasurementOptConfig) -> (f64, CMatrix) {
    let d = cond.dm;
    let stages = 6;
    let schedule = Schedule {
        temperatures: (0..stages)
            .map(|s| 1e-2 * 10f64.powf(-3.0 * s as f64 / (stages - 1) as f64))
            .collect(),
        steps_per_temp: (cfg.coarse_grid * cfg.refine_iters / stages).max(1),
        step_eps: 0.3,
        eps_decay: cfg.refine_shrink.powf(1.0 / 2.0),
    };
    let mut best = (cond.conditional_entropy(&CMatrix::identity(d)), CMatrix::identity(d));
    for r in 0..cfg.restarts {
        let mut rng = seeded_rng(cfg.seed.wrapping_add(r as u64));
        let start = if r == 0 {
            CMatrix::identity(d)
        } else {
            crate::linalg::random_unitary_with(&mut rng, d)
        };
        let (u, neg_h) = maximize_over_unitaries(start, |u| -cond.conditional_entropy(u), &schedule, &mut rng);
        if -neg_h < best.0 {
            best = (-neg_h, u);
        }
    }
    best
}

/// Measured conditional entropy `Σ_i p_i S(ρ_other|i)` for an explicit
/// orthonormal basis (columns) on the measured side.
pub fn measured_conditional_entropy(rho: &DensityMatrix, side: Side, basis: &CMatrix) -> Result<f64> {
    let cond = Conditioner::new(rho, side)?;
    if basis.rows() != cond.dm || basis.cols() != cond.dm {
        return Err(Error::InvalidShape(format!(
            "basis is {}x{}, measured side has dimension {}",
            basis.rows(),
            basis.cols(),
            cond.dm
        )));
    }
    basis.ensure_unitary()?;
    Ok(cond.conditional_entropy(basis))
}

/// `S(ρ_other) - min_{Π} Σ_i p_i S(ρ_other|i)` over rank-one projective
/// measurements on `measured_side`.
pub fn classical_correlation(
    rho: &DensityMatrix,
    measured_side: Side,
    cfg: &MeasurementOptConfig,
) -> Result<ClassicalCorrelation> {
    cfg.validate()?;
    let cond = Conditioner::new(rho, measured_side)?;
    let other = rho.marginal(&[measured_side.other().index()])?;
    let (h, measurement) = if cond.dm == 2 {
        let (h, theta, phi) = minimize_qubit(&cond, cfg);
        (
            h,
            Measurement {
                basis: qubit_basis(theta, phi),
                bloch: Some(BlochKet::new(theta, phi)),
            },
        )
    } else if cond.dm == 1 {
        (
            entropy(&other),
            Measurement {
                basis: CMatrix::identity(1),
                bloch: None,
            },
        )
    } else {
        let (h, u) = minimize_general(&cond, cfg);
        (h, Measurement { basis: u, bloch: None })
    };
    Ok(ClassicalCorrelation {
        value: entropy(&other) - h,
        conditional_entropy: h,
        measurement,
    })
}

/// `δ = I - C` with the measurement on `measured_side`.
pub fn discord(rho: &DensityMatrix, measured_side: Side, cfg: &MeasurementOptConfig) -> Result<f64> {
    Ok(profile(rho, measured_side, cfg)?.discord)
}

/// Analytic discord of `ρ_α` with `ᾱ = max(|α|, |2α-1|)`:
/// `(1-α)log(1-α) + α log α + (1+α) - (1-ᾱ)/2·log(1-ᾱ) - (1+ᾱ)/2·log(1+ᾱ)`.
pub fn discord_alpha_analytic(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let abar = alpha.abs().max((2.0 * alpha - 1.0).abs());
    let xlog = |x: f64| -eta(x);
    Ok(xlog(1.0 - alpha) + xlog(alpha) + (1.0 + alpha) - 0.5 * xlog(1.0 - abar) - 0.5 * xlog(1.0 + abar))
}

fn ensure_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::InvalidShape(format!(
            "expected dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`, with `λ_i` the
/// descending square roots of the spectrum of `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    ensure_two_qubits(rho)?;
    let yy = kron(&pauli(2), &pauli(2));
    let tilde = yy.conjugate(&rho.matrix().conj());
    let s = sqrt_psd(rho.matrix())?;
    let r = s.matmul(&tilde).matmul(&s);
    let r = (&r + &r.adjoint()).scale_real(0.5);
    let mut l: Vec<f64> = hermitian_eig(&r)?.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// `h((1 + √(1 - C²)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

pub fn eof(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Entropic summary of one bipartite state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub measured_side: Side,
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub entropy_ab: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eof: Option<f64>,
}

/// Entropies, mutual information, classical correlation and discord;
/// concurrence and EoF as well for two qubits.
pub fn profile(rho: &DensityMatrix, measured_side: Side, cfg: &MeasurementOptConfig) -> Result<CorrelationProfile> {
    rho.bipartite_dims()?;
    let entropy_a = entropy(&rho.marginal(&[0])?);
    let entropy_b = entropy(&rho.marginal(&[1])?);
    let entropy_ab = entropy(rho);
    let mutual_info = entropy_a + entropy_b - entropy_ab;
    let classical_corr = classical_correlation(rho, measured_side, cfg)?.value;
    let (concurrence, eof) = if rho.dims() == [2, 2] {
        let c = concurrence(rho)?;
        (Some(c), Some(eof_from_concurrence(c)))
    } else {
        (None, None)
    };
    Ok(CorrelationProfile {
        measured_side,
        entropy_a,
        entropy_b,
        entropy_ab,
        mutual_info,
        classical_corr,
        discord: mutual_info - classical_corr,
        concurrence,
        eof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use crate::states::{family_state, haar_state, make_density, Family, ProductEnsemble};

    fn cfg() -> MeasurementOptConfig {
        MeasurementOptConfig::default()
    }

    fn bell() -> DensityMatrix {
        family_state(Family::Alpha, Some(1.0)).unwrap()
    }

    fn product(seed: u64) -> DensityMatrix {
        let a = random_unitary::<f64>(2, seed).column(0);
        let b = random_unitary::<f64>(2, seed + 100).column(0);
        ProductEnsemble::new(vec![1.0], vec![a], vec![b]).unwrap().to_state()
    }

    /// Brute-force Bloch grid, independent of the optimizer.
    fn brute_force_discord(rho: &DensityMatrix, n: usize) -> f64 {
        let sa = entropy(&rho.marginal(&[0]).unwrap());
        let sab = entropy(rho);
        let mut best = f64::INFINITY;
        for i in 0..=n {
            let theta = PI * i as f64 / n as f64;
            for j in 0..2 * n {
                let phi = PI * j as f64 / n as f64;
                let basis = qubit_basis(theta, phi);
                let h = measured_conditional_entropy(rho, Side::A, &basis).unwrap();
                best = best.min(h);
            }
        }
        sa - sab + best
    }

    #[test]
    fn entropy_basics() {
        assert!(entropy(&product(1)).abs() < 1e-10);
        let mixed = make_density(CMatrix::identity(4).scale_real(0.25), vec![2, 2]).unwrap();
        assert!((entropy(&mixed) - 2.0).abs() < 1e-12);
        let tilde = family_state(Family::TildeMax, None).unwrap();
        assert!((entropy(&tilde) - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn entropy_generic_in_f32() {
        let m = CMatrix::identity(4).scale_real(0.25).cast::<f32>();
        assert!((von_neumann_entropy(&m).unwrap() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn mutual_information_cases() {
        assert!(mutual_information(&product(2)).unwrap().abs() < 1e-10);
        assert!((mutual_information(&bell()).unwrap() - 2.0).abs() < 1e-10);
        let max = family_state(Family::MaxL4, None).unwrap();
        assert!((mutual_information(&max).unwrap() - (2.0 - 3f64.log2())).abs() < 1e-12);
        let single = haar_state(4, 2, 1).unwrap();
        assert!(mutual_information(&single).is_err());
    }

    #[test]
    fn classical_quantum_state_has_no_discord() {
        // Σ p_i |i><i| ⊗ ρ_i measured on the classical side.
        let r0 = haar_state(2, 2, 1).unwrap();
        let r1 = haar_state(2, 2, 2).unwrap();
        let mat =
            &kron(&CMatrix::diag_real(&[0.3, 0.0]), r0.matrix()) + &kron(&CMatrix::diag_real(&[0.0, 0.7]), r1.matrix());
        let rho = make_density(mat, vec![2, 2]).unwrap();
        let p = profile(&rho, Side::A, &cfg()).unwrap();
        assert!(p.discord.abs() < 1e-9, "{}", p.discord);
        assert!((p.classical_corr - p.mutual_info).abs() < 1e-9);
    }

    #[test]
    fn alpha_third_discord_is_one_third() {
        let rho = family_state(Family::Alpha, Some(1.0 / 3.0)).unwrap();
        let cc = classical_correlation(&rho, Side::A, &cfg()).unwrap();
        let mi = mutual_information(&rho).unwrap();
        assert!((mi - cc.value - 1.0 / 3.0).abs() < 1e-4);
        assert!((discord_alpha_analytic(1.0 / 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn max_l2_and_max_l3_discords() {
        let l2 = family_state(Family::MaxL2, None).unwrap();
        let want = 2.0 - std::f64::consts::FRAC_1_SQRT_2 * (3.0 + 2.0 * 2f64.sqrt()).log2();
        assert!((discord(&l2, Side::A, &cfg()).unwrap() - want).abs() < 1e-4);
        let l3 = family_state(Family::MaxL3, None).unwrap();
        let want = 0.75 * (4.0f64 / 3.0).log2();
        assert!((discord(&l3, Side::A, &cfg()).unwrap() - want).abs() < 1e-4);
    }

    #[test]
    fn singlet_discord_matches_brute_force() {
        let w = family_state(Family::Werner, Some(1.0)).unwrap();
        let oracle = brute_force_discord(&w, 60);
        assert!((oracle - 1.0).abs() < 1e-6);
        assert!((discord(&w, Side::A, &cfg()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn optimizer_agrees_with_brute_force_on_random_states() {
        for seed in 0..6 {
            let rho = haar_state(4, 2 + (seed as usize % 3), seed)
                .unwrap()
                .with_dims(vec![2, 2])
                .unwrap();
            let fast = discord(&rho, Side::A, &cfg()).unwrap();
            let oracle = brute_force_discord(&rho, 120);
            // The grid oracle can only overestimate the minimum entropy.
            assert!(fast <= oracle + 1e-9, "seed {seed}: {fast} > {oracle}");
            assert!(oracle - fast < 2e-3, "seed {seed}: {fast} vs {oracle}");
        }
    }

    #[test]
    fn alpha_quarter_analytic_matches_numeric() {
        let rho = family_state(Family::Alpha, Some(0.25)).unwrap();
        let num = discord(&rho, Side::A, &cfg()).unwrap();
        assert!((num - discord_alpha_analytic(0.25).unwrap()).abs() < 1e-3);
        assert!(discord_alpha_analytic(0.0).unwrap().abs() < 1e-15);
        assert!(discord_alpha_analytic(1.2).is_err());
    }

    #[test]
    fn measuring_b_side() {
        // max_l2 is classical on b, so discord measured there vanishes.
        let l2 = family_state(Family::MaxL2, None).unwrap();
        assert!(discord(&l2, Side::B, &cfg()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn concurrence_cases() {
        let a = family_state(Family::Alpha, Some(0.75)).unwrap();
        assert!((concurrence(&a).unwrap() - 0.5).abs() < 1e-10);
        for alpha in [0.0, 0.1, 1.0 / 3.0, 0.5] {
            let s = family_state(Family::Alpha, Some(alpha)).unwrap();
            assert!(concurrence(&s).unwrap() < 1e-7);
        }
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-10);
        assert!((eof(&bell()).unwrap() - 1.0).abs() < 1e-10);
        assert!(concurrence(&haar_state(8, 2, 0).unwrap().with_dims(vec![2, 4]).unwrap()).is_err());
    }

    #[test]
    fn beta_family_discord_closed_form() {
        // Bell-diagonal with |c_1| = 1: δ = 1 - h(β).
        for beta in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let rho = family_state(Family::Beta, Some(beta)).unwrap();
            let d = discord(&rho, Side::A, &cfg()).unwrap();
            assert!((d - (1.0 - binary_entropy(beta))).abs() < 1e-6, "β={beta}: {d}");
        }
    }

    #[test]
    fn qutrit_side_uses_general_path() {
        // Classical on a qutrit side: Σ_i p_i |i><i| ⊗ ρ_i.
        let mut mat = CMatrix::zeros(6, 6);
        for (i, p) in [0.2, 0.3, 0.5].into_iter().enumerate() {
            let r = haar_state(2, 2, i as u64).unwrap();
            let mut proj = CMatrix::zeros(3, 3);
            proj[(i, i)] = C64::new(p, 0.0);
            mat = &mat + &kron(&proj, r.matrix());
        }
        let rho = make_density(mat, vec![3, 2]).unwrap();
        let d = discord(&rho, Side::A, &cfg()).unwrap();
        assert!(d.abs() < 1e-9, "{d}");
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = MeasurementOptConfig {
            refine_shrink: 1.5,
            ..cfg()
        };
        assert!(discord(&bell(), Side::A, &bad).is_err());
    }
}
