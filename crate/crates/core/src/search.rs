//! Metropolis search over unitaries for the symmetric classical-quantum
//! ansatz `σ^{Ab} = Σ_k (1/d_A) Π_k ⊗ ρ_k`, with `Π_k` the projector onto
//! column `k` of `U_A` and `ρ_k = tr_ā Π_k`, maximizing the discord of the
//! ancilla-traced reduction `Σ_k (1/d_A) ρ_k ⊗ ρ_k`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{discord, MeasurementOptConfig};
use crate::error::{Error, Result};
use crate::linalg::{kron, orthonormalize_columns, random_unitary_with, seeded_rng, unitary_step_with, Side};
use crate::states::DensityMatrix;
use crate::{CMatrix, C64};

/// Columns are re-orthonormalized this often to stop drift.
const REUNITARIZE_EVERY: usize = 100;

/// Temperature ladder shared by the ansatz search and the measurement
/// annealer.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub temperatures: Vec<f64>,
    pub steps_per_temp: usize,
    pub step_eps: f64,
    /// Step size multiplier applied after every stage.
    pub eps_decay: f64,
}

/// One Metropolis walk maximizing `f`, calling `visit(step, T, current,
/// best, u)` after every step. Returns the best unitary and value.
pub(crate) fn metropolis<R: Rng>(
    start: CMatrix,
    mut f: impl FnMut(&CMatrix) -> f64,
    schedule: &Schedule,
    rng: &mut R,
    mut visit: impl FnMut(usize, f64, f64, f64, &CMatrix),
) -> (CMatrix, f64) {
    let mut u = start;
    let mut current = f(&u);
    let mut best = (u.clone(), current);
    let mut eps = schedule.step_eps;
    let mut step = 0usize;
    for &t in &schedule.temperatures {
        for _ in 0..schedule.steps_per_temp {
            let proposal = unitary_step_with(rng, &u, eps);
            let value = f(&proposal);
            let delta = value - current;
            let accept = delta >= 0.0 || rng.random::<f64>() < (delta / t).exp();
            if accept {
                u = proposal;
                current = value;
                if current > best.1 {
                    best = (u.clone(), current);
                }
            }
            step += 1;
            if step.is_multiple_of(REUNITARIZE_EVERY) {
                u = orthonormalize_columns(&u);
            }
            visit(step, t, current, best.1, &u);
        }
        eps *= schedule.eps_decay;
    }
    best
}

/// Maximizes `f` over `d×d` unitaries starting from `start`.
pub(crate) fn maximize_over_unitaries<R: Rng>(
    start: CMatrix,
    f: impl FnMut(&CMatrix) -> f64,
    schedule: &Schedule,
    rng: &mut R,
) -> (CMatrix, f64) {
    metropolis(start, f, schedule, rng, |_, _, _, _, _| {})
}

/// The ansatz defined by a unitary on `C^{d_ā} ⊗ C^{d_a}`.
#[derive(Clone, Debug)]
pub struct AnsatzState {
    u_a: CMatrix,
    d_ancilla: usize,
    d_a: usize,
}

impl AnsatzState {
    pub fn new(u_a: CMatrix, d_ancilla: usize, d_a: usize) -> Result<Self> {
        if d_ancilla == 0 || d_a == 0 || u_a.rows() != d_ancilla * d_a || !u_a.is_square() {
            return Err(Error::InvalidShape(format!(
                "unitary is {}x{}, expected {}",
                u_a.rows(),
                u_a.cols(),
                d_ancilla * d_a
            )));
        }
        u_a.ensure_unitary()?;
        Ok(AnsatzState { u_a, d_ancilla, d_a })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u_a
    }

    pub fn d_total(&self) -> usize {
        self.d_ancilla * self.d_a
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.d_total() as f64
    }

    /// `Π_k = col_k col_k†`.
    pub fn projectors(&self) -> Vec<CMatrix> {
        (0..self.d_total())
            .map(|k| CMatrix::outer(&self.u_a.column(k)))
            .collect()
    }

    /// `ρ_k = tr_ā Π_k`.
    pub fn b_states(&self) -> Vec<CMatrix> {
        b_states(&self.u_a, self.d_ancilla, self.d_a)
    }

    /// `σ^{Ab}` with dims `[d_ā, d_a, d_b]`.
    pub fn sigma(&self) -> DensityMatrix {
        let w = self.weight();
        let n = self.d_total() * self.d_a;
        let mut acc = CMatrix::zeros(n, n);
        for (p, r) in self.projectors().iter().zip(self.b_states()) {
            acc = &acc + &kron(p, &r).scale_real(w);
        }
        DensityMatrix::from_trusted(acc, vec![self.d_ancilla, self.d_a, self.d_a])
    }

    /// `Σ_k (1/d_A) ρ_k ⊗ ρ_k` with dims `[d_a, d_b]`.
    pub fn reduction(&self) -> DensityMatrix {
        reduction(&self.u_a, self.d_ancilla, self.d_a)
    }
}

fn b_states(u: &CMatrix, d_anc: usize, d_a: usize) -> Vec<CMatrix> {
    (0..u.cols())
        .map(|k| {
            let col = u.column(k);
            CMatrix::from_fn(d_a, d_a, |i, j| {
                (0..d_anc).fold(C64::new(0.0, 0.0), |acc, x| {
                    acc + col[x * d_a + i] * col[x * d_a + j].conj()
                })
            })
        })
        .collect()
}

fn reduction(u: &CMatrix, d_anc: usize, d_a: usize) -> DensityMatrix {
    let w = 1.0 / u.cols() as f64;
    let n = d_a * d_a;
    let mut acc = CMatrix::zeros(n, n);
    for r in b_states(u, d_anc, d_a) {
        acc = &acc + &kron(&r, &r).scale_real(w);
    }
    DensityMatrix::from_trusted(acc, vec![d_a, d_a])
}

/// `(σ^{Ab}, tr_ā σ^{Ab})` for the ansatz generated by `u_a`.
pub fn assemble(u_a: &CMatrix, d_ancilla: usize, d_a: usize, d_b: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    if d_b != d_a {
        return Err(Error::InvalidShape(format!(
            "the symmetric ansatz needs d_b = d_a, got {d_b} and {d_a}"
        )));
    }
    let s = AnsatzState::new(u_a.clone(), d_ancilla, d_a)?;
    Ok((s.sigma(), s.reduction()))
}

/// Discord (measured on `a`) of the ansatz reduction.
pub fn objective(u_a: &CMatrix, d_ancilla: usize, d_a: usize, cfg: &MeasurementOptConfig) -> Result<f64> {
    let s = AnsatzState::new(u_a.clone(), d_ancilla, d_a)?;
    discord(&s.reduction(), Side::A, cfg)
}

/// The published optimal 6×6 unitary (ancilla dimension 3, qubit `a`),
/// re-orthonormalized since the entries are rounded to four decimals.
///
/// The fixture rows are ordered `a ⊗ ā`; they are permuted here into the
/// crate's `ā ⊗ a` convention.
pub fn ua_opt() -> CMatrix {
    let raw: CMatrix = serde_json::from_str(UA_OPT_JSON).expect("bundled fixture parses");
    let reordered = CMatrix::from_fn(6, 6, |r, c| raw[((r % 2) * 3 + r / 2, c)]);
    orthonormalize_columns(&reordered)
}

/// Raw fixture contents.
pub const UA_OPT_JSON: &str = include_str!("../data/ua_opt.json");
/// SHA-256 of [`UA_OPT_JSON`].
pub const UA_OPT_SHA256: &str = "609635b11838b165e61bacae9a8173da423d38d85c683b6a400074de99da9559";

fn geometric(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n).map(|s| hi * (lo / hi).powf(s as f64 / (n - 1) as f64)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    pub d_ancilla: usize,
    pub d_a: usize,
    pub d_b: usize,
    pub temperatures: Vec<f64>,
    pub steps_per_temp: usize,
    pub step_eps: f64,
    pub eps_decay: f64,
    pub chains: usize,
    pub seed: u64,
    /// Measurement optimizer used inside the walk.
    pub inner: MeasurementOptConfig,
    /// Measurement optimizer for the final re-evaluation of each chain's best.
    pub final_eval: MeasurementOptConfig,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            d_ancilla: 3,
            d_a: 2,
            d_b: 2,
            temperatures: geometric(1e-1, 1e-4, 8),
            steps_per_temp: 2500,
            step_eps: 0.15,
            eps_decay: 0.7,
            chains: 4,
            seed: 1,
            inner: MeasurementOptConfig::fast(),
            final_eval: MeasurementOptConfig::default(),
        }
    }
}

impl AnnealConfig {
    /// Desk-scale schedule for two-qubit reductions with the given ancilla.
    pub fn desk(d_ancilla: usize) -> Self {
        AnnealConfig {
            d_ancilla,
            ..Self::default()
        }
    }

    pub fn d_total(&self) -> usize {
        self.d_ancilla * self.d_a
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            temperatures: self.temperatures.clone(),
            steps_per_temp: self.steps_per_temp,
            step_eps: self.step_eps,
            eps_decay: self.eps_decay,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.d_ancilla == 0 || self.d_a == 0 {
            return bad("dimensions must be positive");
        }
        if self.d_b != self.d_a {
            return bad("the symmetric ansatz needs d_b = d_a");
        }
        if self.temperatures.is_empty() {
            return bad("at least one temperature is required");
        }
        if self.temperatures.iter().any(|&t| t.is_nan() || t <= 0.0) {
            return bad("temperatures must be positive");
        }
        if self.temperatures.windows(2).any(|w| w[1] > w[0]) {
            return bad("temperatures must be descending");
        }
        if self.steps_per_temp == 0 || self.chains == 0 {
            return bad("steps_per_temp and chains must be >= 1");
        }
        if !(self.step_eps.is_finite() && self.step_eps > 0.0) {
            return bad("step_eps must be positive");
        }
        if !(self.eps_decay.is_finite() && self.eps_decay > 0.0) {
            return bad("eps_decay must be positive");
        }
        self.inner.validate()?;
        self.final_eval.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub chain: usize,
    pub step: usize,
    pub temperature: f64,
    pub current: f64,
    pub best: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnealResult {
    pub best_u: CMatrix,
    /// Discord of the best reduction under `final_eval`.
    pub best_discord: f64,
    pub best_chain: usize,
    /// Per-chain best under `final_eval`.
    pub chain_best: Vec<f64>,
    pub trace: Vec<TraceRecord>,
    pub config: AnnealConfig,
}

struct ChainOutcome {
    best_u: CMatrix,
    final_value: f64,
    trace: Vec<TraceRecord>,
}

fn run_chain(cfg: &AnnealConfig, chain: usize) -> ChainOutcome {
    let mut rng = seeded_rng(cfg.seed.wrapping_add(chain as u64));
    let start = random_unitary_with(&mut rng, cfg.d_total());
    let (da, dan) = (cfg.d_a, cfg.d_ancilla);
    let f = |u: &CMatrix| discord(&reduction(u, dan, da), Side::A, &cfg.inner).unwrap_or(f64::NEG_INFINITY);
    let mut trace = Vec::with_capacity(cfg.temperatures.len() * cfg.steps_per_temp);
    let (best_u, _) = metropolis(start, f, &cfg.schedule(), &mut rng, |step, t, cur, best, _| {
        trace.push(TraceRecord {
            chain,
            step,
            temperature: t,
            current: cur,
            best,
        });
    });
    let best_u = orthonormalize_columns(&best_u);
    let final_value = discord(&reduction(&best_u, dan, da), Side::A, &cfg.final_eval).unwrap_or(f64::NEG_INFINITY);
    ChainOutcome {
        best_u,
        final_value,
        trace,
    }
}

/// Runs `cfg.chains` independent walks in parallel (chain `c` seeded with
/// `seed + c`) and returns the best, ties going to the lowest chain.
pub fn anneal(cfg: &AnnealConfig) -> Result<AnnealResult> {
    cfg.validate()?;
    let outcomes: Vec<ChainOutcome> = (0..cfg.chains).into_par_iter().map(|c| run_chain(cfg, c)).collect();
    let mut best_chain = 0;
    for (c, o) in outcomes.iter().enumerate() {
        if o.final_value > outcomes[best_chain].final_value {
            best_chain = c;
        }
    }
    let chain_best = outcomes.iter().map(|o| o.final_value).collect();
    let best_discord = outcomes[best_chain].final_value;
    let best_u = outcomes[best_chain].best_u.clone();
    let trace = outcomes.into_iter().flat_map(|o| o.trace).collect();
    Ok(AnnealResult {
        best_u,
        best_discord,
        best_chain,
        chain_best,
        trace,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::mutual_information;
    use crate::linalg::random_unitary;
    use sha2::{Digest, Sha256};

    fn small_cfg() -> AnnealConfig {
        AnnealConfig {
            d_ancilla: 2,
            temperatures: vec![1e-2, 1e-3],
            steps_per_temp: 20,
            chains: 2,
            ..AnnealConfig::default()
        }
    }

    #[test]
    fn fixture_checksum() {
        let digest = Sha256::digest(UA_OPT_JSON.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, UA_OPT_SHA256);
    }

    #[test]
    fn fixture_is_nearly_unitary_before_cleanup() {
        let raw: CMatrix = serde_json::from_str(UA_OPT_JSON).unwrap();
        let dev = raw.unitarity_deviation();
        assert!(dev > 1e-8 && dev < 1e-3, "{dev}");
        assert!(ua_opt().unitarity_deviation() < 1e-12);
    }

    #[test]
    fn ua_opt_reduction_discord() {
        let d = objective(&ua_opt(), 3, 2, &MeasurementOptConfig::default()).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-3, "{d}");
    }

    #[test]
    fn identity_gives_classical_reduction() {
        let (sigma, rho) = assemble(&CMatrix::identity(4), 2, 2, 2).unwrap();
        assert_eq!(sigma.dims(), [2, 2, 2]);
        assert!((sigma.matrix().trace().re - 1.0).abs() < 1e-14);
        assert!(rho.matrix().hermiticity_deviation() < 1e-15);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(rho.matrix()[(i, j)].norm(), 0.0);
                }
            }
        }
        assert!(
            objective(&CMatrix::identity(4), 2, 2, &MeasurementOptConfig::default())
                .unwrap()
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn reduction_matches_partial_trace_of_sigma() {
        let u = random_unitary::<f64>(6, 3);
        let (sigma, rho) = assemble(&u, 3, 2, 2).unwrap();
        let traced = sigma.marginal(&[1, 2]).unwrap();
        assert!(traced.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        assert!(rho.eigenvalues()[0] > -1e-12);
    }

    #[test]
    fn random_reductions_stay_below_the_separable_maximum() {
        for seed in 0..5 {
            let u = random_unitary::<f64>(6, seed);
            let d = objective(&u, 3, 2, &MeasurementOptConfig::default()).unwrap();
            assert!((-1e-9..=1.0 / 3.0 + 1e-3).contains(&d), "{d}");
        }
    }

    #[test]
    fn assemble_rejects_bad_input() {
        assert!(assemble(&CMatrix::identity(4), 2, 2, 3).is_err());
        assert!(assemble(&CMatrix::identity(6), 2, 2, 2).is_err());
        assert!(assemble(&CMatrix::identity(4).scale_real(2.0), 2, 2, 2).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = small_cfg();
        c.temperatures = vec![1e-3, 1e-2];
        assert!(c.validate().is_err());
        c.temperatures = vec![0.0];
        assert!(c.validate().is_err());
        let c = AnnealConfig {
            steps_per_temp: 0,
            ..small_cfg()
        };
        assert!(anneal(&c).is_err());
    }

    #[test]
    fn infinite_temperature_accepts_everything() {
        let cfg = AnnealConfig {
            temperatures: vec![f64::INFINITY, f64::INFINITY, f64::INFINITY],
            steps_per_temp: 1,
            chains: 1,
            ..small_cfg()
        };
        let r = anneal(&cfg).unwrap();
        assert_eq!(r.trace.len(), 3);
    }

    #[test]
    fn trace_shape_and_monotone_best() {
        let cfg = small_cfg();
        let r = anneal(&cfg).unwrap();
        assert_eq!(r.trace.len(), cfg.chains * cfg.temperatures.len() * cfg.steps_per_temp);
        for chain in 0..cfg.chains {
            let bests: Vec<f64> = r.trace.iter().filter(|t| t.chain == chain).map(|t| t.best).collect();
            assert!(bests.windows(2).all(|w| w[1] >= w[0]));
        }
        assert!(r.best_u.unitarity_deviation() < 1e-12);
        assert_eq!(r.chain_best.len(), cfg.chains);
    }

    #[test]
    fn anneal_is_deterministic() {
        let a = anneal(&small_cfg()).unwrap();
        let b = anneal(&small_cfg()).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_discord, b.best_discord);
    }

    #[test]
    fn maximize_finds_simple_optimum() {
        // Maximize |U_00|^2: optimum 1.
        let schedule = Schedule {
            temperatures: vec![1e-2, 1e-3, 1e-4],
            steps_per_temp: 300,
            step_eps: 0.3,
            eps_decay: 0.7,
        };
        let mut rng = seeded_rng(4);
        let start = random_unitary::<f64>(3, 9);
        let (_, v) = maximize_over_unitaries(start, |u| u[(0, 0)].norm_sqr(), &schedule, &mut rng);
        assert!(v > 0.99, "{v}");
    }

    #[test]
    fn ua_opt_reduction_is_near_max_l4() {
        // The reduction has max_l4's mutual information 2 - log2 3.
        let (_, rho) = assemble(&ua_opt(), 3, 2, 2).unwrap();
        let mi = mutual_information(&rho).unwrap();
        assert!((mi - (2.0 - 3f64.log2())).abs() < 5e-3, "{mi}");
    }
}
