//! Data behind the discord-vs-entanglement plots: Haar-random scatter,
//! parameter sweeps over the built-in families, and the `ρ_β` lower curve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    binary_entropy, concurrence, discord, discord_alpha_analytic, eof_from_concurrence, MeasurementOptConfig,
};
use crate::error::{Error, Result};
use crate::linalg::Side;
use crate::states::{family_state, haar_state, Family};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub rank: usize,
    pub index: usize,
    pub eof: f64,
    pub discord: f64,
}

/// Seed of sample `index` of the given rank; decorrelated by SplitMix64.
pub fn sample_seed(seed: u64, rank: usize, index: usize) -> u64 {
    let mut z = seed
        .wrapping_add((rank as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` Haar-random two-qubit states of each rank, with EoF and discord
/// measured on `a`. Rows are ordered by `(rank, index)` regardless of
/// scheduling.
pub fn scatter(n: usize, ranks: &[usize], seed: u64, cfg: &MeasurementOptConfig) -> Result<Vec<ScatterRow>> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be >= 1".into()));
    }
    if let Some(&r) = ranks.iter().find(|&&r| r == 0 || r > 4) {
        return Err(Error::ParameterOutOfRange {
            name: "rank",
            value: r as f64,
            lo: 1.0,
            hi: 4.0,
        });
    }
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = ranks.iter().flat_map(|&r| (0..n).map(move |i| (r, i))).collect();
    jobs.into_par_iter()
        .map(|(rank, index)| {
            let rho = haar_state(4, rank, sample_seed(seed, rank, index))?.with_dims(vec![2, 2])?;
            Ok(ScatterRow {
                rank,
                index,
                eof: eof_from_concurrence(concurrence(&rho)?),
                discord: discord(&rho, Side::A, cfg)?,
            })
        })
        .collect()
}

/// Discord of `ρ_β` at concurrence `c`: `1 - h((1 + c)/2)`.
pub fn beta_discord_at_concurrence(c: f64) -> f64 {
    1.0 - binary_entropy(0.5 * (1.0 + c.clamp(0.0, 1.0)))
}

/// Inverse of `C ↦ EoF(C)` on `[0, 1]` by bisection.
pub fn concurrence_from_eof(eof: f64) -> f64 {
    let target = eof.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if eof_from_concurrence(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Discord of the `ρ_β` state with the given entanglement of formation.
pub fn beta_lower_discord(eof: f64) -> f64 {
    beta_discord_at_concurrence(concurrence_from_eof(eof))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub param: f64,
    pub discord: f64,
    pub eof: f64,
    /// Closed form, for the alpha family only.
    pub analytic: Option<f64>,
}

/// `n ≥ 2` equally spaced points over the family's parameter range.
pub fn param_grid(family: Family, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = family
        .param_range()
        .ok_or_else(|| Error::InvalidConfig(format!("family {family} has no parameter")))?;
    if n < 2 {
        return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

pub fn family_curve(family: Family, grid: &[f64], cfg: &MeasurementOptConfig) -> Result<Vec<CurveRow>> {
    grid.par_iter()
        .map(|&p| {
            let rho = family_state(family, Some(p))?;
            Ok(CurveRow {
                param: p,
                discord: discord(&rho, Side::A, cfg)?,
                eof: eof_from_concurrence(concurrence(&rho)?),
                analytic: if family == Family::Alpha {
                    Some(discord_alpha_analytic(p)?)
                } else {
                    None
                },
            })
        })
        .collect()
}
