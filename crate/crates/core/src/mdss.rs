//! Candidate maximally discordant separable states in dimension `d`, built
//! from complete sets of mutually unbiased bases and from SIC-POVMs.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{inner, kron, vec_norm};
use crate::states::{z_kets, DensityMatrix};
use crate::{CMatrix, Ket, C64};

/// Tolerance of the MUB and SIC validators.
pub const STRUCTURE_TOL: f64 = 1e-10;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// `d + 1` mutually unbiased bases of `C^d`.
#[derive(Clone, Debug)]
pub struct MubFamily {
    pub d: usize,
    pub bases: Vec<Vec<Ket>>,
}

impl MubFamily {
    /// `P_k^i = |e_k^i><e_k^i|`, grouped by basis `i`.
    pub fn projectors(&self) -> Vec<Vec<CMatrix>> {
        self.bases
            .iter()
            .map(|b| b.iter().map(|k| CMatrix::outer(k)).collect())
            .collect()
    }

    /// Largest deviation from orthonormality within a basis and from
    /// `|<e|f>|² = 1/d` across bases.
    pub fn max_deviation(&self) -> f64 {
        let d = self.d as f64;
        let mut dev: f64 = 0.0;
        for (i, bi) in self.bases.iter().enumerate() {
            for (j, bj) in self.bases.iter().enumerate().skip(i) {
                for (k, e) in bi.iter().enumerate() {
                    for (l, f) in bj.iter().enumerate() {
                        let ov = inner(e, f).norm_sqr();
                        let want = match (i == j, k == l) {
                            (false, _) => 1.0 / d,
                            (true, true) => 1.0,
                            (true, false) => 0.0,
                        };
                        dev = dev.max((ov - want).abs());
                    }
                }
            }
        }
        dev
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.bases.len() == self.d + 1
            && self
                .bases
                .iter()
                .all(|b| b.len() == self.d && b.iter().all(|k| k.len() == self.d));
        if !ok {
            return Err(Error::InvalidShape(format!(
                "expected {} bases of {} kets",
                self.d + 1,
                self.d
            )));
        }
        let dev = self.max_deviation();
        if dev > STRUCTURE_TOL {
            return Err(Error::IncompleteBasis(format!(
                "bases are not mutually unbiased (deviation {dev:e})"
            )));
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complete MUB set for prime `d`. For `d = 2` these are the eigenbases of
/// `σ_z`, `σ_x`, `σ_y`; for odd `d`, the computational basis and
/// `e^k_j(n) = ω^{k n² + j n} / √d` for `k = 0..d`.
pub fn mub_family(d: usize) -> Result<MubFamily> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let bases = if d == 2 {
        let s = FRAC_1_SQRT_2;
        vec![
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
            vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
            vec![vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]],
        ]
    } else {
        let norm = 1.0 / (d as f64).sqrt();
        let computational = (0..d)
            .map(|j| (0..d).map(|n| c(if n == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let mut bases = vec![computational];
        for k in 0..d {
            bases.push(
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|n| {
                                let phase = ((k * n * n + j * n) % d) as f64 * 2.0 * PI / d as f64;
                                C64::from_polar(norm, phase)
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        bases
    };
    let fam = MubFamily { d, bases };
    fam.validate()?;
    Ok(fam)
}

/// `(1/(d(d+1))) Σ_{k,i} P_k^i ⊗ P_k^i`.
pub fn rho_max_d(d: usize) -> Result<DensityMatrix> {
    let fam = mub_family(d)?;
    let n = d * d;
    let w = 1.0 / (d * (d + 1)) as f64;
    let mut acc = CMatrix::zeros(n, n);
    for basis in fam.projectors() {
        for p in basis {
            acc = &acc + &kron(&p, &p).scale_real(w);
        }
    }
    crate::states::make_density(acc, vec![d, d])
}

/// `d²` rank-one projectors with pairwise overlap `1/(d+1)`.
#[derive(Clone, Debug)]
pub struct SicFamily {
    pub d: usize,
    pub kets: Vec<Ket>,
}

impl SicFamily {
    pub fn projectors(&self) -> Vec<CMatrix> {
        self.kets.iter().map(|k| CMatrix::outer(k)).collect()
    }

    /// Largest deviation from `(1/d) Σ Z_k = I` and `tr(Z_k Z_k') = 1/(d+1)`.
    pub fn max_deviation(&self) -> f64 {
        let d = self.d;
        let mut sum = CMatrix::zeros(d, d);
        for p in self.projectors() {
            sum = &sum + &p;
        }
        let mut dev = sum.scale_real(1.0 / d as f64).max_abs_diff(&CMatrix::identity(d));
        let want = 1.0 / (d + 1) as f64;
        for (i, a) in self.kets.iter().enumerate() {
            dev = dev.max((vec_norm(a) - 1.0).abs());
            for b in &self.kets[i + 1..] {
                dev = dev.max((inner(a, b).norm_sqr() - want).abs());
            }
        }
        dev
    }

    pub fn validate(&self) -> Result<()> {
        if self.kets.len() != self.d * self.d || self.kets.iter().any(|k| k.len() != self.d) {
            return Err(Error::InvalidShape(format!(
                "expected {} kets of length {}",
                self.d * self.d,
                self.d
            )));
        }
        let dev = self.max_deviation();
        if dev > STRUCTURE_TOL {
            return Err(Error::NotASic(dev));
        }
        Ok(())
    }
}

/// The qubit tetrahedron, with the same kets and phases as [`z_kets`].
pub fn sic_tetrahedron() -> SicFamily {
    SicFamily { d: 2, kets: z_kets() }
}

/// Weyl-Heisenberg orbit `X^j Z^k |ψ>` with `X|n> = |n+1>` and
/// `Z|n> = ω^n |n>`, validated before return.
pub fn sic_from_fiducial(d: usize, fiducial: &[C64]) -> Result<SicFamily> {
    if d == 0 || fiducial.len() != d {
        return Err(Error::InvalidShape(format!(
            "fiducial has length {}, expected {d}",
            fiducial.len()
        )));
    }
    let norm = vec_norm(fiducial);
    if (norm - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::TraceNotOne(norm * norm));
    }
    let mut kets = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let mut v = vec![C64::new(0.0, 0.0); d];
            for (n, &amp) in fiducial.iter().enumerate() {
                let phase = ((k * n) % d) as f64 * 2.0 * PI / d as f64;
                v[(n + j) % d] = amp * C64::from_polar(1.0, phase);
            }
            kets.push(v);
        }
    }
    let fam = SicFamily { d, kets };
    fam.validate()?;
    Ok(fam)
}

/// Fiducial for `d = 2`: Bloch vector `(1, 1, 1)/√3`.
pub fn qubit_fiducial() -> Ket {
    crate::states::bloch_ket((1.0 / 3f64.sqrt()).acos(), PI / 4.0)
}

/// `(1/d²) Σ_k Z_k ⊗ Z_k`.
pub fn rho_tilde_max_d(sic: &SicFamily) -> Result<DensityMatrix> {
    sic.validate()?;
    let d = sic.d;
    let w = 1.0 / (d * d) as f64;
    let mut acc = CMatrix::zeros(d * d, d * d);
    for p in sic.projectors() {
        acc = &acc + &kron(&p, &p).scale_real(w);
    }
    crate::states::make_density(acc, vec![d, d])
}
