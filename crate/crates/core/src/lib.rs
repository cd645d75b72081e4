//! Quantum discord of bipartite states, classical-quantum extensions of
//! separable states, and annealed searches for discord-maximizing
//! extensions.
//!
//! The dense linear algebra in [`linalg`] is generic over [`RealScalar`];
//! the physics modules work in `f64` through the aliases below.

pub mod correlations;
pub mod error;
pub mod extension;
pub mod figures;
pub mod genuine;
pub mod linalg;
pub mod mdss;
pub mod scalar;
pub mod search;
pub mod states;

pub use error::{Error, Result};
pub use scalar::RealScalar;

/// Complex scalar used by the physics modules.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision complex matrix.
pub type CMatrix = linalg::Matrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = linalg::Matrix<f32>;
/// Double-precision eigendecomposition.
pub type EigResult = linalg::EigResult<f64>;
/// A pure state vector.
pub type Ket = Vec<C64>;
