//! Dense complex linear algebra for small Hilbert spaces.

mod eig;
mod matrix;
mod random;
mod tensor;

pub use eig::{expm_i_hermitian, hermitian_eig, numerical_rank, sqrt_psd, svd, svd_values, EigResult, Svd};
pub use matrix::{inner, vec_norm, Matrix, MatrixEnvelope};
pub use random::{
    ginibre, orthonormalize_columns, random_unit_hermitian, random_unitary, random_unitary_with, seeded_rng,
    unitary_step, unitary_step_with,
};
pub use tensor::{kron, kron_vec, partial_trace, partial_transpose, permute_subsystems, Side};
