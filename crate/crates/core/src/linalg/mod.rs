//! Dense complex linear algebra: the matrix type, eigendecomposition,
//! exponential, inverse and conditioning.

mod decomp;
mod eig;
mod expm;
mod matrix;

pub use decomp::{
    cholesky, cond, identity_residual, inverse, rank, singular_values, solve, svd_right, Lu,
    SINGULAR_COND,
};
pub use eig::{
    clustered_eigenbasis, eig, eig_with_tol, eigenvalues, hessenberg, modified_gram_schmidt, schur,
    sort_order, sorted_eigenvalues, ClusteredEigenbasis, Eigensystem, Schur, DEFAULT_RTOL,
};
pub use expm::{expm, propagator};
pub use matrix::{
    basis_vector, conj_vec, dot, norm, normalized, vec_distance, ComplexMatrix, C64, I, ONE, ZERO,
};

/// Pauli x matrix `[[0, 1], [1, 0]]`.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("static shape")
}
