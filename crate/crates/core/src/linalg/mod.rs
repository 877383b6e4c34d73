//! Deterministic dense complex-matrix kernels.

mod eigen;
mod jacobi;
mod matrix;
mod svd;

pub use eigen::{default_hermiticity_tol, eig_hermitian, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use svd::{polar_right, rank, solve_linear, svd, LinearSolution, SolveCache, SvdFactors, RANK_TOL};

use num_complex::Complex;

use crate::scalar::Real;

/// Stacks the vectorized operators as columns of one matrix.
pub fn vectorized_columns<T: Real>(ops: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let cols: Vec<Vec<Complex<T>>> = ops.iter().map(ComplexMatrix::vectorize).collect();
    ComplexMatrix::from_columns(&cols)
}

/// Completes a unit vector to a unitary by Gram-Schmidt over the standard
/// basis, keeping `v` as the first column.
pub fn complete_by_gram_schmidt<T: Real>(v: &[Complex<T>]) -> ComplexMatrix<T> {
    let mut basis = vec![v.to_vec()];
    jacobi::complete_orthonormal(&mut basis, v.len());
    ComplexMatrix::from_columns(&basis)
}
