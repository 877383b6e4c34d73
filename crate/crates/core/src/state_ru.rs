//! State-dependent random-unitary decomposition: for a pure input `ψ` and
//! any output `ρ'`, unitaries `U_j` with `U_j ψ = e_j` and weights `λ_j`
//! (the spectrum of `ρ'`) give `Σ λ_j U_j ψψ^dag U_j^dag = ρ'`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::channels::KrausSet;
use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{complete_by_gram_schmidt, eig_hermitian, ComplexMatrix};
use crate::scalar::{c, Real};
use crate::states::{DensityMatrix, PureState};

/// Eigenvalues of `ρ'` at or below this value are not part of the rank.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Largest `||ρ² - ρ||_F` accepted for a "pure" density-matrix input.
pub const PURITY_TOL: f64 = 1e-8;
/// Largest accepted `| ||v|| - 1 |` for basis construction.
pub const NORM_TOL: f64 = 1e-12;

/// How a unit vector is completed to a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// Phase-corrected Householder reflection; `e_1` maps to exactly `I`.
    #[default]
    Householder,
    /// Gram-Schmidt over the standard basis in index order.
    GramSchmidt,
}

/// Weights, unitaries and Kraus operators `K_j = √λ_j U_j`.
#[derive(Debug, Clone)]
pub struct StateRuDecomposition<T> {
    pub weights: Vec<T>,
    pub unitaries: Vec<ComplexMatrix<T>>,
    pub kraus: KrausSet<T>,
}

impl<T: Real> StateRuDecomposition<T> {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// `Σ_j K_j ψψ^dag K_j^dag`
    pub fn reconstruct(&self, psi: &PureState<T>) -> Result<DensityMatrix<T>> {
        self.kraus.apply(&DensityMatrix::from_pure(psi))
    }
}

/// Unitary whose first column is `v`, completed by [`Completion::Householder`].
pub fn eigbasis_with_first_column<T: Real>(v: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
    eigbasis_with_completion(v, Completion::Householder)
}

pub fn eigbasis_with_completion<T: Real>(v: &[Complex<T>], completion: Completion) -> Result<ComplexMatrix<T>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if v.is_empty() || !((norm - T::one()).abs() <= T::tol(NORM_TOL)) {
        return Err(QchanError::InvalidState {
            reason: format!("basis vector must have unit norm, got {}", norm.as_f64()),
        });
    }
    Ok(match completion {
        Completion::Householder => householder(v),
        Completion::GramSchmidt => complete_by_gram_schmidt(v),
    })
}

// H = I - 2uu^dag/|u|^2 with u = v + e^{iφ}e_1 sends e_1 to -e^{-iφ}v, so
// H·diag(-e^{iφ}, 1, …, 1) has first column v.
fn householder<T: Real>(v: &[Complex<T>]) -> ComplexMatrix<T> {
    let n = v.len();
    let r0 = v[0].norm();
    let phase: Complex<T> = if r0 > T::zero() { v[0] / r0 } else { Complex::one() };
    let mut u = v.to_vec();
    u[0] += phase;
    let unorm = u.iter().map(|z| z.norm_sqr()).sum::<T>();
    let two = T::of(2.0) / unorm;
    let mut q = ComplexMatrix::from_fn(n, n, |i, j| {
        let id: Complex<T> = if i == j { Complex::one() } else { Complex::zero() };
        id - u[i] * u[j].conj() * two
    });
    // the diagonal phase only touches column 0, which is v by construction
    q.set_column(0, v);
    q
}

/// Decomposes the pair `(ψ, ρ')` with the default completion.
pub fn decompose<T: Real>(psi: &PureState<T>, rho_out: &DensityMatrix<T>) -> Result<StateRuDecomposition<T>> {
    decompose_with(psi, rho_out, Completion::Householder)
}

pub fn decompose_with<T: Real>(
    psi: &PureState<T>,
    rho_out: &DensityMatrix<T>,
    completion: Completion,
) -> Result<StateRuDecomposition<T>> {
    let n = psi.dim();
    if rho_out.dim() != n {
        return Err(dim_mismatch(n, rho_out.dim()));
    }
    let eig = eig_hermitian(rho_out.matrix(), None)?;
    let cutoff = T::tol(RANK_CUTOFF);
    let rank = eig.values.iter().filter(|&&l| l > cutoff).count().max(1);
    let eps_in = eigbasis_with_completion(psi.amplitudes(), completion)?;
    let eps_in_adj = eps_in.adjoint();

    let mut weights = Vec::with_capacity(rank);
    let mut unitaries = Vec::with_capacity(rank);
    let mut kraus = Vec::with_capacity(rank);
    for j in 0..rank {
        let lambda = eig.values[j].max(T::zero());
        let eps_out = eigbasis_with_completion(&eig.vectors.column(j), completion)?;
        let u = &eps_out * &eps_in_adj;
        kraus.push(u.scale(c(lambda.sqrt(), T::zero())));
        unitaries.push(u);
        weights.push(lambda);
    }
    Ok(StateRuDecomposition {
        weights,
        unitaries,
        kraus: KrausSet::new(kraus, "state-dependent-ru")?,
    })
}

/// As [`decompose`] for an input given as a density matrix, which must be pure.
pub fn decompose_density<T: Real>(
    rho_in: &DensityMatrix<T>,
    rho_out: &DensityMatrix<T>,
) -> Result<StateRuDecomposition<T>> {
    let m = rho_in.matrix();
    let defect = (&(m * m) - m).frobenius_norm();
    if defect > T::tol(PURITY_TOL) {
        return Err(QchanError::NonPureInput {
            defect: defect.as_f64(),
        });
    }
    let eig = eig_hermitian(m, None)?;
    let psi = PureState::normalized(eig.vectors.column(0))?;
    decompose(&psi, rho_out)
}
