//! Density matrices, pure states, samplers and Bloch-space metrics.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::rng::{complex_gaussian, ginibre};
use crate::scalar::{re, Real};

/// Eigenvalues at or below this are treated as zero when truncating ranks.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, trace and positivity, each to `1e-10`.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(matrix, T::tol(1e-10))
    }

    pub fn with_tolerance(matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate(tol)?;
        Ok(rho)
    }

    /// Wraps the Hermitian part of `matrix` without checking trace or positivity.
    pub(crate) fn trusted(matrix: &ComplexMatrix<T>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    /// `I / n`
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n).scale_real(T::one() / T::of(n as f64)),
        }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(psi: &PureState<T>) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    /// Diagonal state from probabilities summing to one.
    pub fn from_probabilities(p: &[T]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(p))
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() {
            return Err(QchanError::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(QchanError::InvalidDensity {
                reason: "empty matrix".into(),
            });
        }
        if !m.is_finite() {
            return Err(QchanError::NonFinite);
        }
        let herm = m.hermiticity_defect();
        if herm > tol {
            return Err(QchanError::InvalidDensity {
                reason: format!("hermiticity defect {:e}", herm.as_f64()),
            });
        }
        let tr = m.trace();
        if (tr - re(T::one())).norm() > tol {
            return Err(QchanError::InvalidDensity {
                reason: format!("trace {} != 1", tr.re.as_f64()),
            });
        }
        let min = self.min_eigenvalue()?;
        if min < -tol {
            return Err(QchanError::InvalidDensity {
                reason: format!("negative eigenvalue {:e}", min.as_f64()),
            });
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        let e = eig_hermitian(&self.matrix.hermitian_part(), None)?;
        Ok(e.values.last().copied().unwrap_or(T::zero()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> T {
        let m = &self.matrix;
        let n = m.rows();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        acc
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Requires `||amplitudes||_2 = 1` to `1e-12`.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QchanError::InvalidState {
                reason: "empty vector".into(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !norm.is_finite() || (norm - T::one()).abs() > T::tol(1e-12) {
            return Err(QchanError::InvalidState {
                reason: format!("norm {} != 1", norm.as_f64()),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(QchanError::InvalidState {
                reason: "zero or non-finite vector".into(),
            });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(k: usize, n: usize) -> Self {
        let mut a = vec![Complex::zero(); n];
        a[k] = re(T::one());
        Self { amplitudes: a }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn projector(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Bloch purity `(n·tr(ρ²) - 1) / (n - 1)`; not clamped.
pub fn bloch_purity<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let n = rho.dim();
    if n < 2 {
        return Err(QchanError::OutOfRange {
            what: "dimension for Bloch purity",
            value: n.to_string(),
        });
    }
    let nf = T::of(n as f64);
    Ok((nf * rho.purity() - T::one()) / (nf - T::one()))
}

/// Squared Bloch-vector distance `n/(n-1) · tr((A - B)²)`.
pub fn bloch_distance_sq<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    bloch_distance_sq_matrices(a.matrix(), b.matrix())
}

/// [`bloch_distance_sq`] on raw Hermitian matrices of equal size.
pub fn bloch_distance_sq_matrices<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return Err(dim_mismatch(format!("{:?}", a.shape()), format!("{:?}", b.shape())));
    }
    let n = a.rows();
    if n < 2 || !a.is_square() {
        return Err(QchanError::OutOfRange {
            what: "dimension for Bloch distance",
            value: n.to_string(),
        });
    }
    let d = a - b;
    let mut tr = T::zero();
    for i in 0..n {
        for j in 0..n {
            tr += (d[(i, j)] * d[(j, i)]).re;
        }
    }
    let nf = T::of(n as f64);
    Ok(nf / (nf - T::one()) * tr)
}

/// Ginibre-ensemble mixed state `G·G^dag / tr(G·G^dag)`.
pub fn random_density<T: Real>(n: usize, rng: &mut impl Rng) -> DensityMatrix<T> {
    assert!(n >= 1, "dimension must be positive");
    let g = ginibre::<T>(n, n, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::trusted(&w.scale_real(T::one() / tr))
}

/// Normalized complex Gaussian vector.
pub fn random_pure<T: Real>(n: usize, rng: &mut impl Rng) -> PureState<T> {
    assert!(n >= 1, "dimension must be positive");
    loop {
        let v: Vec<Complex<T>> = (0..n).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

/// Tensor product `A ⊗ B`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

/// Trace over the second tensor factor of a `(n_sys·n_anc)`-square matrix.
pub fn partial_trace_second<T: Real>(m: &ComplexMatrix<T>, n_sys: usize, n_anc: usize) -> Result<ComplexMatrix<T>> {
    let d = n_sys * n_anc;
    if m.shape() != (d, d) {
        return Err(dim_mismatch(format!("{d}x{d}"), format!("{:?}", m.shape())));
    }
    Ok(ComplexMatrix::from_fn(n_sys, n_sys, |i, j| {
        (0..n_anc).fold(Complex::zero(), |acc, a| acc + m[(i * n_anc + a, j * n_anc + a)])
    }))
}

/// Reduced state of the system factor.
pub fn partial_trace_ancilla<T: Real>(rho: &DensityMatrix<T>, n_sys: usize, n_anc: usize) -> Result<DensityMatrix<T>> {
    Ok(DensityMatrix::trusted(&partial_trace_second(rho.matrix(), n_sys, n_anc)?))
}

/// Purification `Σ_j √λ_j |e_j⟩⊗|j⟩` on `n·R` levels, `R = rank(ρ)`.
pub fn purify<T: Real>(rho: &DensityMatrix<T>) -> Result<PureState<T>> {
    let n = rho.dim();
    let eig = eig_hermitian(rho.matrix(), None)?;
    let cutoff = T::tol(SPECTRAL_CUTOFF);
    let r = eig.values.iter().filter(|&&l| l > cutoff).count().max(1);
    let mut amp = vec![Complex::zero(); n * r];
    for j in 0..r {
        let w = eig.values[j].max(T::zero()).sqrt();
        for i in 0..n {
            amp[i * r + j] = eig.vectors[(i, j)] * w;
        }
    }
    PureState::normalized(amp)
}
