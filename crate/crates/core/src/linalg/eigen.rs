use crate::error::{QchanError, Result};
use crate::linalg::jacobi::{fix_phase, Rotation};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are in descending order. Column `j` of `vectors` is the unit
/// eigenvector for `values[j]`, with its largest-magnitude component real and
/// nonnegative.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `ε·diag(λ)·ε^dag`
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d = ComplexMatrix::from_real_diag(&self.values);
        self.vectors.sandwich(&d)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Default hermiticity tolerance: `1e-10 · dim · max(1, ||A||_F)`.
pub fn default_hermiticity_tol<T: Real>(a: &ComplexMatrix<T>) -> T {
    T::tol(1e-10) * T::of(a.rows().max(1) as f64) * a.frobenius_norm().max(T::one())
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// `tol` bounds `||A - A^dag||_F`; `None` uses [`default_hermiticity_tol`].
/// The Hermitian part of `A` is decomposed.
pub fn eig_hermitian<T: Real>(a: &ComplexMatrix<T>, tol: Option<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(QchanError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(QchanError::NonFinite);
    }
    let tol = tol.unwrap_or_else(|| default_hermiticity_tol(a));
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(QchanError::NonHermitianInput {
            defect: defect.as_f64(),
            tol: tol.as_f64(),
        });
    }

    let n = a.rows();
    let mut work = a.hermitian_part();
    for i in 0..n {
        work[(i, i)] = re(work[(i, i)].re);
    }
    let mut data = work.into_vec();
    let mut vecs = ComplexMatrix::<T>::identity(n).into_vec();

    let scale = data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let stop = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off += data[p * n + q].norm_sqr();
            }
        }
        let off = (off + off).sqrt();
        if off <= stop || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let app = data[p * n + p].re;
                let aqq = data[q * n + q].re;
                let apq = data[p * n + q];
                let Some(rot) = Rotation::annihilating(app, aqq, apq) else {
                    continue;
                };
                rot.apply_right(&mut data, n, n, p, q);
                rot.apply_left_adjoint(&mut data, n, p, q);
                data[p * n + q] = re(T::zero());
                data[q * n + p] = re(T::zero());
                data[p * n + p] = re(app - rot.t * rot.offdiag_abs);
                data[q * n + q] = re(aqq + rot.t * rot.offdiag_abs);
                rot.apply_right(&mut vecs, n, n, p, q);
            }
        }
    }

    let raw_vals: Vec<T> = (0..n).map(|i| data[i * n + i].re).collect();
    let raw_vecs = ComplexMatrix::from_row_major(n, n, vecs)?;
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps lower original index first among ties
    order.sort_by(|&i, &j| {
        raw_vals[j]
            .partial_cmp(&raw_vals[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = raw_vecs.column(src);
        fix_phase(&mut col);
        vectors.set_column(dst, &col);
        values.push(raw_vals[src]);
    }
    Ok(HermitianEigen { values, vectors })
}
