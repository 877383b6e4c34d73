use num_complex::Complex;

use crate::error::{QchanError, Result};
use crate::linalg::jacobi::{complete_orthonormal, norm, Rotation};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real};

const MAX_SWEEPS: usize = 100;

/// Relative singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// `A = W·Σ·X^dag` with `W` (rows x rows) and `X` (cols x cols) unitary and
/// `Σ` holding `min(rows, cols)` descending nonnegative values.
#[derive(Debug, Clone)]
pub struct SvdFactors<T> {
    pub left: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub right: ComplexMatrix<T>,
}

impl<T: Real> SvdFactors<T> {
    pub fn sigma_matrix(&self) -> ComplexMatrix<T> {
        let mut s = ComplexMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, &v) in self.singular_values.iter().enumerate() {
            s[(i, i)] = re(v);
        }
        s
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        &(&self.left * &self.sigma_matrix()) * &self.right.adjoint()
    }

    pub fn sigma_max(&self) -> T {
        self.singular_values.first().copied().unwrap_or(T::zero())
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cut = rel_tol * self.sigma_max();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<SvdFactors<T>> {
    if !a.is_finite() {
        return Err(QchanError::NonFinite);
    }
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint());
        return Ok(SvdFactors {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        });
    }
    Ok(svd_tall(a))
}

fn svd_tall<T: Real>(a: &ComplexMatrix<T>) -> SvdFactors<T> {
    let (m, n) = a.shape();
    let mut u = a.clone().into_vec();
    let mut v = ComplexMatrix::<T>::identity(n).into_vec();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::new(T::zero(), T::zero());
                for k in 0..m {
                    let xp = u[k * n + p];
                    let xq = u[k * n + q];
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    gamma += xp.conj() * xq;
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                let Some(rot) = Rotation::annihilating(alpha, beta, gamma) else {
                    continue;
                };
                rot.apply_right(&mut u, m, n, p, q);
                rot.apply_right(&mut v, n, n, p, q);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..m).map(|i| u[i * n + j]).collect()).collect();
    let sig: Vec<T> = cols.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap_or(std::cmp::Ordering::Equal));

    let sigma_max = order.first().map_or(T::zero(), |&i| sig[i]);
    let cut = sigma_max * eps * T::of(m.max(n) as f64);
    let mut left_cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(m);
    let mut singular_values = Vec::with_capacity(n);
    let mut right = ComplexMatrix::zeros(n, n);
    let vm = ComplexMatrix::from_row_major(n, n, v).expect("finite rotations");
    for (dst, &src) in order.iter().enumerate() {
        singular_values.push(sig[src]);
        right.set_column(dst, &vm.column(src));
        if sig[src] > cut && sig[src] > T::zero() {
            left_cols.push(cols[src].iter().map(|&z| z / sig[src]).collect());
        }
    }
    let kept = left_cols.len();
    complete_orthonormal(&mut left_cols, m);
    // completed columns fill the slots of the dropped (negligible) values
    let left = ComplexMatrix::from_columns(&left_cols);
    debug_assert!(kept <= n);
    SvdFactors {
        left,
        singular_values,
        right,
    }
}

/// Right polar decomposition `A = U·Pos` of a square matrix.
///
/// `U = W·X^dag` is unitary; `Pos = X·Σ·X^dag` is Hermitian positive
/// semidefinite. On rank-deficient input `U` is the SVD completion.
pub fn polar_right<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    if !a.is_square() {
        return Err(QchanError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let f = svd(a)?;
    let x = &f.right;
    let u = &f.left * &x.adjoint();
    let pos = x.sandwich(&ComplexMatrix::from_real_diag(&f.singular_values));
    Ok((u, pos.hermitian_part()))
}

/// Number of singular values above `tol · σ_max`.
pub fn rank<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<usize> {
    Ok(svd(a)?.rank(tol))
}

/// Least-squares solution of `basis · x ≈ target`.
#[derive(Debug, Clone)]
pub struct LinearSolution<T> {
    pub x: Vec<Complex<T>>,
    /// `||basis·x - target||_2`
    pub residual: T,
}

/// Solves `basis · x ≈ target` in the least-squares sense.
///
/// The basis must have full column rank: every singular value above
/// [`RANK_TOL`] times the largest.
pub fn solve_linear<T: Real>(basis: &ComplexMatrix<T>, target: &[Complex<T>]) -> Result<LinearSolution<T>> {
    SolveCache::new(basis)?.solve(target)
}

/// Factorized basis reused across several right-hand sides.
#[derive(Debug, Clone)]
pub struct SolveCache<T> {
    basis: ComplexMatrix<T>,
    pseudo_inverse: ComplexMatrix<T>,
}

impl<T: Real> SolveCache<T> {
    pub fn new(basis: &ComplexMatrix<T>) -> Result<Self> {
        let (m, k) = basis.shape();
        let f = svd(basis)?;
        let sigma_max = f.sigma_max();
        let sigma_min = if m < k {
            T::zero()
        } else {
            f.singular_values.last().copied().unwrap_or(T::zero())
        };
        if k == 0 || sigma_max == T::zero() || sigma_min <= T::tol(RANK_TOL) * sigma_max {
            return Err(QchanError::RankDeficientBasis {
                sigma_min: sigma_min.as_f64(),
                sigma_max: sigma_max.as_f64(),
            });
        }
        // X Σ^-1 W_k^dag
        let inv_sigma: Vec<T> = f.singular_values.iter().map(|&s| T::one() / s).collect();
        let wk = ComplexMatrix::from_fn(m, k, |i, j| f.left[(i, j)]);
        let pinv = &(&f.right * &ComplexMatrix::from_real_diag(&inv_sigma)) * &wk.adjoint();
        Ok(Self {
            basis: basis.clone(),
            pseudo_inverse: pinv,
        })
    }

    pub fn solve(&self, target: &[Complex<T>]) -> Result<LinearSolution<T>> {
        if target.len() != self.basis.rows() {
            return Err(crate::error::dim_mismatch(self.basis.rows(), target.len()));
        }
        let x = self.pseudo_inverse.matvec(target);
        let fitted = self.basis.matvec(&x);
        let residual = fitted
            .iter()
            .zip(target)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt();
        Ok(LinearSolution { x, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random(r: usize, k: usize, rng: &mut impl Rng) -> M {
        M::from_fn(r, k, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn zero_matrix_has_zero_singular_values() {
        let f = svd(&M::zeros(3, 3)).unwrap();
        assert!(f.singular_values.iter().all(|&s| s == 0.0));
        assert!(f.left.unitarity_defect() < 1e-15);
        assert!(f.right.unitarity_defect() < 1e-15);
    }

    #[test]
    fn permutation_has_unit_singular_values() {
        let p = M::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
        ]);
        let f = svd(&p).unwrap();
        for s in f.singular_values {
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn random_shapes_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(r, k) in &[(1, 1), (3, 3), (5, 2), (2, 5), (8, 8), (16, 5), (4, 9)] {
            let a = random(r, k, &mut rng);
            let f = svd(&a).unwrap();
            assert!(f.left.unitarity_defect() < 1e-12);
            assert!(f.right.unitarity_defect() < 1e-12);
            let err = (&f.reconstruct() - &a).frobenius_norm();
            assert!(err <= 1e-10 * a.frobenius_norm(), "{r}x{k}: {err}");
            assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = &random(6, 2, &mut rng) * &random(2, 6, &mut rng);
        let f = svd(&a).unwrap();
        assert_eq!(f.rank(1e-9), 2);
        assert!((&f.reconstruct() - &a).frobenius_norm() < 1e-12 * a.frobenius_norm());
        assert!(f.left.unitarity_defect() < 1e-12);
    }

    #[test]
    fn polar_of_unitary_is_trivial() {
        let p = M::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (u, pos) = polar_right(&p).unwrap();
        assert!(u.approx_eq(&p, 1e-14));
        assert!(pos.approx_eq(&M::identity(2), 1e-14));
    }

    #[test]
    fn polar_of_rank_deficient_diagonal() {
        let a = M::from_real_diag(&[2.0, 0.0]);
        let (u, pos) = polar_right(&a).unwrap();
        assert!(pos.approx_eq(&a, 1e-14));
        assert!(u.unitarity_defect() < 1e-14);
        assert!((&u * &pos).approx_eq(&a, 1e-14));
    }

    #[test]
    fn polar_random_is_unitary_times_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random(5, 5, &mut rng);
        let (u, pos) = polar_right(&a).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert!(pos.hermiticity_defect() < 1e-12);
        assert!((&u * &pos).approx_eq(&a, 1e-12));
    }

    #[test]
    fn solve_identity_basis() {
        let t = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0)];
        let s = solve_linear(&M::identity(3), &t).unwrap();
        for (x, y) in s.x.iter().zip(&t) {
            assert!((*x - *y).norm() < 1e-15);
        }
        assert!(s.residual < 1e-15);
    }

    #[test]
    fn solve_recovers_known_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let basis = random(9, 5, &mut rng);
        let coeffs: Vec<_> = (0..5).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let target = basis.matvec(&coeffs);
        let s = solve_linear(&basis, &target).unwrap();
        let tn = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(s.residual < 1e-10 * tn);
        for (x, y) in s.x.iter().zip(&coeffs) {
            assert!((*x - *y).norm() < 1e-10);
        }
    }

    #[test]
    fn solve_rejects_dependent_columns() {
        let b = M::from_real_rows(&[&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0]]);
        assert!(matches!(
            solve_linear(&b, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Err(QchanError::RankDeficientBasis { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&M::identity(4), 1e-9).unwrap(), 4);
        let psi = vec![c(0.6, 0.0), c(0.0, 0.8)];
        assert_eq!(rank(&M::outer(&psi, &psi), 1e-9).unwrap(), 1);
        assert_eq!(rank(&M::zeros(3, 3), 1e-9).unwrap(), 0);
    }
}
