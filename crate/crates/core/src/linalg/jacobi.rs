//! Complex Jacobi plane rotations shared by the eigen and SVD kernels.

use num_complex::Complex;
use num_traits::One;

use crate::scalar::{c, Real, C};

/// Unitary 2x2 rotation `G = [[c, s], [-s·conj(e), c·conj(e)]]` acting on the
/// (p, q) plane, where `e` is the unit phase of the off-diagonal entry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation<T> {
    pub c: T,
    pub s: T,
    /// `conj(e)`
    pub phase_conj: Complex<T>,
    /// `t = s / c`; shifts the diagonal by `∓ t·|a_pq|`.
    pub t: T,
    pub offdiag_abs: T,
}

impl<T: Real> Rotation<T> {
    /// Rotation diagonalizing the Hermitian block `[[app, apq], [conj(apq), aqq]]`
    /// via `G^dag A G`. Returns `None` when `apq` is exactly zero.
    pub fn annihilating(app: T, aqq: T, apq: Complex<T>) -> Option<Self> {
        let b = apq.norm();
        if b == T::zero() || !b.is_finite() {
            return None;
        }
        let e = apq / b;
        let theta = (aqq - app) / (b + b);
        let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
        let t = sgn / (theta.abs() + (theta * theta + T::one()).sqrt());
        let cs = T::one() / (t * t + T::one()).sqrt();
        Some(Self {
            c: cs,
            s: t * cs,
            phase_conj: e.conj(),
            t,
            offdiag_abs: b,
        })
    }

    /// Entries `(g_pp, g_pq, g_qp, g_qq)`.
    #[inline]
    pub fn entries(&self) -> (Complex<T>, Complex<T>, Complex<T>, Complex<T>) {
        let cc = c(self.c, T::zero());
        let ss = c(self.s, T::zero());
        (cc, ss, -(ss * self.phase_conj), cc * self.phase_conj)
    }

    /// Columns `p`, `q` of the row-major `rows x cols` buffer are replaced by `[col_p col_q]·G`.
    #[inline]
    pub fn apply_right(&self, data: &mut [Complex<T>], rows: usize, cols: usize, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..rows {
            let xp = data[k * cols + p];
            let xq = data[k * cols + q];
            data[k * cols + p] = xp * gpp + xq * gqp;
            data[k * cols + q] = xp * gpq + xq * gqq;
        }
    }

    /// Rows `p`, `q` are replaced by `G^dag·[row_p; row_q]`.
    #[inline]
    pub fn apply_left_adjoint(&self, data: &mut [Complex<T>], cols: usize, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..cols {
            let xp = data[p * cols + k];
            let xq = data[q * cols + k];
            data[p * cols + k] = gpp.conj() * xp + gqp.conj() * xq;
            data[q * cols + k] = gpq.conj() * xp + gqq.conj() * xq;
        }
    }
}

/// Multiplies `v` by the conjugate phase of its largest-magnitude component
/// (lowest index on ties) so that component becomes real and nonnegative.
pub(crate) fn fix_phase<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_abs = T::zero();
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if best_abs == T::zero() {
        return;
    }
    let ph = (v[best] / best_abs).conj();
    for z in v.iter_mut() {
        *z *= ph;
    }
    v[best] = c(v[best].re.abs(), T::zero());
}

pub(crate) fn dot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter().zip(v).fold(C::<T>::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a.conj() * b)
}

pub(crate) fn norm<T: Real>(u: &[Complex<T>]) -> T {
    u.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Extends `basis` (orthonormal vectors of length `dim`) to a full orthonormal
/// basis by Gram-Schmidt over the standard basis vectors in index order.
/// Candidates that lose more than half their norm are skipped; if that leaves
/// the basis short, the remaining slots take the best remaining candidate.
pub(crate) fn complete_orthonormal<T: Real>(basis: &mut Vec<Vec<Complex<T>>>, dim: usize) {
    let half = T::of(0.5);
    for candidate in 0..dim {
        if basis.len() >= dim {
            break;
        }
        let v = residual_of_unit(basis, candidate, dim);
        let nv = norm(&v);
        if nv > half {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    while basis.len() < dim {
        let (v, nv) = (0..dim)
            .map(|k| {
                let v = residual_of_unit(basis, k, dim);
                let nv = norm(&v);
                (v, nv)
            })
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("dim > 0");
        basis.push(v.into_iter().map(|x| x / nv).collect());
    }
}

// e_k minus its projection on `basis`, two passes of classical Gram-Schmidt
fn residual_of_unit<T: Real>(basis: &[Vec<Complex<T>>], k: usize, dim: usize) -> Vec<Complex<T>> {
    let mut v = vec![C::new(T::zero(), T::zero()); dim];
    v[k] = C::one();
    for _ in 0..2 {
        for b in basis {
            let proj = dot(b, &v);
            for (x, &bb) in v.iter_mut().zip(b) {
                *x -= proj * bb;
            }
        }
    }
    v
}
