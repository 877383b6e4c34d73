//! Random-unitary constructions: recursive dephasing, cyclic permutations,
//! maximal mixing and depolarization, the explicit RU Kraus set
//! `{Π_m N_x / √(n·2^(n-1))}`, the transformation matrix `T` and
//! Hilbert-Schmidt expansions over RU operators.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::channels::{check_probability, KrausSet};
use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{svd, vectorized_columns, ComplexMatrix, SolveCache};
use crate::scalar::{re, Real};
use crate::states::DensityMatrix;

/// Default cap on `n` for explicit RU set generation.
pub const DEFAULT_SET_CAP: usize = 16;
/// Relative tolerance for expansion residuals.
pub const EXPANSION_TOL: f64 = 1e-10;
/// Tolerance for the family relations `M = T·E`.
pub const RELATION_TOL: f64 = 1e-12;

/// Sorted list of 1-based levels whose sign is flipped. The empty list is
/// the "no flips" vector `x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignIndexVector {
    flips: Vec<usize>,
}

impl SignIndexVector {
    pub fn none() -> Self {
        Self::default()
    }

    /// Validates `1 ≤ x_1 < x_2 < … ≤ n`.
    pub fn new(flips: Vec<usize>, n: usize) -> Result<Self> {
        let sorted = flips.windows(2).all(|w| w[0] < w[1]);
        if !sorted || flips.iter().any(|&k| k == 0 || k > n) {
            return Err(QchanError::InvalidSignVector { indices: flips, n });
        }
        Ok(Self { flips })
    }

    pub fn flips(&self) -> &[usize] {
        &self.flips
    }

    pub fn is_none(&self) -> bool {
        self.flips.is_empty()
    }

    /// Diagonal signs `s_i ∈ {±1}` of `N_x` on `n` levels.
    fn signs(&self, n: usize) -> Vec<i8> {
        let mut s = vec![1i8; n];
        for &k in &self.flips {
            s[k - 1] = -1;
        }
        s
    }

    fn complement(&self, n: usize) -> Self {
        Self {
            flips: (1..=n).filter(|k| !self.flips.contains(k)).collect(),
        }
    }
}

impl fmt::Display for SignIndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flips.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "({})", self.flips.iter().join(","))
        }
    }
}

fn check_level(what: &'static str, k: usize, lo: usize, hi: usize) -> Result<()> {
    if k < lo || k > hi {
        return Err(QchanError::OutOfRange {
            what,
            value: format!("{k} (allowed {lo}..={hi})"),
        });
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(QchanError::OutOfRange {
            what: "dimension n (need n >= 2)",
            value: n.to_string(),
        });
    }
    Ok(())
}

fn sign_diag<T: Real>(s: &[i8]) -> ComplexMatrix<T> {
    let d: Vec<T> = s.iter().map(|&x| T::of(x as f64)).collect();
    ComplexMatrix::from_real_diag(&d)
}

/// `N_k = I - 2·E_(k,k)` for `1 ≤ k ≤ n`.
pub fn n_flip<T: Real>(k: usize, n: usize) -> Result<ComplexMatrix<T>> {
    check_level("flip level k", k, 1, n)?;
    n_flip_multi(&SignIndexVector { flips: vec![k] }, n)
}

/// `N_x = I - 2·Σ_k E_(x_k,x_k)`; `N_0 = I`.
pub fn n_flip_multi<T: Real>(x: &SignIndexVector, n: usize) -> Result<ComplexMatrix<T>> {
    let x = SignIndexVector::new(x.flips.clone(), n)?;
    Ok(sign_diag(&x.signs(n)))
}

/// `Λ_k(ρ) = ½ρ + ½N_k ρ N_k` for `1 ≤ k ≤ n-1`.
pub fn dephase_step<T: Real>(rho: &DensityMatrix<T>, k: usize) -> Result<DensityMatrix<T>> {
    let n = rho.dim();
    check_level("dephasing step k", k, 1, n.saturating_sub(1))?;
    Ok(DensityMatrix::trusted(&dephase_matrix(rho.matrix(), k)))
}

// (N ρ N)_ij = s_i s_j ρ_ij, so the average keeps entries with s_i = s_j.
fn dephase_matrix<T: Real>(m: &ComplexMatrix<T>, k: usize) -> ComplexMatrix<T> {
    let flipped = |i: usize| i + 1 == k;
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if flipped(i) != flipped(j) {
                out[(i, j)] = Complex::zero();
            }
        }
    }
    out
}

/// Full dephasing `Δ = Λ_(n-1)∘…∘Λ_1`: keeps only the diagonal.
pub fn dephase_full<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let mut m = rho.matrix().clone();
    for k in 1..rho.dim() {
        m = dephase_matrix(&m, k);
    }
    DensityMatrix::trusted(&m)
}

fn shift(m: usize, i: usize, n: usize) -> usize {
    (m - 1 + i) % n
}

/// Cyclic permutation `Π_m` whose row `i` is the elementary row `(m-1+i) mod n`.
pub fn permutation_matrix<T: Real>(m: usize, n: usize) -> Result<ComplexMatrix<T>> {
    check_level("permutation index m", m, 1, n)?;
    let one = re(T::one());
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if j == shift(m, i, n) {
            one
        } else {
            Complex::zero()
        }
    }))
}

/// `(1/n)·Σ_m Π_m ρ Π_m^dag`.
pub fn permutation_channel<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let n = rho.dim();
    let r = rho.matrix();
    let w = T::one() / T::of(n as f64);
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex::zero();
        for m in 1..=n {
            acc += r[(shift(m, i, n), shift(m, j, n))];
        }
        acc * w
    });
    DensityMatrix::trusted(&out)
}

/// Maximal mixing `Π(Δ(ρ))`, equal to `I/n` for every state.
pub fn maximal_mixing<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    permutation_channel(&dephase_full(rho))
}

/// Depolarization `p·M(ρ) + (1-p)·ρ` through the RU maximal-mixing channel.
pub fn depolarize_ru<T: Real>(rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
    check_probability(p)?;
    let mixed = maximal_mixing(rho);
    let out = &mixed.matrix().scale_real(p) + &rho.matrix().scale_real(T::one() - p);
    Ok(DensityMatrix::trusted(&out))
}

/// The `2^(n-1)` sign vectors: `0`, then all `k`-subsets of `1..=n` in
/// lexicographic order for `k = 1, 2, …`, truncated after `2^(n-1)` entries.
pub fn enumerate_sign_vectors(n: usize) -> Result<Vec<SignIndexVector>> {
    check_dim(n)?;
    let z = half_count(n)?;
    let all = std::iter::once(SignIndexVector::none()).chain(
        (1..=n).flat_map(|k| (1..=n).combinations(k).map(|flips| SignIndexVector { flips })),
    );
    Ok(all.take(z).collect())
}

fn half_count(n: usize) -> Result<usize> {
    1usize
        .checked_shl(n as u32 - 1)
        .filter(|_| n <= usize::BITS as usize)
        .ok_or(QchanError::TooLarge { n, cap: usize::BITS as usize })
}

/// Number of operators `n·2^(n-1)` in the RU set.
pub fn ru_set_size(n: usize) -> Result<usize> {
    check_dim(n)?;
    half_count(n)?
        .checked_mul(n)
        .ok_or(QchanError::TooLarge { n, cap: usize::BITS as usize })
}

/// Position of one operator `(1/√N)·Π_m N_x` in the RU set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuLabel {
    /// 1-based permutation family `m`.
    pub family: usize,
    pub signs: SignIndexVector,
}

impl fmt::Display for RuLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pi_{} N_{}", self.family, self.signs)
    }
}

/// `(1/√(n·2^(n-1)))·Π_m N_x`.
pub fn ru_operator<T: Real>(label: &RuLabel, n: usize) -> Result<ComplexMatrix<T>> {
    let norm = T::one() / T::of(ru_set_size(n)? as f64).sqrt();
    let pi = permutation_matrix::<T>(label.family, n)?;
    let nx = n_flip_multi::<T>(&label.signs, n)?;
    Ok((&pi * &nx).scale_real(norm))
}

/// Labels of the full RU set: `m` ascending, then sign vectors in
/// enumeration order.
pub fn ru_labels(n: usize) -> Result<Vec<RuLabel>> {
    let signs = enumerate_sign_vectors(n)?;
    Ok((1..=n)
        .flat_map(|family| {
            signs.iter().map(move |s| RuLabel {
                family,
                signs: s.clone(),
            })
        })
        .collect())
}

/// Explicit RU Kraus set for `n ≤` [`DEFAULT_SET_CAP`].
pub fn ru_kraus_set<T: Real>(n: usize) -> Result<KrausSet<T>> {
    ru_kraus_set_with_cap(n, DEFAULT_SET_CAP)
}

pub fn ru_kraus_set_with_cap<T: Real>(n: usize, cap: usize) -> Result<KrausSet<T>> {
    check_dim(n)?;
    if n > cap {
        return Err(QchanError::TooLarge { n, cap });
    }
    let labels = ru_labels(n)?;
    let ops = labels
        .par_iter()
        .map(|l| ru_operator(l, n))
        .collect::<Result<Vec<_>>>()?;
    KrausSet::new(ops, format!("ru-maximal-mixing-n{n}"))
}

/// `T = (1/√(n·2^(n-1)))·(Ω - 2·Σ_(k=1..n-1) E_(k+1,k))`, `Ω` the all-ones matrix.
pub fn transformation_t<T: Real>(n: usize) -> Result<ComplexMatrix<T>> {
    let norm = T::one() / T::of(ru_set_size(n)? as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            re(-norm)
        } else {
            re(norm)
        }
    }))
}

/// Elementary matrices supporting `Π_m`, ordered by column.
pub fn family_support<T: Real>(m: usize, n: usize) -> Result<Vec<ComplexMatrix<T>>> {
    check_level("permutation index m", m, 1, n)?;
    Ok((0..n)
        .map(|k| ComplexMatrix::elementary((k + n - (m - 1)) % n, k, n))
        .collect())
}

/// Which RU operators form the `n²`-element HS basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RuBasisSelection {
    /// Indices into the full RU set ordering.
    pub operator_indices: Vec<usize>,
    pub labels: Vec<RuLabel>,
}

/// A selection of RU operators together with the operators themselves.
#[derive(Debug, Clone)]
pub struct RuBasis<T> {
    pub n: usize,
    pub selection: RuBasisSelection,
    pub operators: KrausSet<T>,
}

impl<T: Real> RuBasis<T> {
    pub fn from_labels(n: usize, labels: Vec<RuLabel>, name: &str) -> Result<Self> {
        let z = half_count(n)?;
        let signs = enumerate_sign_vectors(n)?;
        let mut indices = Vec::with_capacity(labels.len());
        let mut ops = Vec::with_capacity(labels.len());
        for l in &labels {
            let pos = signs.iter().position(|s| *s == l.signs).ok_or_else(|| {
                QchanError::InvalidSignVector {
                    indices: l.signs.flips.clone(),
                    n,
                }
            })?;
            indices.push((l.family - 1) * z + pos);
            ops.push(ru_operator(l, n)?);
        }
        Ok(Self {
            n,
            selection: RuBasisSelection {
                operator_indices: indices,
                labels,
            },
            operators: KrausSet::raw(ops, name)?,
        })
    }

    /// The full RU set as an (overcomplete) basis.
    pub fn full(n: usize) -> Result<Self> {
        Self::from_labels(n, ru_labels(n)?, "ru-full")
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    fn position(&self, family: usize, signs: &SignIndexVector) -> Option<usize> {
        self.selection
            .labels
            .iter()
            .position(|l| l.family == family && l.signs == *signs)
    }
}

/// Certificate produced alongside [`hs_basis`].
#[derive(Debug, Clone)]
pub struct HsCertificate<T> {
    /// Largest `||Σ_l T_(r,l) E_l - M_r||_F` over all families and rows.
    pub relation_residual: T,
    /// Rank of the Gram matrix of the vectorized selection.
    pub rank: usize,
    pub expected_rank: usize,
    pub determinant: Complex<T>,
}

/// The first `n` operators of every permutation family, verified to span
/// all `n x n` matrices.
pub fn hs_basis<T: Real>(n: usize) -> Result<(RuBasis<T>, HsCertificate<T>)> {
    check_dim(n)?;
    let signs = enumerate_sign_vectors(n)?;
    let labels: Vec<RuLabel> = (1..=n)
        .flat_map(|family| {
            signs[..n].iter().map(move |s| RuLabel {
                family,
                signs: s.clone(),
            })
        })
        .collect();
    let basis = RuBasis::<T>::from_labels(n, labels, "ru-hs-basis")?;
    let cert = certify(&basis)?;
    if cert.relation_residual > T::tol(RELATION_TOL) || cert.rank != cert.expected_rank {
        return Err(QchanError::Internal(format!(
            "RU selection is not an HS basis: relation residual {:e}, rank {}/{}",
            cert.relation_residual.as_f64(),
            cert.rank,
            cert.expected_rank
        )));
    }
    Ok((basis, cert))
}

fn certify<T: Real>(basis: &RuBasis<T>) -> Result<HsCertificate<T>> {
    let n = basis.n;
    let t = transformation_t::<T>(n)?;
    let ops = basis.operators.operators();
    let mut worst = T::zero();
    for m in 1..=n {
        let support = family_support::<T>(m, n)?;
        for r in 0..n {
            let mut combo = ComplexMatrix::zeros(n, n);
            for (l, e) in support.iter().enumerate() {
                combo += &e.scale(t[(r, l)]);
            }
            worst = worst.max((&combo - &ops[(m - 1) * n + r]).frobenius_norm());
        }
    }
    let gram = gram_matrix(ops);
    Ok(HsCertificate {
        relation_residual: worst,
        rank: svd(&gram)?.rank(T::tol(crate::linalg::RANK_TOL)),
        expected_rank: n * n,
        determinant: t.determinant()?,
    })
}

/// HS Gram matrix `G_(k,l) = tr(A_k^dag A_l)`.
pub fn gram_matrix<T: Real>(ops: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(ops.len(), ops.len(), |k, l| ops[k].hs_inner(&ops[l]))
}

/// Coefficients `c` with `A = Σ c_k·B_k`, by least squares over the
/// vectorized basis operators.
pub fn hs_expand<T: Real>(a: &ComplexMatrix<T>, basis: &KrausSet<T>) -> Result<Vec<Complex<T>>> {
    let cache = expansion_cache(basis)?;
    expand_with(&cache, a, basis)
}

/// Row `j` holds the coefficients of operator `j` of `set`.
pub fn hs_expand_set<T: Real>(set: &KrausSet<T>, basis: &KrausSet<T>) -> Result<ComplexMatrix<T>> {
    let cache = expansion_cache(basis)?;
    let rows = set
        .operators()
        .iter()
        .map(|a| expand_with(&cache, a, basis))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexMatrix::from_fn(rows.len(), basis.len(), |j, k| rows[j][k]))
}

fn expansion_cache<T: Real>(basis: &KrausSet<T>) -> Result<SolveCache<T>> {
    SolveCache::new(&vectorized_columns(basis.operators()))
}

fn expand_with<T: Real>(
    cache: &SolveCache<T>,
    a: &ComplexMatrix<T>,
    basis: &KrausSet<T>,
) -> Result<Vec<Complex<T>>> {
    if a.shape() != (basis.dim_out(), basis.dim_in()) {
        return Err(dim_mismatch(
            format!("{}x{}", basis.dim_out(), basis.dim_in()),
            format!("{:?}", a.shape()),
        ));
    }
    let sol = cache.solve(&a.vectorize())?;
    check_residual(sol.residual, a)?;
    Ok(sol.x)
}

fn check_residual<T: Real>(residual: T, a: &ComplexMatrix<T>) -> Result<()> {
    let tol = T::tol(EXPANSION_TOL) * a.frobenius_norm().max(T::one());
    if !(residual <= tol) {
        return Err(QchanError::ExpansionResidual {
            residual: residual.as_f64(),
        });
    }
    Ok(())
}

/// Expansion built entry by entry from the two-term identity
/// `E_(j,k) = (√N/2)·(M_(m,0) - M_(m,k))`, where `Π_m` has its 1 at `(j, k)`.
/// When `N_k` itself is not in the set its negative `N_(complement)` is used.
/// Works on overcomplete or partial bases as long as the needed labels exist.
pub fn pair_expand<T: Real>(a: &ComplexMatrix<T>, basis: &RuBasis<T>) -> Result<Vec<Complex<T>>> {
    let n = basis.n;
    if a.shape() != (n, n) {
        return Err(dim_mismatch(format!("{n}x{n}"), format!("{:?}", a.shape())));
    }
    let half = T::of(ru_set_size(n)? as f64).sqrt() * T::of(0.5);
    let mut coeffs = vec![Complex::zero(); basis.len()];
    for j in 0..n {
        for k in 0..n {
            let v = a[(j, k)];
            if v.is_zero() {
                continue;
            }
            let family = (k + n - j) % n + 1;
            let missing = || QchanError::OutOfRange {
                what: "pair-expansion support",
                value: format!("E({},{}) needs family {family}", j + 1, k + 1),
            };
            let single = SignIndexVector { flips: vec![k + 1] };
            let i0 = basis.position(family, &SignIndexVector::none()).ok_or_else(missing)?;
            let w = v * half;
            coeffs[i0] += w;
            if let Some(ik) = basis.position(family, &single) {
                coeffs[ik] -= w;
            } else {
                let ic = basis.position(family, &single.complement(n)).ok_or_else(missing)?;
                coeffs[ic] += w;
            }
        }
    }
    let mut fitted = ComplexMatrix::zeros(n, n);
    for (ck, op) in coeffs.iter().zip(basis.operators.operators()) {
        fitted += &op.scale(*ck);
    }
    check_residual((&fitted - a).frobenius_norm(), a)?;
    Ok(coeffs)
}

/// [`pair_expand`] for every operator of `set`; row `j` belongs to operator `j`.
pub fn pair_expand_set<T: Real>(set: &KrausSet<T>, basis: &RuBasis<T>) -> Result<ComplexMatrix<T>> {
    let rows = set
        .operators()
        .iter()
        .map(|a| pair_expand(a, basis))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexMatrix::from_fn(rows.len(), basis.len(), |j, k| rows[j][k]))
}
