//! Kraus-set channels: application, completeness, unitary relation between
//! Kraus sets of the same channel and channel-equality tests.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{svd, vectorized_columns, ComplexMatrix};
use crate::rng::{random_unitary, stream_rng};
use crate::scalar::{c, Real};
use crate::states::{bloch_distance_sq, random_density, DensityMatrix};

/// Completeness tolerance per input dimension.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Residual tolerance for [`unitary_relate`].
pub const RELATION_TOL: f64 = 1e-8;

/// Ordered Kraus operators sharing one `dim_out x dim_in` shape.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet<T> {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<ComplexMatrix<T>>,
    label: String,
    non_trace_preserving: bool,
}

impl<T: Real> KrausSet<T> {
    /// Builds a set expected to be complete. An incomplete set is accepted
    /// with a logged warning; [`apply`](Self::apply) rejects it later.
    pub fn new(operators: Vec<ComplexMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        let set = Self::build(operators, label.into(), false)?;
        let defect = set.completeness_defect();
        if defect > set.completeness_tol() {
            log::warn!(
                "Kraus set '{}' is incomplete: ||sum K^dag K - I||_F = {:e}",
                set.label,
                defect.as_f64()
            );
        }
        Ok(set)
    }

    /// Builds a set that is not meant to be trace preserving (raw projector
    /// lists, unweighted intermediates). No completeness warning is issued.
    pub fn raw(operators: Vec<ComplexMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        Self::build(operators, label.into(), true)
    }

    fn build(operators: Vec<ComplexMatrix<T>>, label: String, non_trace_preserving: bool) -> Result<Self> {
        let first = operators.first().ok_or(QchanError::EmptyKrausSet)?;
        let (dim_out, dim_in) = first.shape();
        if let Some(bad) = operators.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(dim_mismatch(
                format!("{dim_out}x{dim_in}"),
                format!("{:?}", bad.shape()),
            ));
        }
        if operators.iter().any(|k| !k.is_finite()) {
            return Err(QchanError::NonFinite);
        }
        Ok(Self {
            dim_in,
            dim_out,
            operators,
            label,
            non_trace_preserving,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    pub fn into_operators(self) -> Vec<ComplexMatrix<T>> {
        self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_flagged_non_trace_preserving(&self) -> bool {
        self.non_trace_preserving
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `Σ K^dag K`
    pub fn gram_sum(&self) -> ComplexMatrix<T> {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.operators {
            acc += &(&k.adjoint() * k);
        }
        acc
    }

    /// `||Σ K^dag K - I||_F`
    pub fn completeness_defect(&self) -> T {
        (&self.gram_sum() - &ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    fn completeness_tol(&self) -> T {
        T::tol(COMPLETENESS_TOL) * T::of(self.dim_in as f64)
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_defect() <= self.completeness_tol()
    }

    /// `Σ K X K^dag` on any `dim_in`-square matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(dim_mismatch(
                format!("{0}x{0}", self.dim_in),
                format!("{:?}", x.shape()),
            ));
        }
        let mut acc = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.operators {
            acc += &k.sandwich(x);
        }
        Ok(acc)
    }

    /// `Σ K ρ K^dag`; the set must be complete.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let defect = self.completeness_defect();
        if defect > self.completeness_tol() {
            return Err(QchanError::IncompleteKrausSet {
                defect: defect.as_f64(),
            });
        }
        Ok(DensityMatrix::trusted(&self.apply_matrix(rho.matrix())?))
    }

    /// Operators scaled by `s`.
    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            operators: self.operators.iter().map(|k| k.scale(s)).collect(),
            ..self.clone()
        }
    }
}

/// `||Σ K^dag K - I||_F`
pub fn check_completeness<T: Real>(k: &KrausSet<T>) -> T {
    k.completeness_defect()
}

/// Depolarizing channel `p·I/n + (1-p)·ρ` evaluated directly.
pub fn depolarize_reference<T: Real>(rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
    check_probability(p)?;
    let n = rho.dim();
    let mixed = ComplexMatrix::identity(n).scale_real(p / T::of(n as f64));
    let out = &mixed + &rho.matrix().scale_real(T::one() - p);
    Ok(DensityMatrix::trusted(&out))
}

pub(crate) fn check_probability<T: Real>(p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(QchanError::OutOfRange {
            what: "probability p",
            value: p.as_f64().to_string(),
        });
    }
    Ok(())
}

/// Pauli matrices `σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z`.
pub fn pauli<T: Real>(k: usize) -> ComplexMatrix<T> {
    let (o, z) = (T::one(), T::zero());
    let e = match k {
        0 => [c(o, z), c(z, z), c(z, z), c(o, z)],
        1 => [c(z, z), c(o, z), c(o, z), c(z, z)],
        2 => [c(z, z), c(z, -o), c(z, o), c(z, z)],
        3 => [c(o, z), c(z, z), c(z, z), c(-o, z)],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_fn(2, 2, |i, j| e[2 * i + j])
}

/// Single-qubit depolarizing set `{√(1-3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`.
pub fn pauli_depolarizing<T: Real>(p: T) -> Result<KrausSet<T>> {
    check_probability(p)?;
    let q = T::of(0.25) * p;
    let w0 = (T::one() - T::of(3.0) * q).sqrt();
    let ops = (0..4)
        .map(|k| pauli::<T>(k).scale_real(if k == 0 { w0 } else { q.sqrt() }))
        .collect();
    KrausSet::new(ops, "pauli-depolarizing")
}

/// Process matrix `Σ vec(K)·vec(K)^dag`; equal for two Kraus sets iff they
/// define the same channel.
pub fn process_matrix<T: Real>(k: &KrausSet<T>) -> ComplexMatrix<T> {
    let d = k.dim_in() * k.dim_out();
    let mut acc = ComplexMatrix::zeros(d, d);
    for op in k.operators() {
        let v = op.vectorize();
        acc += &ComplexMatrix::outer(&v, &v);
    }
    acc
}

/// `||J_A - J_B||_F` between process matrices.
pub fn process_distance<T: Real>(a: &KrausSet<T>, b: &KrausSet<T>) -> Result<T> {
    check_same_dims(a, b)?;
    Ok((&process_matrix(a) - &process_matrix(b)).frobenius_norm())
}

fn check_same_dims<T: Real>(a: &KrausSet<T>, b: &KrausSet<T>) -> Result<()> {
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out) {
        return Err(dim_mismatch(
            format!("{}x{}", a.dim_out, a.dim_in),
            format!("{}x{}", b.dim_out, b.dim_in),
        ));
    }
    Ok(())
}

/// Outcome of [`unitary_relate`].
#[derive(Debug, Clone)]
pub enum UnitaryRelation<T> {
    /// `E_k = Σ_l U_(k,l) G_l` after zero-padding the shorter set.
    Related { unitary: ComplexMatrix<T>, residual: T },
    NotRelated { residual: T, unitarity_defect: T },
}

impl<T: Real> UnitaryRelation<T> {
    pub fn unitary(&self) -> Option<&ComplexMatrix<T>> {
        match self {
            Self::Related { unitary, .. } => Some(unitary),
            Self::NotRelated { .. } => None,
        }
    }

    pub fn residual(&self) -> T {
        match self {
            Self::Related { residual, .. } | Self::NotRelated { residual, .. } => *residual,
        }
    }
}

/// Finds a unitary `U` with `E_k = Σ_l U_(k,l) G_l`.
///
/// With `A`, `B` the matrices whose columns are the vectorized (zero-padded)
/// operators, the relation reads `A = B·U^T`. The unitary closest to solving
/// it is the polar factor of `B^dag A` (orthogonal Procrustes); it is accepted
/// when the residual is below [`RELATION_TOL`]·max(1, ||A||_F).
pub fn unitary_relate<T: Real>(e: &KrausSet<T>, g: &KrausSet<T>) -> Result<UnitaryRelation<T>> {
    check_same_dims(e, g)?;
    let len = e.len().max(g.len());
    let pad = |k: &KrausSet<T>| {
        let mut ops = k.operators().to_vec();
        ops.resize(len, ComplexMatrix::zeros(k.dim_out(), k.dim_in()));
        vectorized_columns(&ops)
    };
    let a = pad(e);
    let b = pad(g);
    let f = svd(&(&b.adjoint() * &a))?;
    let v = &f.left * &f.right.adjoint();
    let residual = (&a - &(&b * &v)).frobenius_norm();
    let unitary = v.transpose();
    let unitarity_defect = unitary.unitarity_defect();
    let tol = T::tol(RELATION_TOL) * a.frobenius_norm().max(T::one());
    if residual <= tol && unitarity_defect <= tol {
        Ok(UnitaryRelation::Related { unitary, residual })
    } else {
        Ok(UnitaryRelation::NotRelated {
            residual,
            unitarity_defect,
        })
    }
}

/// Monte-Carlo comparison of two channels on seeded random mixed inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEqualityReport<T> {
    pub max_bloch_distance_sq: T,
    pub samples: usize,
    pub seed: u64,
}

/// Applies both channels to `samples` Ginibre states (stream `i` of `seed`)
/// and reports the largest squared Bloch distance between the outputs.
pub fn channels_equal<T: Real>(
    a: &KrausSet<T>,
    b: &KrausSet<T>,
    samples: usize,
    seed: u64,
) -> Result<ChannelEqualityReport<T>> {
    check_same_dims(a, b)?;
    let n = a.dim_in();
    let distances: Vec<T> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let rho = random_density::<T>(n, &mut stream_rng(seed, i as u64));
            let out_a = DensityMatrix::trusted(&a.apply_matrix(rho.matrix())?);
            let out_b = DensityMatrix::trusted(&b.apply_matrix(rho.matrix())?);
            bloch_distance_sq(&out_a, &out_b)
        })
        .collect::<Result<_>>()?;
    let max = distances.into_iter().fold(T::zero(), T::max);
    Ok(ChannelEqualityReport {
        max_bloch_distance_sq: max,
        samples,
        seed,
    })
}

/// Identity channel `{I}` on `n` levels.
pub fn identity_channel<T: Real>(n: usize) -> KrausSet<T> {
    KrausSet::new(vec![ComplexMatrix::identity(n)], "identity").expect("nonempty")
}

/// Complete Kraus set of `count` operators on `n` levels: the first `n`
/// columns of a random `count·n` unitary, cut into `n×n` blocks.
pub fn random_kraus_set<T: Real>(n: usize, count: usize, rng: &mut impl rand::Rng) -> Result<KrausSet<T>> {
    if n == 0 || count == 0 {
        return Err(QchanError::EmptyKrausSet);
    }
    let v = random_unitary::<T>(n * count, rng);
    let ops = (0..count)
        .map(|b| ComplexMatrix::from_fn(n, n, |i, j| v[(b * n + i, j)]))
        .collect();
    KrausSet::new(ops, format!("random-{count}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::states::random_density;

    type M = ComplexMatrix<f64>;

    #[test]
    fn identity_channel_is_identity() {
        let rho = random_density::<f64>(3, &mut stream_rng(1, 0));
        let out = identity_channel::<f64>(3).apply(&rho).unwrap();
        assert!(out.matrix().approx_eq(rho.matrix(), 1e-15));
    }

    #[test]
    fn full_depolarizing_gives_maximally_mixed() {
        let k = pauli_depolarizing(1.0).unwrap();
        assert!(check_completeness(&k) < 1e-12);
        for i in 0..10 {
            let rho = random_density::<f64>(2, &mut stream_rng(2, i));
            let out = k.apply(&rho).unwrap();
            assert!(out.matrix().approx_eq(&M::identity(2).scale_real(0.5), 1e-14));
        }
    }

    #[test]
    fn pauli_set_complete_for_all_p() {
        for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
            assert!(check_completeness(&pauli_depolarizing::<f64>(p).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn incomplete_set_flagged_and_rejected() {
        let k = KrausSet::new(vec![M::identity(2).scale_real(0.5)], "half").unwrap();
        let d = check_completeness(&k);
        assert!((d - (2.0f64 * 0.75 * 0.75).sqrt()).abs() < 1e-15);
        let rho = DensityMatrix::<f64>::maximally_mixed(2);
        assert!(matches!(k.apply(&rho), Err(QchanError::IncompleteKrausSet { .. })));
    }

    #[test]
    fn depolarize_reference_examples() {
        let rho = DensityMatrix::from_probabilities(&[1.0, 0.0]).unwrap();
        let out = depolarize_reference(&rho, 0.5).unwrap();
        assert!(out.matrix().approx_eq(&M::from_real_diag(&[0.75, 0.25]), 1e-15));
        assert!(depolarize_reference(&rho, 0.0).unwrap().matrix().approx_eq(rho.matrix(), 0.0));
        assert!(depolarize_reference(&rho, 1.0)
            .unwrap()
            .matrix()
            .approx_eq(&M::from_real_diag(&[0.5, 0.5]), 1e-15));
        assert!(depolarize_reference(&rho, 1.5).is_err());
        assert!(depolarize_reference(&rho, f64::NAN).is_err());
    }

    #[test]
    fn relate_identical_sets_gives_identity() {
        let k = pauli_depolarizing(0.4).unwrap();
        let rel = unitary_relate(&k, &k).unwrap();
        let u = rel.unitary().expect("related");
        assert!(u.approx_eq(&M::identity(4), 1e-12));
    }

    #[test]
    fn relate_swapped_sets_gives_permutation() {
        let k = pauli_depolarizing(0.4).unwrap();
        let mut ops = k.operators().to_vec();
        ops.swap(1, 3);
        let g = KrausSet::new(ops, "swapped").unwrap();
        let rel = unitary_relate(&k, &g).unwrap();
        let u = rel.unitary().expect("related");
        let expected = M::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ]);
        assert!(u.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn relate_mixed_sets_with_padding() {
        let k = pauli_depolarizing(0.3).unwrap();
        let u = random_unitary::<f64>(4, &mut stream_rng(3, 3));
        let mixed: Vec<M> = (0..4)
            .map(|r| {
                let mut acc = M::zeros(2, 2);
                for l in 0..4 {
                    acc += &k.operators()[l].scale(u[(r, l)]);
                }
                acc
            })
            .collect();
        let mut padded = mixed;
        padded.push(M::zeros(2, 2));
        let g = KrausSet::new(padded, "mixed").unwrap();
        let rel = unitary_relate(&g, &k).unwrap();
        assert!(rel.unitary().is_some(), "{rel:?}");
        assert!(rel.unitary().unwrap().unitarity_defect() < 1e-10);
        let rep = channels_equal(&g, &k, 50, 1).unwrap();
        assert!(rep.max_bloch_distance_sq < 1e-9);
    }

    #[test]
    fn unrelated_channels_detected() {
        let a = pauli_depolarizing(0.3).unwrap();
        let b = pauli_depolarizing(0.6).unwrap();
        assert!(unitary_relate(&a, &b).unwrap().unitary().is_none());
        assert!(process_distance(&a, &b).unwrap() > 1e-3);
    }

    #[test]
    fn equality_report_zero_for_same_set() {
        let a = pauli_depolarizing(0.3).unwrap();
        let rep = channels_equal(&a, &a, 20, 5).unwrap();
        assert_eq!(rep.max_bloch_distance_sq, 0.0);
        assert_eq!(rep.samples, 20);
    }
}
