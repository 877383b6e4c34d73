//! Knill-Laflamme correctability checks, correctability transfer between
//! unitarily related Kraus sets, and conversion of an arbitrary Kraus set
//! into one built from a known correctable HS-complete set.

use num_traits::Zero;

use crate::channels::{check_probability, KrausSet};
use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::ru::{hs_expand_set, pair_expand_set, RuBasis, RuLabel, SignIndexVector};
use crate::scalar::{re, Real};

/// Verdict tolerance per unit of `tr(P)`.
pub const VERDICT_TOL: f64 = 1e-8;
/// Projector tolerance for `||P² - P||`.
pub const PROJECTOR_TOL: f64 = 1e-10;
/// Eigenvalues of `H` at or below this fraction of the largest are dropped.
pub const DROP_TOL: f64 = 1e-12;
/// Negative eigenvalues of `H` down to `-NEGATIVE_TOL·||H||_F` are clamped.
pub const NEGATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
}

impl Verdict {
    pub fn is_satisfied(self) -> bool {
        self == Verdict::Satisfied
    }
}

/// Measured residuals of `P E_j^dag E_k P = α_(j,k) P`.
#[derive(Debug, Clone)]
pub struct CorrectabilityReport<T> {
    pub alpha: ComplexMatrix<T>,
    /// `max_(j,k) ||P E_j^dag E_k P - α_(j,k) P||_F`
    pub max_residual: T,
    pub hermiticity_defect: T,
    /// Threshold both measures were compared against.
    pub threshold: T,
    pub verdict: Verdict,
}

/// Checks `P = P^dag = P²` and returns `tr(P)`.
pub fn validate_projector<T: Real>(p: &ComplexMatrix<T>) -> Result<T> {
    if !p.is_square() {
        return Err(QchanError::NonSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let defect = p.projector_defect();
    let tr = p.trace().re;
    let tol = T::tol(PROJECTOR_TOL) * p.frobenius_norm().max(T::one());
    if defect > tol || !(tr > T::of(0.5)) {
        return Err(QchanError::NotAProjector {
            defect: defect.as_f64(),
        });
    }
    Ok(tr)
}

fn projected<T: Real>(e: &KrausSet<T>, p: &ComplexMatrix<T>) -> Result<Vec<ComplexMatrix<T>>> {
    if p.rows() != e.dim_in() {
        return Err(dim_mismatch(e.dim_in(), p.rows()));
    }
    Ok(e.operators().iter().map(|k| k * p).collect())
}

/// `α_(l,m) = tr(P E_l^dag E_m P) / tr(P)`.
pub fn build_alpha<T: Real>(e: &KrausSet<T>, p: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let tr = validate_projector(p)?;
    let ep = projected(e, p)?;
    Ok(alpha_from_projected(&ep, tr))
}

fn alpha_from_projected<T: Real>(ep: &[ComplexMatrix<T>], tr: T) -> ComplexMatrix<T> {
    // tr((E_l P)^dag (E_m P)) = <E_l P, E_m P>_HS
    ComplexMatrix::from_fn(ep.len(), ep.len(), |l, m| ep[l].hs_inner(&ep[m]) / tr)
}

/// Builds the candidate `α` and measures the correctability residuals with
/// the default [`VERDICT_TOL`].
pub fn check_correctability<T: Real>(e: &KrausSet<T>, p: &ComplexMatrix<T>) -> Result<CorrectabilityReport<T>> {
    check_correctability_with_tol(e, p, T::tol(VERDICT_TOL))
}

/// As [`check_correctability`]; the verdict threshold is `tol·tr(P)`.
pub fn check_correctability_with_tol<T: Real>(
    e: &KrausSet<T>,
    p: &ComplexMatrix<T>,
    tol: T,
) -> Result<CorrectabilityReport<T>> {
    let tr = validate_projector(p)?;
    let ep = projected(e, p)?;
    let alpha = alpha_from_projected(&ep, tr);
    Ok(measure(&ep, p, alpha, tol * tr))
}

fn measure<T: Real>(
    ep: &[ComplexMatrix<T>],
    p: &ComplexMatrix<T>,
    alpha: ComplexMatrix<T>,
    threshold: T,
) -> CorrectabilityReport<T> {
    let mut worst = T::zero();
    for (j, a) in ep.iter().enumerate() {
        let a_adj = a.adjoint();
        for (k, b) in ep.iter().enumerate() {
            let lhs = &a_adj * b;
            worst = worst.max((&lhs - &p.scale(alpha[(j, k)])).frobenius_norm());
        }
    }
    let herm = alpha.hermiticity_defect();
    let verdict = if worst <= threshold && herm <= threshold {
        Verdict::Satisfied
    } else {
        Verdict::Violated
    };
    CorrectabilityReport {
        alpha,
        max_residual: worst,
        hermiticity_defect: herm,
        threshold,
        verdict,
    }
}

/// Set `G_l = Σ_m conj(U_(m,l)) E_m`, so that `E_k = Σ_l U_(k,l) G_l`.
pub fn unitary_mix<T: Real>(e: &KrausSet<T>, u: &ComplexMatrix<T>) -> Result<KrausSet<T>> {
    if u.shape() != (e.len(), e.len()) {
        return Err(dim_mismatch(
            format!("{0}x{0}", e.len()),
            format!("{:?}", u.shape()),
        ));
    }
    let ops = (0..e.len())
        .map(|l| {
            let mut acc = ComplexMatrix::zeros(e.dim_out(), e.dim_in());
            for (m, em) in e.operators().iter().enumerate() {
                acc += &em.scale(u[(m, l)].conj());
            }
            acc
        })
        .collect();
    KrausSet::raw(ops, format!("{}-mixed", e.label()))
}

/// `β_(j,k) = Σ_(l,m) U_(l,j) conj(U_(m,k)) α_(l,m)`, i.e. `β = U^T α conj(U)`.
pub fn transfer_alpha<T: Real>(alpha: &ComplexMatrix<T>, u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &(&u.transpose() * alpha) * &u.conj()
}

/// Predicts `β` for the unitarily mixed set [`unitary_mix`]`(E, U)` and
/// measures that set's residuals against it.
pub fn transfer_correctability<T: Real>(
    e: &KrausSet<T>,
    alpha: &ComplexMatrix<T>,
    u: &ComplexMatrix<T>,
    p: &ComplexMatrix<T>,
) -> Result<CorrectabilityReport<T>> {
    let defect = u.unitarity_defect();
    if !u.is_square() || defect > T::tol(1e-10) * T::of(u.rows().max(1) as f64) {
        return Err(QchanError::NonUnitary {
            defect: defect.as_f64(),
        });
    }
    if alpha.shape() != (e.len(), e.len()) {
        return Err(dim_mismatch(
            format!("{0}x{0}", e.len()),
            format!("{:?}", alpha.shape()),
        ));
    }
    let tr = validate_projector(p)?;
    let g = unitary_mix(e, u)?;
    let gp = projected(&g, p)?;
    Ok(measure(&gp, p, transfer_alpha(alpha, u), T::tol(VERDICT_TOL) * tr))
}

/// Output of [`convert`]: expansion coefficients, the Hermitian matrix
/// `H`, its spectrum, and the converted Kraus sets.
#[derive(Debug, Clone)]
pub struct ConversionResult<T> {
    /// `F_j = Σ_k m_(j,k) E_k`
    pub m: ComplexMatrix<T>,
    /// `H_(k,l) = Σ_j m_(j,k) conj(m_(j,l))`
    pub h: ComplexMatrix<T>,
    /// All eigenvalues of `H`, descending, negatives clamped to zero.
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
    /// Indices `r` retained in `f_tilde`.
    pub kept: Vec<usize>,
    /// `G_r = Σ_k (ε_H)_(k,r) E_k` for every `r`.
    pub g: KrausSet<T>,
    /// `F̃_r = √λ_r G_r` for the retained `r`.
    pub f_tilde: KrausSet<T>,
}

impl<T: Real> ConversionResult<T> {
    pub fn kept_eigenvalues(&self) -> Vec<T> {
        self.kept.iter().map(|&r| self.eigenvalues[r]).collect()
    }

    /// Eigenvector columns for the retained eigenvalues.
    pub fn kept_eigenvectors(&self) -> ComplexMatrix<T> {
        let cols: Vec<_> = self.kept.iter().map(|&r| self.eigenvectors.column(r)).collect();
        ComplexMatrix::from_columns(&cols)
    }

    /// `γ` of the converted set given the basis `α`.
    pub fn gamma(&self, alpha: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        gamma_matrix(&self.kept_eigenvalues(), &self.kept_eigenvectors(), alpha)
    }
}

/// Converts `F` using least-squares coefficients over a full-rank `basis`.
pub fn convert<T: Real>(f: &KrausSet<T>, basis: &KrausSet<T>) -> Result<ConversionResult<T>> {
    let m = hs_expand_set(f, basis)?;
    convert_from_coefficients(f, basis, m)
}

/// Converts `F` using the two-term elementary-matrix expansion over RU
/// operators; works for overcomplete or partial RU bases.
pub fn convert_pairs<T: Real>(f: &KrausSet<T>, basis: &RuBasis<T>) -> Result<ConversionResult<T>> {
    let m = pair_expand_set(f, basis)?;
    convert_from_coefficients(f, &basis.operators, m)
}

/// Conversion with caller-supplied coefficients `m` (rows index `F_j`).
pub fn convert_from_coefficients<T: Real>(
    f: &KrausSet<T>,
    basis: &KrausSet<T>,
    m: ComplexMatrix<T>,
) -> Result<ConversionResult<T>> {
    let (nf, nb) = (f.len(), basis.len());
    if m.shape() != (nf, nb) {
        return Err(dim_mismatch(format!("{nf}x{nb}"), format!("{:?}", m.shape())));
    }
    if (f.dim_in(), f.dim_out()) != (basis.dim_in(), basis.dim_out()) {
        return Err(dim_mismatch(
            format!("{}x{}", basis.dim_out(), basis.dim_in()),
            format!("{}x{}", f.dim_out(), f.dim_in()),
        ));
    }
    let fitted = combine_rows(&m, basis);
    let worst = fitted
        .iter()
        .zip(f.operators())
        .map(|(a, b)| (a - b).frobenius_norm() / b.frobenius_norm().max(T::one()))
        .fold(T::zero(), T::max);
    if worst > T::tol(crate::ru::EXPANSION_TOL) {
        return Err(QchanError::ExpansionResidual {
            residual: worst.as_f64(),
        });
    }

    let h = (&m.transpose() * &m.conj()).hermitian_part();
    let eig = eig_hermitian(&h, None)?;
    let floor = -T::tol(NEGATIVE_TOL) * h.frobenius_norm().max(T::one());
    if let Some(&bad) = eig.values.iter().find(|&&l| l < floor) {
        return Err(QchanError::NegativeEigenvalue { value: bad.as_f64() });
    }
    let values: Vec<T> = eig.values.iter().map(|&l| l.max(T::zero())).collect();
    let lmax = values.first().copied().unwrap_or(T::zero());
    let kept: Vec<usize> = (0..values.len())
        .filter(|&r| values[r] > T::tol(DROP_TOL) * lmax)
        .collect();

    let g_ops = combine_rows(&eig.vectors.transpose(), basis);
    let f_ops: Vec<_> = kept.iter().map(|&r| g_ops[r].scale_real(values[r].sqrt())).collect();
    let g = KrausSet::raw(g_ops, format!("{}-g", f.label()))?;
    let f_tilde = if f_ops.is_empty() {
        // F ≡ 0: keep one zero operator so the set is well-formed
        KrausSet::raw(vec![ComplexMatrix::zeros(f.dim_out(), f.dim_in())], "converted")?
    } else {
        KrausSet::new(f_ops, format!("{}-converted", f.label()))?
    };
    Ok(ConversionResult {
        m,
        h,
        eigenvalues: values,
        eigenvectors: eig.vectors,
        kept,
        g,
        f_tilde,
    })
}

/// `Σ_k c_(j,k) B_k` for every row `j` of `c`.
fn combine_rows<T: Real>(c: &ComplexMatrix<T>, basis: &KrausSet<T>) -> Vec<ComplexMatrix<T>> {
    (0..c.rows())
        .map(|j| {
            let mut acc = ComplexMatrix::zeros(basis.dim_out(), basis.dim_in());
            for (k, b) in basis.operators().iter().enumerate() {
                let w = c[(j, k)];
                if !w.is_zero() {
                    acc += &b.scale(w);
                }
            }
            acc
        })
        .collect()
}

/// `γ_(j,k) = √(λ_j λ_k) Σ_(s,r) conj(ε_(s,j)) ε_(r,k) α_(s,r)`.
pub fn gamma_matrix<T: Real>(
    lambda: &[T],
    eps: &ComplexMatrix<T>,
    alpha: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    if eps.cols() != lambda.len() || alpha.shape() != (eps.rows(), eps.rows()) {
        return Err(dim_mismatch(
            format!("eps {}x{}, alpha {1}x{1}", eps.rows(), lambda.len()),
            format!("eps {:?}, alpha {:?}", eps.shape(), alpha.shape()),
        ));
    }
    let scale = lambda.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    let mut roots = Vec::with_capacity(lambda.len());
    for &l in lambda {
        if l < -T::tol(NEGATIVE_TOL) * scale {
            return Err(QchanError::NegativeEigenvalue { value: l.as_f64() });
        }
        roots.push(l.max(T::zero()).sqrt());
    }
    let core = eps.adjoint_sandwich(alpha);
    Ok(ComplexMatrix::from_fn(lambda.len(), lambda.len(), |j, k| {
        core[(j, k)] * (roots[j] * roots[k])
    }))
}

/// Ornstein-Uhlenbeck two-qubit phase noise with `q = √(1 - p²)`.
pub fn ou_channel<T: Real>(p: T) -> Result<KrausSet<T>> {
    check_probability(p)?;
    let q = (T::one() - p * p).max(T::zero()).sqrt();
    let z = T::zero();
    let diags = [
        [p * p, p, p, T::one()],
        [p * q, z, q, z],
        [q * p, q, z, z],
        [q * q, z, z, z],
    ];
    let ops = diags.iter().map(|d| ComplexMatrix::from_real_diag(d)).collect();
    KrausSet::new(ops, "ornstein-uhlenbeck")
}

/// `(1/√32)·{Π_1 N_0, Π_1 N_1, Π_1 N_2, Π_1 N_3, Π_1 N_4}` on four levels.
pub fn ou_basis<T: Real>() -> Result<RuBasis<T>> {
    let mut labels = vec![RuLabel {
        family: 1,
        signs: SignIndexVector::none(),
    }];
    for k in 1..=4 {
        labels.push(RuLabel {
            family: 1,
            signs: SignIndexVector::new(vec![k], 4)?,
        });
    }
    RuBasis::from_labels(4, labels, "ou-basis")
}

/// Closed-form expansion coefficients of [`ou_channel`] over [`ou_basis`].
pub fn coefficient_matrix_ou<T: Real>(p: T) -> ComplexMatrix<T> {
    let q = (T::one() - p * p).max(T::zero()).sqrt();
    let s = T::one() + p;
    let z = T::zero();
    let half_a = T::of(32f64.sqrt() / 2.0);
    let rows = [
        [s * s, -p * p, -p, -p, -T::one()],
        [s * q, -p * q, z, -q, z],
        [s * q, -p * q, -q, z, z],
        [q * q, -q * q, z, z, z],
    ];
    ComplexMatrix::from_fn(4, 5, |i, j| re(rows[i][j] * half_a))
}

/// Closed-form `H` for [`ou_channel`] with `s = 1 + p`.
pub fn ou_hermitian_closed_form<T: Real>(p: T) -> ComplexMatrix<T> {
    let s2 = (T::one() + p) * (T::one() + p);
    let (one, p2) = (T::one(), p * p);
    let four = T::of(4.0);
    let rows = [
        [four * s2, -s2, -s2, -s2, -s2],
        [-s2, one, p, p, p2],
        [-s2, p, one, p2, p],
        [-s2, p, p2, one, p],
        [-s2, p2, p, p, one],
    ];
    ComplexMatrix::from_fn(5, 5, |i, j| re(rows[i][j] * T::of(8.0)))
}

/// Entries of `m` that differ from zero, for diagnostics.
pub fn support_size<T: Real>(m: &ComplexMatrix<T>) -> usize {
    m.as_slice().iter().filter(|z| !z.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{channels_equal, pauli};
    use crate::rng::{random_unitary, stream_rng};
    use crate::ru::hs_basis;

    type M = ComplexMatrix<f64>;

    fn code_projector() -> M {
        let mut p = M::zeros(8, 8);
        p[(0, 0)] = re(1.0);
        p[(7, 7)] = re(1.0);
        p
    }

    fn x_on(q: usize) -> M {
        let mut out = M::identity(1);
        for i in 0..3 {
            out = out.kron(&if i == q { pauli(1) } else { M::identity(2) });
        }
        out
    }

    fn z_on(q: usize) -> M {
        let mut out = M::identity(1);
        for i in 0..3 {
            out = out.kron(&if i == q { pauli(3) } else { M::identity(2) });
        }
        out
    }

    fn bitflip_errors() -> KrausSet<f64> {
        let ops = vec![M::identity(8), x_on(0), x_on(1), x_on(2)]
            .into_iter()
            .map(|m| m.scale_real(0.5))
            .collect();
        KrausSet::new(ops, "bitflip").unwrap()
    }

    #[test]
    fn identity_alpha() {
        let e = KrausSet::new(vec![M::identity(8)], "id").unwrap();
        let a = build_alpha(&e, &code_projector()).unwrap();
        assert!(a.approx_eq(&M::identity(1), 1e-15));
    }

    #[test]
    fn bitflip_alpha_is_quarter_identity() {
        let r = check_correctability(&bitflip_errors(), &code_projector()).unwrap();
        assert!(r.alpha.approx_eq(&M::identity(4).scale_real(0.25), 1e-15));
        assert!(r.verdict.is_satisfied());
        assert!(r.max_residual < 1e-15);
    }

    #[test]
    fn phase_error_violates() {
        let e = KrausSet::new(vec![z_on(0)], "z1").unwrap();
        let mut ops = bitflip_errors().into_operators();
        ops.push(z_on(0).scale_real(0.5));
        let both = KrausSet::raw(ops, "bitflip+z").unwrap();
        // {Z1} alone: P Z P = diag(1, -1) on the code words, α = 0
        let r = check_correctability(&e, &code_projector()).unwrap();
        assert!(r.verdict.is_satisfied(), "a single unitary error is always correctable");
        let r = check_correctability(&both, &code_projector()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!((r.max_residual - 0.25 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_one_projector_always_satisfied() {
        let k = crate::ru::ru_kraus_set::<f64>(3).unwrap();
        let mut p = M::zeros(3, 3);
        p[(1, 1)] = re(1.0);
        assert!(check_correctability(&k, &p).unwrap().verdict.is_satisfied());
    }

    #[test]
    fn p_identity_reduces_to_hs_gram() {
        let k = crate::ru::ru_kraus_set::<f64>(4).unwrap();
        let a = build_alpha(&k, &M::identity(4)).unwrap();
        let ops = k.operators();
        for l in 0..ops.len() {
            for m in 0..ops.len() {
                let expect = ops[l].hs_inner(&ops[m]) / 4.0;
                assert!((a[(l, m)] - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn non_projector_rejected() {
        let e = bitflip_errors();
        let bad = M::identity(8).scale_real(0.5);
        assert!(matches!(build_alpha(&e, &bad), Err(QchanError::NotAProjector { .. })));
        assert!(matches!(build_alpha(&e, &M::zeros(8, 8)), Err(QchanError::NotAProjector { .. })));
    }

    #[test]
    fn transfer_with_identity_and_permutation() {
        let e = bitflip_errors();
        let p = code_projector();
        let alpha = build_alpha(&e, &p).unwrap();
        let r = transfer_correctability(&e, &alpha, &M::identity(4), &p).unwrap();
        assert!(r.alpha.approx_eq(&alpha, 0.0));
        let perm = crate::ru::permutation_matrix::<f64>(2, 4).unwrap();
        let r = transfer_correctability(&e, &alpha, &perm, &p).unwrap();
        assert!(r.alpha.approx_eq(&(&(&perm.transpose() * &alpha) * &perm), 1e-15));
        assert!(r.verdict.is_satisfied());
    }

    #[test]
    fn transfer_with_random_unitary() {
        let e = bitflip_errors();
        let p = code_projector();
        let alpha = build_alpha(&e, &p).unwrap();
        let u = random_unitary::<f64>(4, &mut stream_rng(11, 0));
        let r = transfer_correctability(&e, &alpha, &u, &p).unwrap();
        assert!(r.alpha.hermiticity_defect() < 1e-12);
        assert!(r.max_residual < 1e-10);
        assert!(matches!(
            transfer_correctability(&e, &alpha, &M::identity(4).scale_real(2.0), &p),
            Err(QchanError::NonUnitary { .. })
        ));
    }

    #[test]
    fn convert_identity_channel() {
        let (b, _) = hs_basis::<f64>(3).unwrap();
        let f = KrausSet::new(vec![M::identity(3)], "id").unwrap();
        let c = convert(&f, &b.operators).unwrap();
        assert_eq!(c.f_tilde.len(), 1);
        let op = &c.f_tilde.operators()[0];
        // a global phase is allowed
        let ph = op[(0, 0)];
        assert!((ph.norm() - 1.0).abs() < 1e-12);
        assert!(op.approx_eq(&M::identity(3).scale(ph), 1e-12));
    }

    #[test]
    fn ou_fixture() {
        for p in [0.0, 0.3, 0.5, 0.77, 1.0] {
            let f = ou_channel::<f64>(p).unwrap();
            assert!(f.completeness_defect() < 1e-12);
            let m = pair_expand_set(&f, &ou_basis().unwrap()).unwrap();
            assert!(m.approx_eq(&coefficient_matrix_ou(p), 1e-12), "p={p}");
            let c = convert_pairs(&f, &ou_basis().unwrap()).unwrap();
            assert!(c.h.approx_eq(&ou_hermitian_closed_form(p), 1e-10 * 32.0 * 4.0), "p={p}");
            let rep = channels_equal(&f, &c.f_tilde, 20, 3).unwrap();
            assert!(rep.max_bloch_distance_sq < 1e-12);
        }
        let f = ou_channel::<f64>(0.5).unwrap();
        let rho = crate::states::random_density::<f64>(4, &mut stream_rng(1, 1));
        let out = f.apply(&rho).unwrap();
        let ratio = out.matrix()[(0, 3)] / rho.matrix()[(0, 3)];
        assert!((ratio - re(0.25)).norm() < 1e-12);
    }

    #[test]
    fn ou_extremes() {
        let f1 = ou_channel::<f64>(1.0).unwrap();
        assert!(f1.operators()[0].approx_eq(&M::identity(4), 0.0));
        assert!(f1.operators()[1..].iter().all(|k| k.max_abs() == 0.0));
        let f0 = ou_channel::<f64>(0.0).unwrap();
        assert!(f0.operators()[3].approx_eq(&M::from_real_diag(&[1.0, 0.0, 0.0, 0.0]), 0.0));
        assert!(ou_channel::<f64>(-0.1).is_err());
    }

    #[test]
    fn gamma_trivial_cases() {
        let g = gamma_matrix(&[0.5, 0.25], &M::identity(2), &M::identity(2)).unwrap();
        assert!(g.approx_eq(&M::from_real_diag(&[0.5, 0.25]), 1e-15));
        assert!(gamma_matrix(&[-1.0, 0.25], &M::identity(2), &M::identity(2)).is_err());
    }

    #[test]
    fn ou_gamma_on_rank_one_projector() {
        let f = ou_channel::<f64>(0.3).unwrap();
        let basis = ou_basis::<f64>().unwrap();
        let c = convert_pairs(&f, &basis).unwrap();
        let mut p = M::zeros(4, 4);
        p[(0, 0)] = re(1.0);
        let alpha = build_alpha(&basis.operators, &p).unwrap();
        let gamma = c.gamma(&alpha).unwrap();
        assert!(gamma.hermiticity_defect() < 1e-12);
        let ep: Vec<M> = c.f_tilde.operators().iter().map(|k| k * &p).collect();
        for j in 0..ep.len() {
            for k in 0..ep.len() {
                let lhs = &ep[j].adjoint() * &ep[k];
                assert!((&lhs - &p.scale(gamma[(j, k)])).frobenius_norm() < 1e-10);
            }
        }
    }
}
