//! Code fixtures, recovery-channel construction from a correctable set and
//! a code projector, and checks for universal-recovery conditions.

use num_complex::Complex;
use num_traits::Zero;

use crate::channels::KrausSet;
use crate::correctability::{build_alpha, check_correctability, validate_projector, ConversionResult, Verdict};
use crate::error::{dim_mismatch, QchanError, Result};
use crate::linalg::{eig_hermitian, polar_right, svd, vectorized_columns, ComplexMatrix, RANK_TOL};
use crate::rng::{random_unitary, unit_interval};
use crate::scalar::{re, Real};
use crate::states::{partial_trace_second, DensityMatrix};

/// Projector-algebra tolerance for syndrome projectors.
pub const SYNDROME_TOL: f64 = 1e-8;
/// `||Σ P_k - I||_F` above which a completion projector is appended.
pub const COMPLETION_TOL: f64 = 1e-9;
/// Code validation tolerance.
pub const CODE_TOL: f64 = 1e-10;

/// A code on `n_sys ⊗ n_anc` levels: projector `P` and encoder `U_C`.
///
/// Inputs are encoded as `U_C (ρ ⊗ |0⟩⟨0|) U_C^dag`, system index major.
#[derive(Debug, Clone)]
pub struct CodeSpec<T> {
    pub n_sys: usize,
    pub n_anc: usize,
    pub projector: ComplexMatrix<T>,
    pub encoder: ComplexMatrix<T>,
    pub description: String,
}

impl<T: Real> CodeSpec<T> {
    pub fn new(
        n_sys: usize,
        n_anc: usize,
        projector: ComplexMatrix<T>,
        encoder: ComplexMatrix<T>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let d = n_sys * n_anc;
        for m in [&projector, &encoder] {
            if m.shape() != (d, d) {
                return Err(dim_mismatch(format!("{d}x{d}"), format!("{:?}", m.shape())));
            }
        }
        let tr = validate_projector(&projector)?;
        if tr < T::of(n_sys as f64 - 0.5) {
            return Err(QchanError::InvalidState {
                reason: format!("code projector rank {} is below the system dimension {n_sys}", tr.as_f64()),
            });
        }
        let tol = T::tol(CODE_TOL) * T::of(d as f64);
        let defect = encoder.unitarity_defect();
        if defect > tol {
            return Err(QchanError::NonUnitary {
                defect: defect.as_f64(),
            });
        }
        let code = Self {
            n_sys,
            n_anc,
            projector,
            encoder,
            description: description.into(),
        };
        let leak = code.stabilization_defect();
        if leak > tol {
            return Err(QchanError::InvalidState {
                reason: format!("encoded states leave the code space (defect {:e})", leak.as_f64()),
            });
        }
        Ok(code)
    }

    /// Three-qubit bit-flip code: `|b⟩|00⟩ → |bbb⟩`, `P = |000⟩⟨000| + |111⟩⟨111|`.
    pub fn bitflip() -> Self {
        let perm = |i: usize| {
            let b = (i >> 2) & 1;
            i ^ (b << 1) ^ b
        };
        let one = re(T::one());
        let encoder = ComplexMatrix::from_fn(8, 8, |r, c| if r == perm(c) { one } else { Complex::zero() });
        let mut projector = ComplexMatrix::zeros(8, 8);
        projector[(0, 0)] = one;
        projector[(7, 7)] = one;
        Self::new(2, 4, projector, encoder, "three-qubit bit-flip code").expect("valid fixture")
    }

    /// No ancilla, `P = I`, `U_C = I`.
    pub fn trivial(n: usize) -> Self {
        Self::new(
            n,
            1,
            ComplexMatrix::identity(n),
            ComplexMatrix::identity(n),
            "trivial full-space code",
        )
        .expect("valid fixture")
    }

    pub fn dim(&self) -> usize {
        self.n_sys * self.n_anc
    }

    /// `U_C (X ⊗ |0⟩⟨0|) U_C^dag` for any `n_sys`-square `X`.
    pub fn encode_matrix(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.shape() != (self.n_sys, self.n_sys) {
            return Err(dim_mismatch(
                format!("{0}x{0}", self.n_sys),
                format!("{:?}", x.shape()),
            ));
        }
        let anc = ComplexMatrix::elementary(0, 0, self.n_anc);
        Ok(self.encoder.sandwich(&x.kron(&anc)))
    }

    pub fn encode(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        Ok(DensityMatrix::trusted(&self.encode_matrix(rho.matrix())?))
    }

    /// `tr_A(U_C^dag σ U_C)`.
    pub fn decode(&self, sigma: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let back = self.encoder.adjoint_sandwich(sigma.matrix());
        Ok(DensityMatrix::trusted(&partial_trace_second(&back, self.n_sys, self.n_anc)?))
    }

    /// `max_(i,j) ||P X P - X||_F` over encoded matrix units `X = enc(|i⟩⟨j|)`.
    pub fn stabilization_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n_sys {
            for j in 0..self.n_sys {
                let x = self
                    .encode_matrix(&ComplexMatrix::elementary(i, j, self.n_sys))
                    .expect("shape checked");
                let px = &(&self.projector * &x) * &self.projector;
                worst = worst.max((&px - &x).frobenius_norm());
            }
        }
        worst
    }
}

/// Syndrome projectors `P_k` with correction unitaries `U_k`; the recovery
/// Kraus operators are `R_k = U_k^dag P_k`.
#[derive(Debug, Clone)]
pub struct RecoveryPlan<T> {
    pub projectors: Vec<ComplexMatrix<T>>,
    pub unitaries: Vec<ComplexMatrix<T>>,
    /// `d_k` (or `η_k`) for the non-completion projectors.
    pub weights: Vec<T>,
    /// Number of projectors built from the error set.
    pub rank: usize,
    pub has_completion: bool,
}

impl<T: Real> RecoveryPlan<T> {
    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, ComplexMatrix::rows)
    }

    /// `{U_k^dag P_k}`
    pub fn kraus(&self) -> Result<KrausSet<T>> {
        let ops = self
            .projectors
            .iter()
            .zip(&self.unitaries)
            .map(|(p, u)| &u.adjoint() * p)
            .collect();
        KrausSet::new(ops, "recovery")
    }

    /// `||Σ_k P_k - I||_F`
    pub fn resolution_defect(&self) -> T {
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for p in &self.projectors {
            acc += p;
        }
        (&acc - &ComplexMatrix::identity(self.dim())).frobenius_norm()
    }

    /// `max_(k≠l) ||P_k P_l||_F` together with `max_k ||P_k² - P_k||`.
    pub fn orthogonality_defect(&self) -> T {
        let mut worst = T::zero();
        for (k, a) in self.projectors.iter().enumerate() {
            worst = worst.max(a.projector_defect());
            for b in &self.projectors[k + 1..] {
                worst = worst.max((a * b).frobenius_norm());
            }
        }
        worst
    }
}

/// A set rotated so that its correctability matrix is diagonal.
#[derive(Debug, Clone)]
pub struct BarSet<T> {
    /// `F̄_a = Σ_k (ε_γ)_(k,a) F̃_k`
    pub f_bar: KrausSet<T>,
    /// Eigenvalues of `γ`, descending.
    pub d: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

/// Rotates `F̃` by the eigenvectors of the Hermitian matrix `γ`.
pub fn bar_set<T: Real>(f_tilde: &KrausSet<T>, gamma: &ComplexMatrix<T>) -> Result<BarSet<T>> {
    if gamma.shape() != (f_tilde.len(), f_tilde.len()) {
        return Err(dim_mismatch(
            format!("{0}x{0}", f_tilde.len()),
            format!("{:?}", gamma.shape()),
        ));
    }
    let eig = eig_hermitian(gamma, None)?;
    let ops = (0..f_tilde.len())
        .map(|a| {
            let mut acc = ComplexMatrix::zeros(f_tilde.dim_out(), f_tilde.dim_in());
            for (k, fk) in f_tilde.operators().iter().enumerate() {
                acc += &fk.scale(eig.vectors[(k, a)]);
            }
            acc
        })
        .collect();
    Ok(BarSet {
        f_bar: KrausSet::raw(ops, format!("{}-bar", f_tilde.label()))?,
        d: eig.values,
        eigenvectors: eig.vectors,
    })
}

/// `max_(a,b) ||P F̄_a^dag F̄_b P - δ_(a,b) d_b P||_F`.
pub fn diagonality_residual<T: Real>(f_bar: &KrausSet<T>, d: &[T], p: &ComplexMatrix<T>) -> Result<T> {
    if d.len() != f_bar.len() {
        return Err(dim_mismatch(f_bar.len(), d.len()));
    }
    let fp: Vec<_> = f_bar.operators().iter().map(|f| f * p).collect();
    let mut worst = T::zero();
    for (a, x) in fp.iter().enumerate() {
        let xa = x.adjoint();
        for (b, y) in fp.iter().enumerate() {
            let target = if a == b { p.scale_real(d[b]) } else { ComplexMatrix::zeros(p.rows(), p.cols()) };
            worst = worst.max((&(&xa * y) - &target).frobenius_norm());
        }
    }
    Ok(worst)
}

/// Builds syndrome projectors `P_k = F̄_k P U_k^dag / √d_k` from the right
/// polar factors `U_k` of `F̄_k P`, plus `I - Σ P_k` (with `U = I`) when the
/// projectors do not resolve the identity.
pub fn build_recovery<T: Real>(f_bar: &KrausSet<T>, code: &CodeSpec<T>, d: &[T]) -> Result<RecoveryPlan<T>> {
    let dim = code.dim();
    if f_bar.dim_in() != dim || f_bar.dim_out() != dim {
        return Err(dim_mismatch(
            format!("{dim}x{dim}"),
            format!("{}x{}", f_bar.dim_out(), f_bar.dim_in()),
        ));
    }
    if d.len() != f_bar.len() {
        return Err(dim_mismatch(f_bar.len(), d.len()));
    }
    let dmax = d.iter().fold(T::zero(), |a, &b| a.max(b));
    if let Some(&neg) = d.iter().find(|&&x| x < -T::tol(RANK_TOL) * dmax.max(T::one())) {
        return Err(QchanError::NegativeEigenvalue { value: neg.as_f64() });
    }
    let cutoff = T::tol(RANK_TOL) * dmax;
    let p = &code.projector;
    let tol = T::tol(SYNDROME_TOL);

    let mut projectors = Vec::new();
    let mut unitaries = Vec::new();
    let mut weights = Vec::new();
    for (k, (f, &dk)) in f_bar.operators().iter().zip(d).enumerate() {
        if !(dk > cutoff) {
            continue;
        }
        let a = f * p;
        let (u, _) = polar_right(&a)?;
        let pk = (&a * &u.adjoint()).scale_real(T::one() / dk.sqrt());
        let defect = pk.projector_defect();
        if defect > tol {
            return Err(QchanError::ProjectorDefect {
                index: k,
                defect: defect.as_f64(),
            });
        }
        let overlap = projectors
            .iter()
            .map(|q: &ComplexMatrix<T>| (&pk * q).frobenius_norm())
            .fold(T::zero(), T::max);
        if overlap > tol {
            return Err(QchanError::ProjectorDefect {
                index: k,
                defect: overlap.as_f64(),
            });
        }
        projectors.push(pk.hermitian_part());
        unitaries.push(u);
        weights.push(dk);
    }
    if projectors.is_empty() {
        return Err(QchanError::ProjectorDefect {
            index: 0,
            defect: f64::INFINITY,
        });
    }
    let rank = projectors.len();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for q in &projectors {
        sum += q;
    }
    let rest = &ComplexMatrix::identity(dim) - &sum;
    let has_completion = rest.frobenius_norm() > T::tol(COMPLETION_TOL);
    if has_completion {
        let defect = rest.projector_defect();
        if defect > tol {
            return Err(QchanError::ProjectorDefect {
                index: rank,
                defect: defect.as_f64(),
            });
        }
        projectors.push(rest);
        unitaries.push(ComplexMatrix::identity(dim));
    }
    Ok(RecoveryPlan {
        projectors,
        unitaries,
        weights,
        rank,
        has_completion,
    })
}

/// Plan from a set `Q` via its `α` on the code projector.
pub fn plan_from_alpha<T: Real>(q: &KrausSet<T>, code: &CodeSpec<T>) -> Result<(RecoveryPlan<T>, BarSet<T>)> {
    let alpha = build_alpha(q, &code.projector)?;
    let bar = bar_set(q, &alpha)?;
    let plan = build_recovery(&bar.f_bar, code, &bar.d)?;
    Ok((plan, bar))
}

/// Plan from a converted set: `γ` from the basis `α`, then rotation and
/// projector construction.
pub fn plan_from_conversion<T: Real>(
    conversion: &ConversionResult<T>,
    basis_alpha: &ComplexMatrix<T>,
    code: &CodeSpec<T>,
) -> Result<(RecoveryPlan<T>, BarSet<T>)> {
    let gamma = conversion.gamma(basis_alpha)?;
    let bar = bar_set(&conversion.f_tilde, &gamma)?;
    let plan = build_recovery(&bar.f_bar, code, &bar.d)?;
    Ok((plan, bar))
}

/// `max_(k,l) ||U_k^dag P_k F̄_l P - δ_(k,l) √d_k P||_F` over the
/// non-completion projectors, matching `F̄_l` in order of nonzero `d`.
pub fn syndrome_identity_residual<T: Real>(
    plan: &RecoveryPlan<T>,
    bar: &BarSet<T>,
    p: &ComplexMatrix<T>,
) -> Result<T> {
    let dmax = bar.d.iter().fold(T::zero(), |a, &b| a.max(b));
    let cutoff = T::tol(RANK_TOL) * dmax;
    let active: Vec<usize> = (0..bar.d.len()).filter(|&l| bar.d[l] > cutoff).collect();
    if active.len() != plan.rank {
        return Err(dim_mismatch(plan.rank, active.len()));
    }
    let ops = bar.f_bar.operators();
    let mut worst = T::zero();
    for k in 0..plan.rank {
        let left = &plan.unitaries[k].adjoint() * &plan.projectors[k];
        for (li, &l) in active.iter().enumerate() {
            let lhs = &(&left * &ops[l]) * p;
            let target = if li == k {
                p.scale_real(bar.d[l].sqrt())
            } else {
                ComplexMatrix::zeros(p.rows(), p.cols())
            };
            worst = worst.max((&lhs - &target).frobenius_norm());
        }
    }
    Ok(worst)
}

/// `Σ_k U_k^dag P_k σ P_k U_k`, renormalized to unit trace.
pub fn apply_recovery<T: Real>(plan: &RecoveryPlan<T>, sigma: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if sigma.dim() != plan.dim() {
        return Err(dim_mismatch(plan.dim(), sigma.dim()));
    }
    let mut acc = ComplexMatrix::zeros(plan.dim(), plan.dim());
    for (p, u) in plan.projectors.iter().zip(&plan.unitaries) {
        let r = &u.adjoint() * p;
        acc += &r.sandwich(sigma.matrix());
    }
    let tr = acc.trace().re;
    if !(tr > T::tol(1e-14)) {
        return Err(QchanError::ZeroTrace);
    }
    Ok(DensityMatrix::trusted(&acc.scale_real(T::one() / tr)))
}

/// Encode, apply `noise`, recover with `plan`, decode and trace out the ancilla.
pub fn recover_end_to_end<T: Real>(
    rho: &DensityMatrix<T>,
    code: &CodeSpec<T>,
    noise: &KrausSet<T>,
    plan: &RecoveryPlan<T>,
) -> Result<DensityMatrix<T>> {
    let encoded = code.encode(rho)?;
    let noisy = noise.apply(&encoded)?;
    let recovered = apply_recovery(plan, &noisy)?;
    code.decode(&recovered)
}

/// One universal-recovery condition with the measured quantity behind it.
#[derive(Debug, Clone)]
pub struct ConditionCheck<T> {
    pub passed: bool,
    pub residual: T,
}

/// Measured universal-recovery conditions for a set `Q` on a code.
#[derive(Debug, Clone)]
pub struct UniversalReport<T> {
    /// `||Σ Q^dag Q - I||_F`
    pub completeness_defect: T,
    /// Rank of the vectorized `Q` against `n_Q²`.
    pub hs_rank: usize,
    pub hs_required: usize,
    pub hs_complete: ConditionCheck<T>,
    /// Residual of the correctability conditions on `P`.
    pub correctable: ConditionCheck<T>,
    /// `||ε_α^dag ε_α - I||_F`
    pub eigvec_unitarity_defect: T,
    pub alpha_rank: usize,
    /// `max ||P X P - X||` over encoded matrix units.
    pub stabilized: ConditionCheck<T>,
    /// Whether `n_anc ≥ n_sys²`.
    pub ancilla_sufficient: bool,
}

impl<T: Real> UniversalReport<T> {
    pub fn all_passed(&self) -> bool {
        self.hs_complete.passed && self.correctable.passed && self.stabilized.passed
    }
}

/// Measures the three universal-recovery conditions for `Q` on `code`.
pub fn check_universal_conditions<T: Real>(q: &KrausSet<T>, code: &CodeSpec<T>) -> Result<UniversalReport<T>> {
    let n_q = q.dim_in();
    if n_q != code.dim() || q.dim_out() != n_q {
        return Err(dim_mismatch(
            format!("{0}x{0}", code.dim()),
            format!("{}x{}", q.dim_out(), q.dim_in()),
        ));
    }
    if code.n_anc < code.n_sys * code.n_sys {
        log::warn!(
            "ancilla has {} levels, fewer than n_sys^2 = {}",
            code.n_anc,
            code.n_sys * code.n_sys
        );
    }
    let hs_required = n_q * n_q;
    let f = svd(&vectorized_columns(q.operators()))?;
    let hs_rank = f.rank(T::tol(RANK_TOL));
    let smallest = if hs_rank >= hs_required && f.singular_values.len() >= hs_required {
        f.singular_values[hs_required - 1]
    } else {
        T::zero()
    };

    let report = check_correctability(q, &code.projector)?;
    let eig = eig_hermitian(&report.alpha, None)?;
    let eig_defect = eig.vectors.unitarity_defect();
    let amax = eig.values.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    let alpha_rank = eig.values.iter().filter(|&&v| v > T::tol(RANK_TOL) * amax).count();
    let correctable_ok = report.verdict == Verdict::Satisfied && eig_defect <= T::tol(CODE_TOL);

    let leak = code.stabilization_defect();
    Ok(UniversalReport {
        completeness_defect: q.completeness_defect(),
        hs_rank,
        hs_required,
        hs_complete: ConditionCheck {
            passed: hs_rank == hs_required,
            residual: smallest,
        },
        correctable: ConditionCheck {
            passed: correctable_ok,
            residual: report.max_residual.max(report.hermiticity_defect),
        },
        eigvec_unitarity_defect: eig_defect,
        alpha_rank,
        stabilized: ConditionCheck {
            passed: leak <= T::tol(CODE_TOL),
            residual: leak,
        },
        ancilla_sufficient: code.n_anc >= code.n_sys * code.n_sys,
    })
}

/// Random channel on three qubits supported on `{I, X_1, X_2, X_3}`:
/// `K_j = Σ_k U_jk √w_k σ_k` with Haar `U` and uniform-then-normalized `w`.
pub fn random_bitflip_noise<T: Real>(rng: &mut impl rand::Rng) -> Result<KrausSet<T>> {
    let u = random_unitary::<T>(4, rng);
    let raw: Vec<T> = (0..4).map(|_| unit_interval::<T>(rng)).collect();
    let total = raw.iter().fold(T::zero(), |a, &b| a + b);
    let sig: Vec<ComplexMatrix<T>> = (0..4)
        .map(|k| if k == 0 { ComplexMatrix::identity(8) } else { three_qubit_pauli(1, k) })
        .collect();
    let ops = (0..4)
        .map(|j| {
            let mut acc = ComplexMatrix::zeros(8, 8);
            for k in 0..4 {
                acc += &sig[k].scale(u[(j, k)] * (raw[k] / total).sqrt());
            }
            acc
        })
        .collect();
    KrausSet::new(ops, "bitflip-span-noise")
}

/// `{I, X_1, X_2, X_3} / 2` on three qubits, qubit 1 most significant.
pub fn bitflip_errors<T: Real>() -> KrausSet<T> {
    let ops = (0..4)
        .map(|q| three_qubit_pauli(if q == 0 { 0 } else { 1 }, q.max(1)).scale_real(T::of(0.5)))
        .collect();
    KrausSet::new(ops, "bitflip-errors").expect("nonempty")
}

/// Pauli `σ` acting on qubit `q` (1-based, most significant first) of three.
pub fn three_qubit_pauli<T: Real>(kind: usize, q: usize) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::identity(1);
    for i in 1..=3 {
        let f = if i == q { crate::channels::pauli(kind) } else { ComplexMatrix::identity(2) };
        m = m.kron(&f);
    }
    m
}

/// A named error set and code projector.
#[derive(Debug, Clone)]
pub struct CorrectabilityFixture<T> {
    pub name: &'static str,
    pub errors: KrausSet<T>,
    pub projector: ComplexMatrix<T>,
}

/// Every fixture with total dimension at most 8, both verdicts represented.
pub fn correctability_fixtures<T: Real>() -> Result<Vec<CorrectabilityFixture<T>>> {
    let bitflip = CodeSpec::<T>::bitflip().projector;
    let half = T::of(0.5);
    let with = |extra: ComplexMatrix<T>, name: &str| -> Result<KrausSet<T>> {
        let mut ops = bitflip_errors::<T>().into_operators();
        ops.push(extra);
        KrausSet::raw(ops, name)
    };
    let rank1 = |n: usize| ComplexMatrix::<T>::elementary(0, 0, n);
    let diag_proj = |d: &[f64]| ComplexMatrix::<T>::from_real_diag(&d.iter().map(|&x| T::of(x)).collect::<Vec<_>>());
    let ou = crate::correctability::ou_channel(T::of(0.6))?;
    Ok(vec![
        CorrectabilityFixture {
            name: "bitflip-code/single-x",
            errors: bitflip_errors(),
            projector: bitflip.clone(),
        },
        CorrectabilityFixture {
            name: "bitflip-code/single-x-plus-z1",
            errors: with(three_qubit_pauli(3, 1).scale_real(half), "x-plus-z1")?,
            projector: bitflip.clone(),
        },
        CorrectabilityFixture {
            name: "bitflip-code/identity-and-z1",
            errors: KrausSet::raw(
                vec![ComplexMatrix::identity(8).scale_real(half.sqrt()), three_qubit_pauli(3, 1).scale_real(half.sqrt())],
                "identity-z1",
            )?,
            projector: bitflip.clone(),
        },
        CorrectabilityFixture {
            name: "bitflip-code/two-qubit-flip",
            errors: KrausSet::raw(
                vec![ComplexMatrix::identity(8), &three_qubit_pauli::<T>(1, 1) * &three_qubit_pauli(1, 2)],
                "x1x2",
            )?,
            projector: bitflip.clone(),
        },
        CorrectabilityFixture {
            name: "bitflip-code/x-and-y1",
            errors: with(three_qubit_pauli(2, 1).scale_real(half), "x-plus-y1")?,
            projector: bitflip,
        },
        CorrectabilityFixture {
            name: "qubit/identity",
            errors: crate::channels::identity_channel(2),
            projector: ComplexMatrix::identity(2),
        },
        CorrectabilityFixture {
            name: "qubit/depolarizing",
            errors: crate::channels::pauli_depolarizing(T::of(0.3))?,
            projector: ComplexMatrix::identity(2),
        },
        CorrectabilityFixture {
            name: "qubit/ru-set-rank1",
            errors: crate::ru::ru_kraus_set(2)?,
            projector: rank1(2),
        },
        CorrectabilityFixture {
            name: "qutrit/ru-set-rank2",
            errors: crate::ru::ru_kraus_set(3)?,
            projector: diag_proj(&[1.0, 1.0, 0.0]),
        },
        CorrectabilityFixture {
            name: "ququart/ou-rank1",
            errors: ou.clone(),
            projector: rank1(4),
        },
        CorrectabilityFixture {
            name: "ququart/ou-rank2",
            errors: ou,
            projector: diag_proj(&[0.0, 0.0, 1.0, 1.0]),
        },
        CorrectabilityFixture {
            name: "ququart/ru-set-rank2",
            errors: crate::ru::ru_kraus_set(4)?,
            projector: diag_proj(&[1.0, 0.0, 1.0, 0.0]),
        },
    ])
}
