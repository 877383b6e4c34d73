//! Checker commands. Each returns a serializable report and whether every
//! check in it passed.

use std::path::Path;

use num_complex::Complex;
use serde::Serialize;

use qchan::channels::{process_distance, KrausSet};
use qchan::correctability::{check_correctability_with_tol, convert, VERDICT_TOL};
use qchan::linalg::{eig_hermitian, ComplexMatrix};
use qchan::recovery::{
    bitflip_errors, correctability_fixtures, diagonality_residual, plan_from_alpha, random_bitflip_noise,
    recover_end_to_end, syndrome_identity_residual, three_qubit_pauli, check_universal_conditions, CodeSpec,
};
use qchan::rng::stream_rng;
use qchan::ru::{hs_basis, ru_kraus_set, ru_labels, ru_set_size};
use qchan::state_ru::decompose;
use qchan::states::{bloch_distance_sq, random_density, random_pure, DensityMatrix, PureState};

use crate::error::{CliError, CliResult};
use crate::json::{complex_json, read_json, ComplexJson, KrausJson, MatrixJson, Num, PureStateJson, CodeJson};

/// Squared Bloch distance the Z₁ negative control must exceed.
pub const NEGATIVE_CONTROL_MIN: f64 = 1e-3;

#[derive(Debug, Serialize)]
pub struct BuildRuReport {
    pub n: usize,
    pub size: usize,
    pub labels: Vec<String>,
    pub completeness_defect: Num,
    pub tolerance: Num,
    pub passed: bool,
    pub kraus_set: KrausJson,
}

pub fn build_ru(n: usize, tol: f64) -> CliResult<BuildRuReport> {
    let set = ru_kraus_set::<f64>(n)?;
    let defect = set.completeness_defect();
    Ok(BuildRuReport {
        n,
        size: set.len(),
        labels: ru_labels(n)?.iter().map(|l| l.to_string()).collect(),
        completeness_defect: Num(defect),
        tolerance: Num(tol),
        passed: defect < tol && set.len() == ru_set_size(n)?,
        kraus_set: KrausJson::from_set(&set),
    })
}

#[derive(Debug, Serialize)]
pub struct CheckHsReport {
    pub n: usize,
    pub labels: Vec<String>,
    pub operator_indices: Vec<usize>,
    pub rank: usize,
    pub expected_rank: usize,
    pub relation_residual: Num,
    pub determinant: ComplexJson,
    /// `2^(n-1) / (n·2^(n-1))^(n/2)`
    pub determinant_closed_form: Num,
    pub passed: bool,
}

pub fn check_hs(n: usize) -> CliResult<CheckHsReport> {
    let (basis, cert) = hs_basis::<f64>(n)?;
    let big_n = ru_set_size(n)? as f64;
    let closed = 2f64.powi(n as i32 - 1) / big_n.powf(n as f64 / 2.0);
    Ok(CheckHsReport {
        n,
        labels: basis.selection.labels.iter().map(|l| l.to_string()).collect(),
        operator_indices: basis.selection.operator_indices.clone(),
        rank: cert.rank,
        expected_rank: cert.expected_rank,
        relation_residual: Num(cert.relation_residual),
        determinant: complex_json(cert.determinant),
        determinant_closed_form: Num(closed),
        passed: cert.rank == cert.expected_rank,
    })
}

#[derive(Debug, Serialize)]
pub struct CorrectabilityEntry {
    pub name: String,
    pub verdict: &'static str,
    pub max_residual: Num,
    pub hermiticity_defect: Num,
    pub threshold: Num,
    pub alpha: MatrixJson,
    /// Verdict from matrix elements on an orthonormal basis of the code space.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct CorrectabilityReport {
    pub entries: Vec<CorrectabilityEntry>,
    pub passed: bool,
}

fn verdict_name(ok: bool) -> &'static str {
    if ok {
        "satisfied"
    } else {
        "violated"
    }
}

fn correctability_entry(name: &str, e: &KrausSet<f64>, p: &ComplexMatrix<f64>, tol: f64) -> CliResult<CorrectabilityEntry> {
    let r = check_correctability_with_tol(e, p, tol)?;
    Ok(CorrectabilityEntry {
        name: name.to_string(),
        verdict: verdict_name(r.verdict.is_satisfied()),
        max_residual: Num(r.max_residual),
        hermiticity_defect: Num(r.hermiticity_defect),
        threshold: Num(r.threshold),
        alpha: MatrixJson::from_matrix(&r.alpha),
        cross_check: None,
    })
}

// max over code-basis pairs of |<i|E_a^dag E_b|j> - c_ab δ_ij|
fn code_basis_verdict(e: &KrausSet<f64>, p: &ComplexMatrix<f64>, tol: f64) -> CliResult<bool> {
    let eig = eig_hermitian(p, None)?;
    let code: Vec<Vec<Complex<f64>>> =
        (0..p.rows()).filter(|&i| eig.values[i] > 0.5).map(|i| eig.vectors.column(i)).collect();
    let d = code.len();
    let mut worst: f64 = 0.0;
    for a in e.operators() {
        for b in e.operators() {
            let prod = &a.adjoint() * b;
            let images: Vec<Vec<Complex<f64>>> = code.iter().map(|v| prod.matvec(v)).collect();
            let g = ComplexMatrix::from_fn(d, d, |i, j| code[i].iter().zip(&images[j]).map(|(x, y)| x.conj() * y).sum());
            let mean = g.trace() / d as f64;
            worst = worst.max((&g - &ComplexMatrix::identity(d).scale(mean)).max_abs());
        }
    }
    Ok(worst <= tol)
}

/// Either one `(errors, projector)` pair or the built-in fixture list.
pub enum CorrectabilityInput<'a> {
    Files { errors: &'a Path, projector: &'a Path },
    Fixtures,
}

pub fn check_correctability(input: CorrectabilityInput<'_>, tol: Option<f64>) -> CliResult<CorrectabilityReport> {
    let tol = tol.unwrap_or(VERDICT_TOL);
    match input {
        CorrectabilityInput::Files { errors, projector } => {
            let e = read_json::<KrausJson>(errors)?.to_set(errors)?;
            let p = read_json::<MatrixJson>(projector)?.to_matrix(projector, "projector")?;
            let entry = correctability_entry(e.label(), &e, &p, tol)?;
            let passed = entry.verdict == "satisfied";
            Ok(CorrectabilityReport {
                entries: vec![entry],
                passed,
            })
        }
        CorrectabilityInput::Fixtures => {
            let mut entries = Vec::new();
            let mut agree = true;
            for fx in correctability_fixtures::<f64>()? {
                let mut entry = correctability_entry(fx.name, &fx.errors, &fx.projector, tol)?;
                let cross = code_basis_verdict(&fx.errors, &fx.projector, tol)?;
                agree &= verdict_name(cross) == entry.verdict;
                entry.cross_check = Some(verdict_name(cross));
                entries.push(entry);
            }
            Ok(CorrectabilityReport { entries, passed: agree })
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConvertReport {
    pub coefficients: MatrixJson,
    pub hermitian: MatrixJson,
    pub eigenvalues: Vec<Num>,
    pub min_raw_eigenvalue: Num,
    pub kept: Vec<usize>,
    pub completeness_defect: Num,
    pub process_distance: Num,
    pub tolerance: Num,
    pub passed: bool,
    pub converted: KrausJson,
}

/// Converts the set in `input` over `basis` (default: the RU HS basis).
pub fn convert_file(input: &Path, basis: Option<&Path>, tol: f64) -> CliResult<ConvertReport> {
    let f = read_json::<KrausJson>(input)?.to_set(input)?;
    let basis = match basis {
        Some(path) => read_json::<KrausJson>(path)?.to_set(path)?,
        None => hs_basis::<f64>(f.dim_in())?.0.operators,
    };
    let conv = convert(&f, &basis)?;
    let raw_min = eig_hermitian(&conv.h, None)?.values.last().copied().unwrap_or(0.0);
    let defect = conv.f_tilde.completeness_defect();
    let dist = process_distance(&f, &conv.f_tilde)?;
    let scale = conv.h.max_abs().max(1.0);
    Ok(ConvertReport {
        coefficients: MatrixJson::from_matrix(&conv.m),
        hermitian: MatrixJson::from_matrix(&conv.h),
        eigenvalues: conv.eigenvalues.iter().map(|&x| Num(x)).collect(),
        min_raw_eigenvalue: Num(raw_min),
        kept: conv.kept.clone(),
        completeness_defect: Num(defect),
        process_distance: Num(dist),
        tolerance: Num(tol),
        passed: (defect - f.completeness_defect()).abs() < tol && dist < tol && raw_min >= -tol * scale,
        converted: KrausJson::from_set(&conv.f_tilde),
    })
}

#[derive(Debug, Serialize)]
pub struct NegativeControl {
    pub noise: &'static str,
    pub input: &'static str,
    pub bloch_dist_sq: Num,
    pub minimum: Num,
}

#[derive(Debug, Serialize)]
pub struct RecoverDemoReport {
    pub code: String,
    pub seed: u64,
    pub samples: usize,
    pub rank: usize,
    pub has_completion: bool,
    pub resolution_defect: Num,
    pub orthogonality_defect: Num,
    pub diagonality_residual: Num,
    pub syndrome_identity_residual: Num,
    pub max_bloch_dist_sq: Num,
    pub negative_control: NegativeControl,
    pub tolerance: Num,
    pub passed: bool,
}

/// Bit-flip code against random channels supported on `{I, X_1, X_2, X_3}`.
pub fn recover_demo(seed: u64, samples: usize, tol: f64) -> CliResult<RecoverDemoReport> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let code = CodeSpec::<f64>::bitflip();
    let (plan, bar) = plan_from_alpha(&bitflip_errors(), &code)?;
    let diag = diagonality_residual(&bar.f_bar, &bar.d, &code.projector)?;
    let synd = syndrome_identity_residual(&plan, &bar, &code.projector)?;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = stream_rng(seed, i as u64);
        let noise = random_bitflip_noise::<f64>(&mut rng)?;
        let rho = random_density::<f64>(2, &mut rng);
        let out = recover_end_to_end(&rho, &code, &noise, &plan)?;
        worst = worst.max(bloch_distance_sq(&out, &rho)?);
    }
    let z1 = KrausSet::new(vec![three_qubit_pauli(3, 1)], "z1")?;
    let h = 0.5f64.sqrt();
    let plus = DensityMatrix::from_pure(&PureState::new(vec![Complex::new(h, 0.0), Complex::new(h, 0.0)])?);
    let neg = bloch_distance_sq(&recover_end_to_end(&plus, &code, &z1, &plan)?, &plus)?;
    let passed = worst < tol
        && diag < tol
        && synd < tol
        && plan.resolution_defect() < tol
        && plan.orthogonality_defect() < tol
        && neg > NEGATIVE_CONTROL_MIN;
    Ok(RecoverDemoReport {
        code: code.description.clone(),
        seed,
        samples,
        rank: plan.rank,
        has_completion: plan.has_completion,
        resolution_defect: Num(plan.resolution_defect()),
        orthogonality_defect: Num(plan.orthogonality_defect()),
        diagonality_residual: Num(diag),
        syndrome_identity_residual: Num(synd),
        max_bloch_dist_sq: Num(worst),
        negative_control: NegativeControl {
            noise: "Z on qubit 1",
            input: "|+>",
            bloch_dist_sq: Num(neg),
            minimum: Num(NEGATIVE_CONTROL_MIN),
        },
        tolerance: Num(tol),
        passed,
    })
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub passed: bool,
    pub residual: Num,
}

#[derive(Debug, Serialize)]
pub struct UniversalReport {
    pub errors: String,
    pub code: String,
    pub completeness_defect: Num,
    pub hs_rank: usize,
    pub hs_required: usize,
    pub hs_complete: Check,
    pub correctable: Check,
    pub eigvec_unitarity_defect: Num,
    pub alpha_rank: usize,
    pub stabilized: Check,
    pub ancilla_sufficient: bool,
    pub passed: bool,
}

/// Universal-recovery conditions; without files, the bit-flip fixture.
pub fn check_universal(errors: Option<&Path>, code: Option<&Path>) -> CliResult<UniversalReport> {
    let q = match errors {
        Some(p) => read_json::<KrausJson>(p)?.to_set(p)?,
        None => bitflip_errors(),
    };
    let c = match code {
        Some(p) => read_json::<CodeJson>(p)?.to_code(p)?,
        None => CodeSpec::bitflip(),
    };
    let r = check_universal_conditions(&q, &c)?;
    let check = |c: &qchan::recovery::ConditionCheck<f64>| Check {
        passed: c.passed,
        residual: Num(c.residual),
    };
    Ok(UniversalReport {
        errors: q.label().to_string(),
        code: c.description.clone(),
        completeness_defect: Num(r.completeness_defect),
        hs_rank: r.hs_rank,
        hs_required: r.hs_required,
        hs_complete: check(&r.hs_complete),
        correctable: check(&r.correctable),
        eigvec_unitarity_defect: Num(r.eigvec_unitarity_defect),
        alpha_rank: r.alpha_rank,
        stabilized: check(&r.stabilized),
        ancilla_sufficient: r.ancilla_sufficient,
        passed: r.all_passed(),
    })
}

#[derive(Debug, Serialize)]
pub struct StateRuReport {
    pub n: usize,
    pub psi: PureStateJson,
    pub target: MatrixJson,
    pub weights: Vec<Num>,
    pub unitaries: Vec<MatrixJson>,
    pub completeness_defect: Num,
    pub bloch_dist_sq: Num,
    pub tolerance: Num,
    pub passed: bool,
}

/// Decomposes a given or seeded random `(ψ, ρ')` pair.
pub fn state_ru(
    n: usize,
    seed: u64,
    psi_path: Option<&Path>,
    rho_path: Option<&Path>,
    tol: f64,
) -> CliResult<StateRuReport> {
    let mut rng = stream_rng(seed, 0);
    let psi = match psi_path {
        Some(p) => read_json::<PureStateJson>(p)?.to_state(p)?,
        None => random_pure::<f64>(n, &mut rng),
    };
    let target = match rho_path {
        Some(p) => {
            let m = read_json::<MatrixJson>(p)?.to_matrix(p, "rho")?;
            DensityMatrix::new(m).map_err(|e| CliError::InvalidField {
                path: p.to_path_buf(),
                field: "rho".into(),
                message: e.to_string(),
            })?
        }
        None => random_density::<f64>(psi.dim(), &mut rng),
    };
    let d = decompose(&psi, &target)?;
    let rec = d.reconstruct(&psi)?;
    let dist = bloch_distance_sq(&rec, &target)?;
    let defect = d.kraus.completeness_defect();
    Ok(StateRuReport {
        n: psi.dim(),
        psi: PureStateJson::from_state(&psi),
        target: MatrixJson::from_matrix(target.matrix()),
        weights: d.weights.iter().map(|&w| Num(w)).collect(),
        unitaries: d.unitaries.iter().map(MatrixJson::from_matrix).collect(),
        completeness_defect: Num(defect),
        bloch_dist_sq: Num(dist),
        tolerance: Num(tol),
        passed: dist < tol && defect < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_ru_n4_has_32_operators() {
        let r = build_ru(4, 1e-12).unwrap();
        assert_eq!(r.size, 32);
        assert!(r.passed);
        assert_eq!(r.labels[1], "Pi_1 N_(1)");
    }

    #[test]
    fn check_hs_n4_full_rank() {
        let r = check_hs(4).unwrap();
        assert_eq!((r.rank, r.expected_rank), (16, 16));
        assert!((r.determinant[0].0 - r.determinant_closed_form.0).abs() < 1e-15);
    }

    #[test]
    fn fixture_verdicts_agree_with_cross_check() {
        let r = check_correctability(CorrectabilityInput::Fixtures, None).unwrap();
        assert!(r.passed);
        assert!(r.entries.iter().any(|e| e.verdict == "violated"));
        assert!(r.entries.iter().any(|e| e.verdict == "satisfied"));
    }

    #[test]
    fn recover_demo_passes_with_failing_control() {
        let r = recover_demo(3, 10, 1e-9).unwrap();
        assert!(r.passed);
        assert!(r.negative_control.bloch_dist_sq.0 > 1.0);
    }

    #[test]
    fn bitflip_is_not_universal() {
        let r = check_universal(None, None).unwrap();
        assert!(!r.passed && r.correctable.passed && !r.hs_complete.passed);
    }

    #[test]
    fn state_ru_random_pair() {
        let r = state_ru(3, 5, None, None, 1e-10).unwrap();
        assert!(r.passed);
        assert_eq!(r.unitaries.len(), 3);
    }
}
