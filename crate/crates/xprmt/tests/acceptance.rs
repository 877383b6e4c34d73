//! Acceptance suite: one function per criterion, one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex;

use qchan::channels::{process_distance, random_kraus_set};
use qchan::correctability::{convert, convert_pairs, ou_basis, ou_channel, ou_hermitian_closed_form};
use qchan::linalg::{eig_hermitian, ComplexMatrix};
use qchan::recovery::{
    bitflip_errors, correctability_fixtures, diagonality_residual, plan_from_alpha, random_bitflip_noise,
    recover_end_to_end, syndrome_identity_residual, three_qubit_pauli, CodeSpec,
};
use qchan::rng::{stream_rng, unit_interval};
use qchan::channels::check_completeness;
use qchan::ru::{dephase_full, hs_basis, maximal_mixing, ru_kraus_set, ru_set_size};
use qchan::states::{bloch_distance_sq, random_density, DensityMatrix, PureState};
use xprmt::{cmd_fig1, cmd_fig2, cmd_fig3, RunOptions};

type M = ComplexMatrix<f64>;

const SEED: u64 = 20240601;

const FIG_SAMPLES: usize = 1000;
const FIG_MAX_DIST: f64 = 1e-10;
const FIG1_RUNTIME: Duration = Duration::from_secs(10);
const MIXING_SAMPLES: usize = 100;
const MIXING_TOL: f64 = 1e-11;
const DEPHASE_TOL: f64 = 1e-12;
const DET_REL_TOL: f64 = 1e-10;
const FAMILY_TOL: f64 = 1e-12;
const H_ENTRY_TOL: f64 = 1e-10;
const H_SAMPLES: usize = 100;
const CONVERSION_SETS: usize = 50;
const CONVERSION_TOL: f64 = 1e-9;
const RECOVERY_TOL: f64 = 1e-9;
const RECOVERY_STATES: usize = 100;
const RECOVERY_CHANNELS: usize = 100;
const NEGATIVE_CONTROL_MIN: f64 = 1e-3;
const COMPLETENESS_TOL: f64 = 1e-10;
const ORACLE_DIM_MAX: usize = 8;
const ORACLE_TOL: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn opts(samples: usize) -> RunOptions {
    RunOptions {
        samples,
        seed: SEED,
        tol: FIG_MAX_DIST,
        timing: false,
    }
}

fn criterion_1_depolarization() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [4, 2, 3, 5, 6] {
        let start = Instant::now();
        let rec = cmd_fig1(n, opts(FIG_SAMPLES)).expect("fig1 runs");
        let elapsed = start.elapsed();
        let max = rec.summary.max_bloch_dist_sq.0;
        ok &= max < FIG_MAX_DIST && rec.per_sample.len() == FIG_SAMPLES;
        if n == 4 {
            ok &= elapsed < FIG1_RUNTIME;
            parts.push(format!("n=4 max {max:.3e} in {} ms", elapsed.as_millis()));
        } else {
            parts.push(format!("n={n} max {max:.3e}"));
        }
    }
    outcome(ok, parts.join(", "))
}

fn criterion_2_maximal_mixing() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut sizes_ok = ru_set_size(4).unwrap() == 32;
    for n in 2..=6 {
        let set = ru_kraus_set::<f64>(n).unwrap();
        sizes_ok &= set.len() == n << (n - 1);
        let target = M::identity(n).scale_real(1.0 / n as f64);
        for i in 0..MIXING_SAMPLES {
            let rho = random_density::<f64>(n, &mut stream_rng(SEED + n as u64, i as u64));
            let a = (set.apply(&rho).unwrap().matrix() - &target).frobenius_norm();
            let b = (maximal_mixing(&rho).matrix() - &target).frobenius_norm();
            worst = worst.max(a).max(b);
        }
    }
    outcome(
        worst < MIXING_TOL && sizes_ok,
        format!("max ||out - I/n||_F {worst:.3e}, cardinalities n*2^(n-1) {sizes_ok}"),
    )
}

fn criterion_3_dephasing() -> Outcome {
    let (mut off_worst, mut diag_worst) = (0.0f64, 0.0f64);
    for n in 2..=13 {
        let rho = random_density::<f64>(n, &mut stream_rng(SEED, n as u64));
        let out = dephase_full(&rho);
        let (m, r) = (out.matrix(), rho.matrix());
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    diag_worst = diag_worst.max((m[(i, i)] - r[(i, i)]).norm());
                } else {
                    off += m[(i, j)].norm_sqr();
                }
            }
        }
        off_worst = off_worst.max(f64::sqrt(off));
    }
    outcome(
        off_worst < DEPHASE_TOL && diag_worst < DEPHASE_TOL,
        format!("off-diagonal {off_worst:.3e}, diagonal change {diag_worst:.3e}, n=2..13"),
    )
}

fn criterion_4_t_certificate() -> Outcome {
    // stated closed form 2^(n-1) / (n 2^(n-1))^n, compared literally
    let mut det_worst: f64 = 0.0;
    for n in 2..=10 {
        let t = qchan::ru::transformation_t::<f64>(n).unwrap();
        let det = t.determinant().unwrap();
        let big_n = ru_set_size(n).unwrap() as f64;
        let stated = 2f64.powi(n as i32 - 1) / big_n.powi(n as i32);
        det_worst = det_worst.max((det - Complex::new(stated, 0.0)).norm() / stated);
    }
    let (_, cert4) = hs_basis::<f64>(4).unwrap();
    let family = cert4.relation_residual;
    let mut ranks_ok = true;
    for n in 2..=6 {
        let (_, cert) = hs_basis::<f64>(n).unwrap();
        ranks_ok &= cert.rank == n * n;
    }
    outcome(
        det_worst <= DET_REL_TOL && family <= FAMILY_TOL && ranks_ok,
        format!(
            "det relative error vs stated closed form {det_worst:.3e}, family relation residual {family:.3e}, Gram ranks n^2 {ranks_ok}"
        ),
    )
}

fn criterion_5_ou_conversion() -> Outcome {
    let rec = cmd_fig2(opts(FIG_SAMPLES)).expect("fig2 runs");
    let max = rec.summary.max_bloch_dist_sq.0;
    let basis = ou_basis::<f64>().unwrap();
    let mut h_worst: f64 = 0.0;
    for i in 0..H_SAMPLES {
        let p = unit_interval::<f64>(&mut stream_rng(SEED + 5, i as u64));
        let conv = convert_pairs(&ou_channel(p).unwrap(), &basis).unwrap();
        h_worst = h_worst.max((&conv.h - &ou_hermitian_closed_form(p)).max_abs());
    }
    outcome(
        max < FIG_MAX_DIST && h_worst < H_ENTRY_TOL,
        format!("max distance {max:.3e}, max |H - closed form| {h_worst:.3e}"),
    )
}

fn criterion_6_conversion_contract() -> Outcome {
    let (mut complete, mut psd, mut process) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..CONVERSION_SETS {
        let mut rng = stream_rng(SEED + 6, i as u64);
        let n = 2 + i % 3;
        let count = 2 + (i / 3) % 5;
        let f = random_kraus_set::<f64>(n, count, &mut rng).unwrap();
        let (basis, _) = hs_basis::<f64>(n).unwrap();
        let conv = convert(&f, &basis.operators).unwrap();
        complete = complete.max(check_completeness(&conv.f_tilde));
        let min = eig_hermitian(&conv.h, None).unwrap().values.last().copied().unwrap();
        psd = psd.max(-min / conv.h.frobenius_norm());
        process = process.max(process_distance(&f, &conv.f_tilde).unwrap());
    }
    outcome(
        complete < CONVERSION_TOL && psd < CONVERSION_TOL && process < CONVERSION_TOL,
        format!("completeness {complete:.3e}, -min eig(H)/||H|| {psd:.3e}, process distance {process:.3e}"),
    )
}

fn criterion_7_recovery() -> Outcome {
    let code = CodeSpec::<f64>::bitflip();
    let (plan, bar) = plan_from_alpha(&bitflip_errors(), &code).unwrap();
    let diag = diagonality_residual(&bar.f_bar, &bar.d, &code.projector).unwrap();
    let synd = syndrome_identity_residual(&plan, &bar, &code.projector).unwrap();
    let noises: Vec<_> = (0..RECOVERY_CHANNELS)
        .map(|j| random_bitflip_noise::<f64>(&mut stream_rng(SEED + 7, j as u64)).unwrap())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..RECOVERY_STATES {
        let rho = random_density::<f64>(2, &mut stream_rng(SEED + 70, i as u64));
        for noise in &noises {
            let out = recover_end_to_end(&rho, &code, noise, &plan).unwrap();
            worst = worst.max(bloch_distance_sq(&out, &rho).unwrap());
        }
    }
    let z1 = qchan::channels::KrausSet::new(vec![three_qubit_pauli(3, 1)], "z1").unwrap();
    let h = 0.5f64.sqrt();
    let basis_states = [
        vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
        vec![Complex::new(h, 0.0), Complex::new(h, 0.0)],
        vec![Complex::new(h, 0.0), Complex::new(0.0, h)],
    ];
    let control = basis_states
        .into_iter()
        .map(|v| {
            let rho = DensityMatrix::from_pure(&PureState::new(v).unwrap());
            bloch_distance_sq(&recover_end_to_end(&rho, &code, &z1, &plan).unwrap(), &rho).unwrap()
        })
        .fold(0.0f64, f64::max);
    outcome(
        worst < RECOVERY_TOL && control > NEGATIVE_CONTROL_MIN && diag < RECOVERY_TOL && synd < RECOVERY_TOL,
        format!(
            "max distance {worst:.3e} over {RECOVERY_STATES}x{RECOVERY_CHANNELS}, Z1 control {control:.3e}, diagonality {diag:.3e}, syndrome identity {synd:.3e}"
        ),
    )
}

fn criterion_8_state_ru() -> Outcome {
    let rec = cmd_fig3(4, opts(FIG_SAMPLES)).expect("fig3 runs");
    let max = rec.summary.max_bloch_dist_sq.0;
    let complete = rec
        .per_sample
        .iter()
        .map(|r| r.completeness_defect.map_or(f64::INFINITY, |c| c.0))
        .fold(0.0f64, f64::max);
    outcome(
        max < FIG_MAX_DIST && complete < COMPLETENESS_TOL,
        format!("max distance {max:.3e}, max completeness defect {complete:.3e}"),
    )
}

// Knill-Laflamme on an orthonormal code basis: <i|A^dag B|j> = c δ_ij
fn brute_force_satisfied(errors: &[M], p: &M) -> bool {
    let d_total = p.rows();
    let mut code: Vec<Vec<Complex<f64>>> = Vec::new();
    for col in 0..d_total {
        let mut v = p.column(col);
        for b in &code {
            let proj: Complex<f64> = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            code.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let k = code.len();
    for a in errors {
        for b in errors {
            let mut elems = vec![vec![Complex::new(0.0, 0.0); k]; k];
            for (j, vj) in code.iter().enumerate() {
                let bj: Vec<Complex<f64>> = (0..d_total)
                    .map(|r| (0..d_total).map(|c| b[(r, c)] * vj[c]).sum())
                    .collect();
                let abj: Vec<Complex<f64>> = (0..d_total)
                    .map(|r| (0..d_total).map(|c| a[(c, r)].conj() * bj[c]).sum())
                    .collect();
                for (i, vi) in code.iter().enumerate() {
                    elems[i][j] = vi.iter().zip(&abj).map(|(x, y)| x.conj() * y).sum();
                }
            }
            for i in 0..k {
                for j in 0..k {
                    let want = if i == j { elems[0][0] } else { Complex::new(0.0, 0.0) };
                    if (elems[i][j] - want).norm() > ORACLE_TOL {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn criterion_9_checker_oracle() -> Outcome {
    let fixtures = correctability_fixtures::<f64>().unwrap();
    let mut mismatches = Vec::new();
    let mut counted = 0;
    for fx in &fixtures {
        if fx.projector.rows() > ORACLE_DIM_MAX {
            mismatches.push(format!("{} exceeds dimension {ORACLE_DIM_MAX}", fx.name));
            continue;
        }
        counted += 1;
        let verdict = qchan::correctability::check_correctability(&fx.errors, &fx.projector)
            .unwrap()
            .verdict
            .is_satisfied();
        if verdict != brute_force_satisfied(fx.errors.operators(), &fx.projector) {
            mismatches.push(fx.name.to_string());
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{counted} fixtures, mismatches: [{}]", mismatches.join(", ")),
    )
}

fn criterion_10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qchan");
    let runs: [&[&str]; 8] = [
        &["fig1", "--n", "4", "--samples", "200", "--seed", "3"],
        &["fig2", "--samples", "200", "--seed", "3"],
        &["fig3", "--n", "4", "--samples", "200", "--seed", "3"],
        &["build-ru", "--n", "4"],
        &["check-hs", "--n", "4"],
        &["check-correctability", "--fixtures"],
        &["recover-demo", "--samples", "20", "--seed", "3"],
        &["state-ru", "--n", "4", "--seed", "3"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let go = |threads: &str| {
            Command::new(bin)
                .args(args)
                .env("RAYON_NUM_THREADS", threads)
                .env_remove("QCHAN_TOL")
                .output()
                .expect("binary runs")
                .stdout
        };
        let (a, b, c) = (go("1"), go("4"), go("4"));
        if a.is_empty() || a != b || b != c {
            differing.push(args[0]);
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} commands rerun with 1 and 4 threads, differing: [{}]", runs.len(), differing.join(", ")),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "depolarization reproduction", criterion_1_depolarization),
        (2, "maximal mixing", criterion_2_maximal_mixing),
        (3, "dephasing recursion", criterion_3_dephasing),
        (4, "T certificate", criterion_4_t_certificate),
        (5, "OU conversion reproduction", criterion_5_ou_conversion),
        (6, "conversion contract", criterion_6_conversion_contract),
        (7, "bit-flip recovery", criterion_7_recovery),
        (8, "state-dependent RU reproduction", criterion_8_state_ru),
        (9, "correctability oracle agreement", criterion_9_checker_oracle),
        (10, "determinism", criterion_10_determinism),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = run();
        failed += usize::from(!o.passed);
        println!("criterion {id:>2} {}: {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
