use qchan::correctability::{convert_pairs, ou_basis, ou_channel};
use qchan::recovery::{bitflip_errors, plan_from_alpha, random_bitflip_noise, recover_end_to_end, CodeSpec};
use qchan::rng::stream_rng;
use qchan::ru::{hs_basis, ru_kraus_set};
use qchan::states::{bloch_distance_sq, random_density};
use qchan::{Matrix32, Real};

#[test]
fn f32_pipelines_run_at_single_precision() {
    let rho = random_density::<f32>(4, &mut stream_rng(1, 0));
    let mixed = ru_kraus_set::<f32>(4).unwrap().apply(&rho).unwrap();
    let target = Matrix32::identity(4).scale_real(0.25);
    assert!((mixed.matrix() - &target).frobenius_norm() < 1e-5);

    let (_, cert) = hs_basis::<f32>(4).unwrap();
    assert_eq!(cert.rank, 16);

    let f = ou_channel::<f32>(0.4).unwrap();
    let conv = convert_pairs(&f, &ou_basis().unwrap()).unwrap();
    let a = f.apply(&rho).unwrap();
    let b = conv.f_tilde.apply(&rho).unwrap();
    assert!(bloch_distance_sq(&a, &b).unwrap() < 1e-8);

    let code = CodeSpec::<f32>::bitflip();
    let (plan, _) = plan_from_alpha(&bitflip_errors(), &code).unwrap();
    let mut rng = stream_rng(2, 0);
    let noise = random_bitflip_noise::<f32>(&mut rng).unwrap();
    let q = random_density::<f32>(2, &mut rng);
    let out = recover_end_to_end(&q, &code, &noise, &plan).unwrap();
    assert!(bloch_distance_sq(&out, &q).unwrap().as_f64() < 1e-8);
}
