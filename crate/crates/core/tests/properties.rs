use netconv::oracle::closed_form_convert;
use netconv::oracle::verify::{random_matrix, well_conditioned_trial};
use netconv::{
    build_p, convert, moebius, vi_to_waves, wave_k, waves_to_vi, ComplexMatrix64, NetworkPoint, PortNormalization,
    Representation, WaveConvention,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use Representation::*;

const REPS: [Representation; 8] = [Z, Y, G, H, A, B, S, T];

fn rep() -> impl Strategy<Value = Representation> {
    prop::sample::select(REPS.to_vec())
}

fn cx(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| Complex64::new(re, im))
}

fn z0() -> impl Strategy<Value = Complex64> {
    (1.0..200.0f64, -100.0..100.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn convention() -> impl Strategy<Value = WaveConvention<f64>> {
    prop_oneof![
        Just(WaveConvention::kurokawa()),
        (0.0..std::f64::consts::TAU).prop_map(|t| WaveConvention::traveling(Complex64::from_polar(1.0, t)).unwrap()),
    ]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wave_round_trip(v in cx(100.0), i in cx(2.0), z0 in z0(), conv in convention()) {
        let k = wave_k(&conv, z0).unwrap();
        let (a, b) = vi_to_waves(v, i, z0, k);
        let (v2, i2) = waves_to_vi(a, b, z0, k).unwrap();
        let scale = v.norm().max((z0 * i).norm());
        prop_assert!((v - v2).norm() <= 1e-12 * scale);
        prop_assert!((i - i2).norm() * z0.norm() <= 1e-12 * scale);
    }

    #[test]
    fn waves_do_not_conjugate(v in cx(100.0), i in cx(2.0), z0 in z0(), conv in convention()) {
        let k = wave_k(&conv, z0).unwrap();
        let (a, b) = vi_to_waves(v, i, z0, k);
        prop_assert!(close(a - b, k * z0 * i * 2.0, 1e-12));
        prop_assert!(close(a + b, k * v * 2.0, 1e-12));
    }

    #[test]
    fn conventions_coincide_for_real_z0(r in 1.0..500.0f64) {
        let z0 = Complex64::new(r, 0.0);
        let kk = wave_k(&WaveConvention::kurokawa(), z0).unwrap();
        let kt = wave_k(&WaveConvention::traveling(Complex64::new(1.0, 0.0)).unwrap(), z0).unwrap();
        prop_assert!(close(kk, kt, 1e-15));
    }

    #[test]
    fn round_trip(from in rep(), to in rep(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (point, _) = well_conditioned_trial::<f64, _>(from, to, 2, &mut rng).unwrap();
        if let Ok(there) = convert(&point, to) {
            if let Ok(back) = convert(&there, from) {
                prop_assert!(back.matrix().rel_diff(point.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn composition_is_transitive(a in rep(), b in rep(), c in rep(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (point, _) = well_conditioned_trial::<f64, _>(a, c, 2, &mut rng).unwrap();
        let (norm, conv) = (point.norm(), point.convention());
        let p_ab = build_p(a, b, norm, conv).unwrap();
        let p_bc = build_p(b, c, norm, conv).unwrap();
        let p_ac = build_p(a, c, norm, conv).unwrap();
        let composed = p_ab.then(&p_bc).unwrap();
        prop_assert!(composed.matrix().rel_diff(p_ac.matrix()) < 1e-10);
        if let Ok(direct) = moebius(&p_ac, point.matrix()) {
            if let Ok(via) = moebius(&p_ab, point.matrix()).and_then(|m| moebius(&p_bc, &m)) {
                prop_assert!(via.rel_diff(&direct) < 1e-8);
            }
        }
    }

    #[test]
    fn scaling_p_leaves_result_unchanged(from in rep(), to in rep(), c in cx(10.0), seed in any::<u64>()) {
        prop_assume!(c.norm() > 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (point, _) = well_conditioned_trial::<f64, _>(from, to, 2, &mut rng).unwrap();
        let p = build_p(from, to, point.norm(), point.convention()).unwrap();
        if let Ok(r1) = moebius(&p, point.matrix()) {
            let r2 = moebius(&p.scaled(c), point.matrix()).unwrap();
            prop_assert!(r2.rel_diff(&r1) < 1e-12);
        }
    }

    #[test]
    fn inverse_map_undoes_forward(from in rep(), to in rep(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let norm = netconv::oracle::verify::random_normalization::<f64, _>(2, &mut rng);
        let conv = netconv::oracle::verify::random_convention::<f64, _>(&mut rng);
        let p = build_p(from, to, &norm, &conv).unwrap();
        let q = build_p(to, from, &norm, &conv).unwrap();
        let id = p.then(&q).unwrap();
        prop_assert!(id.matrix().rel_diff(&ComplexMatrix64::identity(4)) < 1e-12);
    }

    #[test]
    fn z_y_are_matrix_inverses(n in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (point, _) = well_conditioned_trial::<f64, _>(Z, Y, n, &mut rng).unwrap();
        let y = convert(&point, Y).unwrap();
        let inv = point.matrix().inverse().unwrap();
        prop_assert!(y.matrix().rel_diff(&inv) < 1e-10);
    }

    #[test]
    fn agrees_with_closed_forms(pair in prop::sample::select(netconv::oracle::CLOSED_FORM_PAIRS.to_vec()),
                                r in 10.0..200.0f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix::<f64, _>(pair.0, 2, &mut rng);
        let point = NetworkPoint::with_z0(1e9, pair.0, m.clone(), r).unwrap();
        let (Ok(generated), Ok(textbook)) = (convert(&point, pair.1), closed_form_convert(pair, &m, r)) else {
            return Ok(());
        };
        prop_assert!(generated.matrix().rel_diff(&textbook) < 1e-9);
    }

    #[test]
    fn multiport_s_z_round_trip(n in 3usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (point, _) = well_conditioned_trial::<f64, _>(S, Z, n, &mut rng).unwrap();
        let z = convert(&point, Z).unwrap();
        let back = convert(&z, S).unwrap();
        prop_assert!(back.matrix().rel_diff(point.matrix()) < 1e-9);
    }
}

#[test]
fn a_and_b_are_inverse_chain_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (point, _) = well_conditioned_trial::<f64, _>(A, B, 2, &mut rng).unwrap();
        let b = convert(&point, B).unwrap();
        let prod = point.matrix() * b.matrix();
        assert!(prod.rel_diff(&ComplexMatrix64::identity(2)) < 1e-9);
    }
}

#[test]
fn f32_matches_f64_loosely() {
    let s64 = ComplexMatrix64::from_real_rows(&[[0.2, 0.5], [0.6, -0.1]]).unwrap();
    let s32 = netconv::ComplexMatrix32::from_real_rows(&[[0.2f32, 0.5], [0.6, -0.1]]).unwrap();
    let z64 = convert(&NetworkPoint::with_z0(1.0, S, s64, 50.0).unwrap(), Z).unwrap();
    let z32 = convert(&NetworkPoint::with_z0(1.0f32, S, s32, 50.0).unwrap(), Z).unwrap();
    for (a, b) in z64.matrix().as_slice().iter().zip(z32.matrix().as_slice()) {
        assert!((a - Complex64::new(b.re as f64, b.im as f64)).norm() < 1e-4 * a.norm().max(1.0));
    }
}

#[test]
fn per_port_normalization_changes_s_but_not_z() {
    let z = ComplexMatrix64::from_real_rows(&[[80.0, 20.0], [20.0, 60.0]]).unwrap();
    let norm = PortNormalization::new(vec![Complex64::new(50.0, 0.0), Complex64::new(75.0, 0.0)]).unwrap();
    let point = NetworkPoint::new(1.0, Z, z.clone(), norm, WaveConvention::default()).unwrap();
    let s = convert(&point, S).unwrap();
    // port 1 matched check: S11 = (Z_in - 50)/(Z_in + 50) with port 2 terminated in 75 Ω
    let zin = 80.0 - 20.0 * 20.0 / (60.0 + 75.0);
    let s11 = (zin - 50.0) / (zin + 50.0);
    assert!((s.matrix()[(0, 0)] - Complex64::new(s11, 0.0)).norm() < 1e-12);
    let back = convert(&s, Z).unwrap();
    assert!(back.matrix().rel_diff(&z) < 1e-12);
}
