use proptest::prelude::*;
use relqi::channel::{apply, chsh_value, choi_and_cp_check, kraus_from_unitary, povm_of, ChshSettings, KrausSet, LinearMap};
use relqi::linalg::{self, CMat};
use relqi::qstate::{DensityMatrix, PureState};
use relqi::random::{haar_state, haar_unitary, random_density_matrix, trial_rng, unit_vector3};

/// Two-outcome instrument from the blocks of a random unitary.
fn instrument(d: usize, seed: u64) -> KrausSet<f64> {
    let u: CMat<f64> = haar_unitary(2 * d, &mut trial_rng(seed, 0));
    let a0 = u.view((0, 0), (d, d)).into_owned();
    let a1 = u.view((d, 0), (d, d)).into_owned();
    KrausSet::new(d, d, vec![vec![a0], vec![a1]]).unwrap()
}

/// Premeasurement with a random unitary on system ⊗ apparatus.
fn premeasurement(d_sys: usize, d_app: usize, seed: u64) -> KrausSet<f64> {
    let mut rng = trial_rng(seed, 1);
    let u = haar_unitary(d_sys * d_app, &mut rng);
    let init = PureState::new(haar_state(d_app, &mut rng)).unwrap();
    let split = 1 + (seed as usize) % (d_app - 1);
    let basis: Vec<_> = (0..d_app).map(|i| linalg::basis::<f64>(d_app, i)).collect();
    let partition = vec![basis[..split].to_vec(), basis[split..].to_vec()];
    kraus_from_unitary(&u, &init, &partition).unwrap()
}

proptest! {
    #[test]
    fn instruments_are_complete_and_conserve_probability(seed in any::<u64>(), d in 2usize..4, d_app in 2usize..4) {
        for k in [instrument(d, seed), premeasurement(d, d_app, seed)] {
            let povm = povm_of(&k).unwrap();
            let sum = povm.elements().iter().fold(linalg::zeros::<f64>(d, d), |a, e| a + e);
            prop_assert!(linalg::max_abs(&(sum - linalg::identity::<f64>(d))) < 1e-12);
            let rho = DensityMatrix::new(random_density_matrix(d, &mut trial_rng(seed, 2))).unwrap();
            let total: f64 = apply(&k, &rho).unwrap().iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn premeasurements_certify_cp(seed in any::<u64>(), d in 2usize..4, d_app in 2usize..4) {
        let k = premeasurement(d, d_app, seed);
        let cert = choi_and_cp_check(&LinearMap::Kraus(&k)).unwrap();
        prop_assert!(cert.is_cp && cert.min_eig > -1e-12);
    }

    #[test]
    fn commuting_local_operations_are_order_independent(sa in any::<u64>(), sb in any::<u64>(), sr in any::<u64>()) {
        let a = instrument(2, sa).embed_first(3);
        let b = instrument(3, sb).embed_second(2);
        let rho = random_density_matrix::<f64, _>(6, &mut trial_rng(sr, 3));
        for mu in 0..a.num_outcomes() {
            for nu in 0..b.num_outcomes() {
                let ab = b.apply_outcome(nu, &a.apply_outcome(mu, &rho));
                let ba = a.apply_outcome(mu, &b.apply_outcome(nu, &rho));
                prop_assert!(linalg::max_abs(&(ab - ba)) < 1e-12);
            }
        }
    }
}

#[test]
fn transpose_map_is_not_cp() {
    for d in 2..5 {
        let t = |m: &CMat<f64>| m.transpose();
        let cert = choi_and_cp_check(&LinearMap::Action { dim_in: d, dim_out: d, action: &t }).unwrap();
        assert!(!cert.is_cp);
        assert!((cert.min_eig * d as f64 + 1.0).abs() < 1e-10 * d as f64);
    }
}

#[test]
fn chsh_never_exceeds_tsirelson() {
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..10_000 {
        let mut rng = trial_rng(202, trial);
        let rho = DensityMatrix::new(random_density_matrix::<f64, _>(4, &mut rng)).unwrap();
        let s = ChshSettings { a1: unit_vector3(&mut rng), a2: unit_vector3(&mut rng), b1: unit_vector3(&mut rng), b2: unit_vector3(&mut rng) };
        let [a1, a2, b1, b2] = s.observables();
        worst = worst.max(chsh_value(&rho, &a1, &a2, &b1, &b2).unwrap().abs());
    }
    assert!(worst <= std::f64::consts::SQRT_2 + 1e-9);
}
