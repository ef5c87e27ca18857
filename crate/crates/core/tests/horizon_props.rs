use proptest::prelude::*;
use relqi::horizon::{
    evaporate, evaporate_rk4, rindler_mode_state, superscattering, superscattering_certificate, thermal_oscillator_entropy,
    unruh_temperature, BlackHole, PhysicalConstants,
};
use relqi::linalg;
use relqi::qstate::DensityMatrix;
use relqi::random::{haar_unitary, random_density_matrix, trial_rng};

proptest! {
    #[test]
    fn geometric_results_convert_to_si(m_kg in 1e10..1e36f64, a in 1e-3..1e20f64) {
        let si = PhysicalConstants::<f64>::si();
        let geo = PhysicalConstants::<f64>::geometric();
        let m_geo = si.g * m_kg / (si.c * si.c);
        let (g, s) = (BlackHole::new(m_geo).unwrap(), BlackHole::new(m_kg).unwrap());
        let rel = |x: f64, y: f64| (x / y - 1.0).abs();
        prop_assert!(rel(g.hawking_temperature(&geo) * si.hbar * si.c / si.k_b, s.hawking_temperature(&si)) < 1e-10);
        prop_assert!(rel(g.bekenstein_entropy(&geo) / si.planck_length_sq(), s.bekenstein_entropy(&si)) < 1e-10);
        prop_assert!(rel(g.surface_gravity(&geo) * si.c * si.c, s.surface_gravity(&si)) < 1e-10);
        // a in m/s², geometric acceleration a/c² in 1/m, temperature in length⁻¹
        let t_geo = unruh_temperature(a / (si.c * si.c), &geo).unwrap();
        prop_assert!(rel(t_geo * si.hbar * si.c / si.k_b, unruh_temperature(a, &si).unwrap()) < 1e-10);
    }

    #[test]
    fn scaling_laws(m in 1e-3..1e6f64, k in 1.5..10.0f64) {
        let geo = PhysicalConstants::<f64>::geometric();
        let (a, b) = (BlackHole::new(m).unwrap(), BlackHole::new(k * m).unwrap());
        prop_assert!((b.hawking_temperature(&geo) * k / a.hawking_temperature(&geo) - 1.0).abs() < 1e-12);
        prop_assert!((b.surface_gravity(&geo) * k / a.surface_gravity(&geo) - 1.0).abs() < 1e-12);
        prop_assert!((b.bekenstein_entropy(&geo) / (k * k) / a.bekenstein_entropy(&geo) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rindler_entropy_is_thermal(omega in 0.01..5.0f64, a in 0.1..10.0f64) {
        let st = rindler_mode_state(omega, a, 0).unwrap();
        prop_assert!((st.entropy() - thermal_oscillator_entropy(st.analytic_mean_occupation())).abs() < 1e-10);
    }

    #[test]
    fn closed_form_evaporation_matches_ode(frac in 0.0..0.99f64, m0 in 1e9..1e13f64) {
        let k = relqi::horizon::K_EVAP_DEFAULT;
        let t = frac * k * m0.powi(3);
        let closed = evaporate(m0, t, k).unwrap().mass;
        prop_assert!((evaporate_rk4(m0, t, k, 4000).unwrap() / closed - 1.0).abs() < 1e-3);
    }

    #[test]
    fn superscattering_outputs_are_states(seed in any::<u64>(), d in 2usize..4, d_hole in 2usize..4) {
        let mut rng = trial_rng(seed, 0);
        let s = haar_unitary::<f64, _>(d * d_hole, &mut rng);
        let rho = DensityMatrix::new(random_density_matrix(d, &mut rng)).unwrap();
        let out = superscattering(&s, &rho, d_hole).unwrap();
        prop_assert!(DensityMatrix::new(out.matrix().clone()).is_ok());
        prop_assert!((linalg::trace(out.matrix()).re - 1.0).abs() < 1e-12);
        prop_assert!(superscattering_certificate(&s, d, d_hole).unwrap().is_cp);
    }
}
