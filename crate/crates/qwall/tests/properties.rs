//! Randomized invariants of the schedule, occupation and phase machinery.

use num_complex::Complex64;
use proptest::prelude::*;
use qwall::hardwall;
use qwall::occupation::{adiabatic_force, OccupationModel};
use qwall::schedule::WallSchedule;
use qwall::types::{BasisKind, SpectralState};

fn sqrt_law_strategy() -> impl Strategy<Value = WallSchedule> {
    // c > 0 keeps L(0) > 0; a >= 0 and b >= 0 keep L positive forward in time
    (0.0..2.0f64, 0.0..1.5f64, 0.2..4.0f64)
        .prop_map(|(a, b, c)| WallSchedule::sqrt_law(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaled_time_is_increasing_and_additive(
        w in sqrt_law_strategy(),
        t1 in 0.01..1.5f64,
        dt in 0.01..1.5f64,
    ) {
        let tau1 = w.scaled_time(t1).unwrap();
        let tau2 = w.scaled_time(t1 + dt).unwrap();
        prop_assert!(tau2 > tau1);
        // additivity over adjacent intervals via the shifted schedule
        let (l1, ld1, _) = w.eval_length(t1).unwrap();
        let (a, b, c) = match w.kind {
            qwall::schedule::WallKind::SqrtLaw { a, b, c } => (a, b, c),
            _ => unreachable!(),
        };
        // L^2(t1 + s) = a s^2 + (2 a t1 + b) s + L^2(t1)
        let shifted = WallSchedule::sqrt_law(a, 2.0 * a * t1 + b, a * t1 * t1 + b * t1 + c).unwrap();
        let _ = (l1, ld1);
        let tau_shift = shifted.scaled_time(dt).unwrap();
        prop_assert!((tau1 + tau_shift - tau2).abs() < 1e-12 * tau2.max(1.0));
    }

    #[test]
    fn l_cubed_lddot_is_constant(w in sqrt_law_strategy(), t in 0.0..2.0f64) {
        let b2 = w.b_squared();
        let (l, _, ldd) = w.eval_length(t).unwrap();
        prop_assert!((l.powi(3) * ldd + b2 / 4.0).abs() < 1e-10 * (1.0 + b2.abs()));
    }

    #[test]
    fn propagation_preserves_norm_and_composes(
        res in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8),
        tau1 in 0.0..3.0f64,
        tau2 in 0.0..3.0f64,
    ) {
        let mut coeffs: Vec<Complex64> =
            res.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        for c in coeffs.iter_mut() {
            *c /= norm;
        }
        let st = SpectralState::new(BasisKind::BoxSine, coeffs, 1);
        let once = hardwall::propagate(&st, tau1 + tau2, 1.0);
        let twice = hardwall::propagate(&hardwall::propagate(&st, tau1, 1.0), tau2, 1.0);
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
        for (a, b) in once.coeffs.iter().zip(&twice.coeffs) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn occupation_weights_bounded_and_monotone(
        beta in 0.01..5.0f64,
        mu in -5.0..40.0f64,
    ) {
        let m = OccupationModel::finite_t(beta, mu).unwrap();
        let mut prev = f64::INFINITY;
        for n in 1..=40usize {
            let f = m.weight_box(n, 1.0);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f <= prev + 1e-15);
            prev = f;
        }
    }

    #[test]
    fn adiabatic_force_scales_as_inverse_cube(
        n in 1usize..6,
        l1 in 0.3..3.0f64,
        l2 in 0.3..3.0f64,
    ) {
        let m = OccupationModel::zero_t(n).unwrap();
        let f1 = adiabatic_force(&m, l1, 64).unwrap();
        let f2 = adiabatic_force(&m, l2, 64).unwrap();
        prop_assert!((f1 * l1.powi(3) - f2 * l2.powi(3)).abs() < 1e-9 * f1 * l1.powi(3));
    }

    #[test]
    fn force_total_is_exact_sum(ld in -0.2..0.2f64, t in 0.0..1.0f64) {
        let w = WallSchedule::linear(1.0, ld).unwrap();
        prop_assume!(w.eval_length(t).is_ok());
        let jt = qwall::jtable::JTable::build(24).unwrap();
        let tr = hardwall::trajectory(1, &w, 24, &[t], hardwall::EvalMode::Instantaneous, &jt)
            .unwrap();
        let f = tr.samples[0].force;
        prop_assert_eq!(f.total(), f.adiabatic + f.non_adiabatic);
    }

    #[test]
    fn jtable_symmetries(n in 1usize..30, l in 1usize..30) {
        prop_assert_eq!(qwall::jtable::j2(n, l), qwall::jtable::j2(l, n));
        prop_assert_eq!(qwall::jtable::j3(n, l), qwall::jtable::j3(l, n));
        prop_assert_eq!(qwall::perturbative::gamma(n, l), -qwall::perturbative::gamma(l, n));
    }
}
