use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use antizeno::analysis::{analytic_t1, fit_alpha, power_law_exponent};
use antizeno::decoupling::{orthogonalization_time, w_overlap};
use antizeno::dynamics::{trotter_closed_form, trotter_step, TrotterState};
use antizeno::experiments::{format_sig, Axis, ExperimentKind, SweepConfig, TimeNs};
use antizeno::linalg::{eigh, herm_expm, unitarity_error, ComplexMatrix};
use antizeno::model::{mhz_to_rad_per_ns, rad_per_ns_to_mhz, HybridParams};

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
        let a = ComplexMatrix::from_fn(n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1)).unwrap();
        (&a + &a.adjoint()).scale_real(0.5)
    })
}

fn params() -> impl Strategy<Value = HybridParams> {
    (1.0..60.0f64, 100.0..3000.0f64, 2.0..80.0f64)
        .prop_map(|(g, d, t2)| HybridParams::from_mhz(g, d, t2, f64::INFINITY).unwrap())
}

proptest! {
    #[test]
    fn expm_is_unitary_and_reversible(h in hermitian(4), t in -20.0..20.0f64) {
        let u = herm_expm(&h, t).unwrap();
        let back = herm_expm(&h, -t).unwrap();
        prop_assert!(unitarity_error(&u) < 1e-10);
        let id = u.matmul(&back).unwrap();
        prop_assert!(id.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) < 1e-10);
    }

    #[test]
    fn eigh_reconstructs(h in hermitian(8)) {
        let e = eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn overlap_vanishes_at_winding_multiples(n in 2usize..=200, k in 1usize..200) {
        prop_assume!(k < n);
        prop_assert!(w_overlap(n, 2.0 * PI * k as f64 / n as f64).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn overlap_is_periodic_and_bounded(n in 1usize..300, theta in -50.0..50.0f64) {
        let a = w_overlap(n, theta).unwrap();
        let b = w_overlap(n, theta + 2.0 * PI).unwrap();
        prop_assert!((a - b).norm() <= 1e-12);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn orthogonalization_closure(mu in 1.0..50.0f64, grad in 0.1..100.0f64, len_um in 1.0..100.0f64) {
        let tau = orthogonalization_time(mu, grad, len_um * 1e-6).unwrap();
        let closure = tau * 1e-9 * mu * 1e9 * grad * len_um * 1e-6;
        prop_assert!((closure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trotter_preserves_distribution(p in params(), tau in 0.01..50.0f64, pa in 0.0..1.0f64) {
        let s = TrotterState::new(pa, 1.0 - pa).unwrap();
        let next = trotter_step(&s, &p, tau).unwrap();
        prop_assert!((next.p_a + next.p_b - 1.0).abs() < 1e-12);
        prop_assert!(next.p_b >= -1e-15 && next.p_b <= 1.0 + 1e-15);
    }

    #[test]
    fn closed_form_decreases_toward_half(p in params(), n in 0u64..5000) {
        let a = trotter_closed_form(n, &p).p_b;
        let b = trotter_closed_form(n + 1, &p).p_b;
        prop_assert!(b <= a && b >= 0.5);
    }

    #[test]
    fn alpha_is_recovered(alpha in 0.1..2.0f64, ps in prop::collection::vec(params(), 1..8)) {
        let pts: Vec<_> = ps.iter().map(|p| (*p, analytic_t1(p, alpha).unwrap())).collect();
        prop_assert!((fit_alpha(&pts).unwrap() - alpha).abs() < 1e-12 * alpha.max(1.0));
    }

    #[test]
    fn power_law_is_recovered(k in -3.0..3.0f64, c in 0.1..10.0f64) {
        let pts: Vec<_> = [1.0, 2.0, 5.0, 11.0].iter().map(|&x: &f64| (x, c * x.powf(k))).collect();
        prop_assert!((power_law_exponent(&pts).unwrap() - k).abs() < 1e-10);
    }

    #[test]
    fn analytic_lifetime_grows_with_detuning_and_dephasing(p in params(), s in 1.01..3.0f64) {
        let base = analytic_t1(&p, 0.5).unwrap();
        let wider = HybridParams { delta: p.delta * s, ..p };
        let slower = HybridParams { t2_sc: p.t2_sc * s, ..p };
        prop_assert!(analytic_t1(&wider, 0.5).unwrap() > base);
        prop_assert!((analytic_t1(&slower, 0.5).unwrap() / base - s).abs() < 1e-12);
    }

    #[test]
    fn unit_conversion_round_trips(f in -1e4..1e4f64) {
        let back = rad_per_ns_to_mhz(mhz_to_rad_per_ns(f));
        prop_assert!((back - f).abs() <= 1e-12 * f.abs().max(1.0));
    }

    #[test]
    fn formatted_numbers_keep_nine_digits(x in -1e12..1e12f64) {
        let s = format_sig(x, 9);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-9 * x.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn config_round_trips(
        kind in prop::sample::select(ExperimentKind::ALL.to_vec()),
        g in prop::option::of(0.5..100.0f64),
        t2 in prop::option::of(prop_oneof![Just(f64::INFINITY), 1.0..100.0f64]),
        t1 in prop::option::of(prop_oneof![Just(f64::INFINITY), 10.0..1000.0f64]),
        t_max in prop::option::of(1e3..1e5f64),
        steps in prop::collection::vec(0.1..10.0f64, 1..6),
    ) {
        let mut cfg = SweepConfig::new(kind);
        cfg.g_over_2pi_mhz = g;
        cfg.t2_sc_ns = t2.map(TimeNs);
        cfg.t1_sc_ns = t1.map(TimeNs);
        cfg.t_max_ns = t_max;
        if let Some(axis) = cfg.sweep() {
            let start = axis.values[0];
            let values = steps.iter().scan(start, |v, d| { *v += d; Some(*v) }).collect();
            cfg.sweep = Some(Axis::new(&axis.field, values));
        }
        let text = cfg.to_json().unwrap();
        let again = SweepConfig::from_json(&text).unwrap();
        prop_assert_eq!(&again, &cfg);
        prop_assert_eq!(again.to_json().unwrap(), text);
    }
}

#[test]
fn config_unit_conversion_is_exact() {
    let cfg = SweepConfig::from_json(r#"{"experiment": "decay-trace", "g_over_2pi_mhz": 25}"#).unwrap();
    let g = cfg.params().unwrap().hybrid().unwrap().g;
    let expected = 2.0 * PI * 0.025;
    assert!(((g - expected) / expected).abs() <= 1e-15);
}
