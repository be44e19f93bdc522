#![allow(dead_code)]

mod trotter_recursion {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trotter_recursion.rs"));
}

mod detuning_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/detuning_sweep.rs"));
}

mod decay_trace {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decay_trace.rs"));
}

mod dephasing_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dephasing_sweep.rs"));
}

mod wstate_gradient {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/wstate_gradient.rs"));
}

mod dark_state {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dark_state.rs"));
}

mod dispersive_error {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dispersive_error.rs"));
}

mod run_config {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/run_config.rs"));
}

mod hermitian_tools {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hermitian_tools.rs"));
}

#[test]
fn trotter_example_runs() {
    let rows = trotter_recursion::run_example().unwrap();
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert!((r.closed_form - r.averaged).abs() < 1e-12);
    }
}

#[test]
fn detuning_example_runs() {
    let sweep = detuning_sweep::run_example(vec![800.0, 1200.0]).unwrap();
    assert_eq!(sweep.points.len(), 2);
    assert!((sweep.exponent - 2.0).abs() < 0.1);
}

#[test]
fn decay_example_runs() {
    let v = decay_trace::run_example(20_000.0).unwrap();
    assert_eq!(v.len(), 3);
    assert!((v[1].tail - 0.5).abs() < 0.02);
    assert!(v[2].tail > v[0].tail);
}

#[test]
fn dephasing_example_runs() {
    let s = dephasing_sweep::run_example(vec![10.0, 20.0], vec![600.0]).unwrap();
    assert_eq!(s.points.len(), 2);
    assert!(s.points[1].lifetime.estimate.t1_eff > s.points[0].lifetime.estimate.t1_eff);
}

#[test]
fn wstate_example_runs() {
    let (tau, curve) = wstate_gradient::run_example(100).unwrap();
    assert!((tau - 178.57).abs() < 0.01);
    assert!(curve.last().unwrap().1 < 1e-12);
}

#[test]
fn dark_state_example_runs() {
    let l = dark_state::run_example(2_000.0).unwrap();
    assert!(l.dark_max_control < 1e-6);
    assert!((l.bright_swap_population - 1.0).abs() < 1e-6);
}

#[test]
fn dispersive_example_runs() {
    let rows = dispersive_error::run_example(20.0).unwrap();
    assert!((rows[0].1 - std::f64::consts::PI / 10.0).abs() < 1e-12);
}

#[test]
fn config_example_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let cfg = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/wstate.json");
    let report = run_config::run_example(&cfg, Some(&out)).unwrap();
    assert!(report.summary().starts_with("wstate"));
    assert!(std::fs::read_to_string(out).unwrap().starts_with("theta_rad,"));
}

#[test]
fn hermitian_example_runs() {
    let (values, err) = hermitian_tools::run_example().unwrap();
    assert_eq!(values.len(), 4);
    assert!(err < 1e-12);
}
