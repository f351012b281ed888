mod common;

use chns_core::io::{read_snapshot, write_snapshot};
use chns_core::potential::PotentialSpec;
use chns_core::solver::initial::{spinodal, taylor_green, taylor_green_exact};
use chns_core::solver::{
    capillary_force, chemical_potential, korteweg_force, simulate, step, OutputPlan, PhysParams,
    State, StepperConfig,
};
use chns_core::spectral::{divergence_defect, laplacian};
use chns_core::{Error, Grid, ScalarField, VectorField};
use common::*;

fn poly(nu: f64, gamma: f64, m: f64) -> PhysParams {
    PhysParams::new(nu, gamma, m, PotentialSpec::polynomial()).unwrap()
}

fn g2(n: usize) -> Grid {
    Grid::new(2, n).unwrap()
}

#[test]
fn params_validation() {
    let p = PotentialSpec::polynomial();
    let err = PhysParams::new(-1.0, 1.0, 1.0, p).unwrap_err();
    assert!(matches!(&err, Error::Config(m) if m.contains("viscosity") && m.contains("positive")));
    assert!(PhysParams::new(1.0, 0.0, 1.0, p).is_err());
    assert!(PhysParams::new(1.0, 1.0, 0.0, p).is_err());
    let params = poly(1.0, 1.0, 1.0);
    assert_eq!(params.stabilization, 1.0);
    assert!(params.is_stabilized());
    assert!(!params.with_stabilization(0.4).unwrap().is_stabilized());
    assert!(params.with_stabilization(-1.0).is_err());
    assert!(StepperConfig::new(0.0).is_err());
    assert!(StepperConfig::new(1e-3).unwrap().dealias);
}

#[test]
fn chemical_potential_examples() {
    let g = g2(32);
    let params = poly(1.0, 0.5, 1.0);
    assert!(
        chemical_potential(&ScalarField::zeros(g), &params)
            .unwrap()
            .max_abs()
            == 0.0
    );

    let c0 = 0.3;
    let mu = chemical_potential(&ScalarField::constant(g, c0), &params).unwrap();
    assert!(max_diff(&mu, &ScalarField::constant(g, c0 * c0 * c0 - c0)) < 1e-15);

    let a = 1e-4;
    let c = ScalarField::from_fn(g, |x| a * x[0].sin());
    let mu = chemical_potential(&c, &params).unwrap();
    let lin = c.scale(params.gamma - 1.0);
    assert!(max_diff(&mu, &lin) <= 2.0 * a * a * a);
    // Exact form, with f applied pointwise.
    let exact = c
        .map(|s| s * s * s - s)
        .sub(&laplacian(&c).scale(params.gamma));
    assert!(max_diff(&mu, &exact) < 1e-15);
}

#[test]
fn capillary_force_examples() {
    let g = g2(64);
    let params = poly(1.0, 0.7, 1.0);
    let c = ScalarField::constant(g, 0.2);
    let mu = chemical_potential(&c, &params).unwrap();
    assert!(capillary_force(&c, &mu, &params).max_abs() == 0.0);

    let c = band_limited(g, 6, 3);
    let mu = ScalarField::constant(g, 1.7);
    assert!(capillary_force(&c, &mu, &params).max_abs() < 1e-12);

    let c = band_limited(g, 2, 4).scale(0.8);
    let mu = chemical_potential(&c, &params).unwrap();
    let a = capillary_force(&c, &mu, &params);
    let b = korteweg_force(&c, &params);
    let d = a.sub(&b);
    assert!(d.inner(&d).sqrt() <= 1e-8 * a.inner(&a).sqrt());
    assert!(a.is_solenoidal() && divergence_defect(&a) < 1e-12);
}

#[test]
fn constant_state_is_fixed_point() {
    for g in [g2(16), Grid::new(3, 8).unwrap()] {
        let s = State::new(0.0, VectorField::zeros(g), ScalarField::constant(g, 0.4)).unwrap();
        let next = step(&s, &poly(0.1, 1.0, 1.0), &StepperConfig::new(0.1).unwrap()).unwrap();
        assert!(max_diff(&next.c, &s.c) <= 1e-14);
        assert!(next.u.max_abs() <= 1e-14);
        assert_eq!(next.t, 0.1);
    }
}

#[test]
fn taylor_green_decay() {
    let g = g2(64);
    let nu = 0.1;
    let s = State::new(0.0, taylor_green(g, 1.0), ScalarField::zeros(g)).unwrap();
    let run = simulate(
        s,
        &poly(nu, 1.0, 1.0),
        &StepperConfig::new(1e-3).unwrap(),
        1.0,
        &OutputPlan::default(),
    )
    .unwrap();
    assert_eq!(run.steps, 1000);
    let exact = taylor_green_exact(g, nu, 1.0);
    let err = run.final_state.u.sub(&exact);
    assert!(err.inner(&err).sqrt() <= 1e-3 * exact.inner(&exact).sqrt());
}

#[test]
fn mass_conservation_long_run() {
    let g = g2(32);
    let c = spinodal(g, -0.1, 0.2, 8, 5).unwrap();
    let mut s = State::new(0.0, VectorField::zeros(g), c).unwrap();
    let c0 = s.c.mean();
    let params = poly(0.1, 0.02, 1.0);
    let cfg = StepperConfig::new(1e-3).unwrap();
    for _ in 0..1000 {
        s = step(&s, &params, &cfg).unwrap();
    }
    assert!((s.c.mean() - c0).abs() <= 1e-12);
}

#[test]
fn layered_order_parameter_drives_no_flow() {
    let g = g2(32);
    let c = ScalarField::from_fn(g, |x| 0.3 * x[0].cos() + 0.1 * (2.0 * x[0]).sin());
    let s = State::new(0.0, VectorField::zeros(g), c).unwrap();
    let run = simulate(
        s,
        &poly(0.1, 0.05, 1.0),
        &StepperConfig::new(1e-3).unwrap(),
        0.2,
        &OutputPlan::default(),
    )
    .unwrap();
    assert!(run.records.iter().all(|r| r.kinetic <= 1e-20));
}

fn smooth_3d() -> (State, PhysParams) {
    let g = Grid::new(3, 32).unwrap();
    let c = spinodal(g, 0.0, 0.1, 1, 7).unwrap();
    (
        State::new(0.0, taylor_green(g, 0.2), c).unwrap(),
        poly(0.05, 0.05, 0.1),
    )
}

#[test]
fn smooth_3d_run_is_stable() {
    let (s, params) = smooth_3d();
    let run = simulate(
        s,
        &params,
        &StepperConfig::new(1e-3).unwrap(),
        0.5,
        &OutputPlan::default(),
    )
    .unwrap();
    assert_eq!(run.steps, 500);
    assert!(run.final_state.u.is_finite() && run.final_state.c.is_finite());
}

#[test]
fn first_order_convergence() {
    let (s, params) = smooth_3d();
    let t_end = 0.05;
    let run = |dt: f64| {
        simulate(
            s.clone(),
            &params,
            &StepperConfig::new(dt).unwrap(),
            t_end,
            &OutputPlan::default(),
        )
        .unwrap()
        .final_state
    };
    let reference = run(2.5e-3 / 16.0);
    let err = |st: &State| {
        let du = st.u.sub(&reference.u);
        let dc = st.c.sub(&reference.c);
        (du.inner(&du) + dc.inner(&dc)).sqrt()
    };
    let ratio = err(&run(2.5e-3)) / err(&run(1.25e-3));
    assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
}

#[test]
fn blow_up_is_reported() {
    let g = g2(16);
    let c = spinodal(g, 0.0, 50.0, 4, 1).unwrap();
    let s = State::new(0.0, taylor_green(g, 100.0), c).unwrap();
    let params = poly(1e-3, 1e-3, 1.0).with_stabilization(0.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let plan = OutputPlan {
        dir: Some(dir.path().to_path_buf()),
        ..OutputPlan::default()
    };
    let err = simulate(s, &params, &StepperConfig::new(1.0).unwrap(), 1e3, &plan).unwrap_err();
    assert!(matches!(err, Error::BlowUp { dt, .. } if dt == 1.0));
    let csv = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(csv.lines().count() >= 2);
}

#[test]
fn restart_is_bit_exact() {
    let g = g2(32);
    let c = spinodal(g, 0.1, 0.3, 8, 2).unwrap();
    let s = State::new(0.0, band_limited_solenoidal(g, 6, 3).scale(0.3), c).unwrap();
    let params = poly(0.05, 0.02, 0.5);
    let cfg = StepperConfig::new(1.0 / 512.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let plan = OutputPlan {
        snapshot_times: vec![0.125],
        dir: Some(dir.path().to_path_buf()),
        ..OutputPlan::default()
    };
    let full = simulate(s, &params, &cfg, 0.25, &plan).unwrap();
    let restart = read_snapshot(&full.snapshot_paths[0]).unwrap();
    assert_eq!(restart.t, 0.125);
    let cont = simulate(restart, &params, &cfg, 0.25, &OutputPlan::default()).unwrap();
    assert_eq!(cont.final_state, full.final_state);

    let path = dir.path().join("again.nsch");
    write_snapshot(&cont.final_state, &path).unwrap();
    assert_eq!(read_snapshot(&path).unwrap(), full.final_state);
}

#[test]
fn end_time_must_follow_start() {
    let g = g2(16);
    let s = State::new(1.0, VectorField::zeros(g), ScalarField::zeros(g)).unwrap();
    let r = simulate(
        s,
        &poly(1.0, 1.0, 1.0),
        &StepperConfig::new(0.1).unwrap(),
        1.0,
        &OutputPlan::default(),
    );
    assert!(matches!(r, Err(Error::Config(_))));
}

#[test]
fn last_step_lands_on_end_time() {
    let g = g2(16);
    let s = State::new(0.0, taylor_green(g, 1.0), ScalarField::zeros(g)).unwrap();
    let run = simulate(
        s,
        &poly(0.1, 1.0, 1.0),
        &StepperConfig::new(0.03).unwrap(),
        0.1,
        &OutputPlan::default(),
    )
    .unwrap();
    assert_eq!(run.steps, 4);
    assert_eq!(run.final_state.t, 0.1);
    assert_eq!(run.records.last().unwrap().t, 0.1);
}
