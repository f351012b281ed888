use chns_core::potential::{
    f_of_potential, f_prime_of_potential, free_energy, stabilization_alpha, PotentialKind,
    PotentialSpec, DEFAULT_CLAMP_DELTA,
};
use chns_core::Error;
use proptest::prelude::*;

fn log(theta: f64, theta_c: f64) -> PotentialSpec {
    PotentialSpec::logarithmic(theta, theta_c, DEFAULT_CLAMP_DELTA).unwrap()
}

fn kinds() -> [PotentialSpec; 3] {
    [PotentialSpec::polynomial(), log(1.0, 2.0), log(1.5, 2.0)]
}

#[test]
fn free_energy_examples() {
    let p = PotentialSpec::polynomial();
    assert_eq!(free_energy(&p, 0.0).unwrap(), 0.25);
    assert_eq!(free_energy(&p, 1.0).unwrap(), 0.0);
    assert_eq!(free_energy(&p, -1.0).unwrap(), 0.0);
    let l = log(1.0, 2.0);
    assert_eq!(free_energy(&l, 0.0).unwrap(), 0.0);
    assert_eq!(f_of_potential(&l, 0.0).unwrap(), 0.0);
    for s in [0.1, 0.5, 0.9] {
        assert_eq!(
            f_of_potential(&l, -s).unwrap(),
            -f_of_potential(&l, s).unwrap()
        );
    }
    assert!(matches!(free_energy(&p, f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(
        f_of_potential(&l, f64::NAN),
        Err(Error::Domain(_))
    ));
}

#[test]
fn closed_forms() {
    let p = PotentialSpec::polynomial();
    let l = log(1.0, 2.0);
    for s in [-0.7, -0.2, 0.3, 0.8] {
        assert!((f_of_potential(&p, s).unwrap() - (s * s * s - s)).abs() < 1e-15);
        assert!((f_prime_of_potential(&p, s).unwrap() - (3.0 * s * s - 1.0)).abs() < 1e-15);
        let f = 0.5 * ((1.0 + s) / (1.0 - s)).ln() - 2.0 * s;
        assert!((f_of_potential(&l, s).unwrap() - f).abs() < 1e-14);
        let fp = 1.0 / (1.0 - s * s) - 2.0;
        assert!((f_prime_of_potential(&l, s).unwrap() - fp).abs() < 1e-14);
    }
}

#[test]
fn singular_limit() {
    let l = log(1.0, 2.0);
    assert!(f_of_potential(&l, 1.0 - 1e-6).unwrap() > 5.0);
    assert!(f_of_potential(&l, -1.0 + 1e-6).unwrap() < -5.0);
    assert!(matches!(l.f_unclamped(1.0), Err(Error::Domain(_))));
    assert!(matches!(l.f_prime_unclamped(-1.0), Err(Error::Domain(_))));
    // Clamped queries stay finite past the endpoints.
    assert!(l.f(1.5).unwrap().is_finite());
}

#[test]
fn alpha_examples() {
    assert_eq!(
        stabilization_alpha(&PotentialSpec::polynomial()).unwrap(),
        1.0
    );
    assert_eq!(stabilization_alpha(&log(1.0, 2.0)).unwrap(), 1.0);
    assert_eq!(stabilization_alpha(&log(1.5, 2.0)).unwrap(), 0.5);
}

#[test]
fn invalid_specs() {
    assert!(matches!(
        PotentialSpec::logarithmic(2.0, 2.0, DEFAULT_CLAMP_DELTA),
        Err(Error::Config(_))
    ));
    assert!(PotentialSpec::logarithmic(3.0, 2.0, DEFAULT_CLAMP_DELTA).is_err());
    assert!(PotentialSpec::logarithmic(-1.0, 2.0, DEFAULT_CLAMP_DELTA).is_err());
    assert!(PotentialSpec::logarithmic(1.0, 2.0, 0.0).is_err());
    assert!(PotentialSpec::logarithmic(1.0, 2.0, 2e-3).is_err());
    assert!(PotentialSpec::logarithmic(1.0, 2.0, 1e-3).is_ok());
}

#[test]
fn f_prime_lower_bound() {
    for spec in kinds() {
        let alpha = spec.stabilization_alpha().unwrap();
        let worst = (0..=20000)
            .map(|i| -1.0 + 2.0 * i as f64 / 20000.0)
            .map(|s| spec.f_prime(s).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(worst >= -alpha - 1e-12, "{:?}: min f' = {worst}", spec.kind);
    }
}

#[test]
fn endpoint_continuity() {
    let p = PotentialSpec::polynomial();
    assert_eq!(free_energy(&p, 1.0).unwrap(), 0.0);
    for (theta, theta_c) in [(1.0, 2.0), (1.5, 2.0)] {
        let l = log(theta, theta_c);
        let limit = theta * 2f64.ln() - theta_c / 2.0;
        for s in [1.0 - 1e-9, -1.0 + 1e-9, 1.0, -1.0] {
            assert!((free_energy(&l, s).unwrap() - limit).abs() < 1e-6);
        }
    }
}

#[test]
fn continuity_predicate() {
    assert!(PotentialSpec::polynomial().f_prime_continuous_on_closed_interval());
    assert!(!log(1.0, 2.0).f_prime_continuous_on_closed_interval());
    assert_eq!(PotentialSpec::polynomial().kind, PotentialKind::Polynomial);
}

proptest! {
    #[test]
    fn f_is_derivative_of_free_energy(s in -0.99f64..0.99, which in 0usize..3) {
        let spec = kinds()[which];
        let h = 1e-5;
        let fd = (free_energy(&spec, s + h).unwrap() - free_energy(&spec, s - h).unwrap()) / (2.0 * h);
        let f = f_of_potential(&spec, s).unwrap();
        prop_assert!((fd - f).abs() <= 1e-6 * f.abs().max(1.0));
    }

    #[test]
    fn f_prime_is_derivative_of_f(s in -0.99f64..0.99, which in 0usize..3) {
        let spec = kinds()[which];
        let h = 1e-6;
        let fd = (f_of_potential(&spec, s + h).unwrap() - f_of_potential(&spec, s - h).unwrap()) / (2.0 * h);
        let fp = f_prime_of_potential(&spec, s).unwrap();
        prop_assert!((fd - fp).abs() <= 1e-5 * fp.abs().max(1.0));
    }
}
