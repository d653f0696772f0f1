use proptest::prelude::*;
use wavecert::exponents::Application;
use wavecert::grid::{Grid, GridParams};
use wavecert::semilinear::*;
use wavecert::solver::solve_linear_with_data;
use wavecert::source::SourceSpec;
use wavecert::Error;

fn cfg(p: f64, damped: bool, horizon: f64) -> SemilinearConfig {
    SemilinearConfig { p, damped, horizon, dr: 1.0 / 16.0, ..Default::default() }
}

#[test]
fn zero_data_stays_zero() {
    for damped in [false, true] {
        let r = evolve_semilinear(&cfg(2.0, damped, 5.0), &CauchyData::positive(0.0)).unwrap();
        assert_eq!(r.outcome, Outcome::GlobalToHorizon { horizon: 5.0 });
        assert!(r.amplitude.iter().all(|(_, a)| *a == 0.0));
        assert!(r.q.iter().all(|(_, q)| *q == 0.0));
        assert!(r.threshold.is_infinite());
    }
}

#[test]
fn liouville_velocity_and_roundtrip() {
    let grid = Grid::new(GridParams::new(1.0 / 16.0, 2.0, 2)).unwrap();
    let data = CauchyData::with_angular(0.5);
    let (mut u, mut ut) = data.sample(&grid).unwrap();
    let (u0, ut0) = (u.clone(), ut.clone());
    assert!(ut0.iter().all(|v| *v == 0.0));
    liouville(&mut u, &mut ut, 0.0, Direction::Forward);
    assert_eq!(u, u0);
    for (a, b) in ut.iter().zip(&u0) {
        assert!((a - b).abs() <= 1e-15);
    }
    liouville(&mut u, &mut ut, 0.0, Direction::Inverse);
    for (a, b) in u.iter().zip(&u0).chain(ut.iter().zip(&ut0)) {
        assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
    }
}

#[test]
fn unit_damping_factor_reproduces_undamped_run() {
    let mut data = CauchyData::with_angular(0.8);
    data.g.push(DataTerm { l: 1, m: 0, amplitude: 0.3, k: 3 });
    let damped = SemilinearConfig { unit_damping_factor: true, ..cfg(2.0, true, 6.0) };
    let a = evolve_semilinear(&damped, &data).unwrap();
    let mut shifted = data.clone();
    shifted.g.extend(data.f.iter().copied());
    let b = evolve_semilinear(&cfg(2.0, false, 6.0), &shifted).unwrap();
    assert_eq!(a.amplitude.len(), b.amplitude.len());
    for ((_, x), (_, y)) in a.amplitude.iter().zip(&b.amplitude) {
        assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{x} vs {y}");
    }
}

#[test]
fn detect_blowup_contract() {
    let traj = [(0.0, 1.0), (0.1, 3.0), (0.2, 50.0), (0.3, f64::NAN)];
    assert_eq!(detect_blowup(&traj, 10.0).unwrap(), Some(0.2));
    assert_eq!(detect_blowup(&traj[..2], 10.0).unwrap(), None);
    assert_eq!(detect_blowup(&[(0.0, 1.0), (0.5, f64::INFINITY)], 10.0).unwrap(), Some(0.5));
    assert!(matches!(detect_blowup(&traj, 1.0), Err(Error::Precondition(_))));
}

#[test]
fn invalid_configs_rejected() {
    let data = CauchyData::positive(1.0);
    assert!(matches!(evolve_semilinear(&cfg(1.0, false, 1.0), &data), Err(Error::Domain(_))));
    let bad = SemilinearConfig { threshold_factor: 0.5, ..cfg(2.0, false, 1.0) };
    assert!(matches!(evolve_semilinear(&bad, &data), Err(Error::Precondition(_))));
    let outside = CauchyData { f: vec![DataTerm { l: 5, m: 0, amplitude: 1.0, k: 4 }], g: vec![], eps: 1.0 };
    assert!(evolve_semilinear(&cfg(2.0, false, 1.0), &outside).is_err());
}

#[test]
fn strict_bootstrap_rejects_infeasible_exponents() {
    match bootstrap_spec(1.6, Application::Damped, true) {
        Err(Error::InfeasibleExponents(rep)) => assert!(!rep.feasible),
        other => panic!("expected rejection, got {other:?}"),
    }
    assert!(bootstrap_spec(2.0, Application::Damped, true).unwrap().feasible);
    assert!(bootstrap_spec(2.5, Application::Undamped, true).unwrap().feasible);
    assert!(!bootstrap_spec(1.6, Application::Damped, false).unwrap().feasible);
}

#[test]
fn small_data_undamped_is_global_with_bounded_q() {
    let r = evolve_semilinear(&cfg(2.5, false, 20.0), &CauchyData::with_angular(1e-3)).unwrap();
    assert_eq!(r.outcome.label(), "global-to-horizon");
    assert!(r.q_exponents_feasible);
    assert!(r.q.iter().all(|(_, q)| q.is_finite() && *q >= 0.0));
    assert!(r.q_bounded(2.0), "growth {}", r.q_growth);
}

#[test]
fn large_positive_data_blowup_time_decreases_with_eps() {
    let base = cfg(2.0, false, 40.0);
    let times: Vec<f64> = [5.0, 8.0, 12.0]
        .iter()
        .map(|&e| {
            let r = evolve_semilinear(&base, &CauchyData::positive(e)).unwrap();
            let t = r.outcome.t_star().expect("blow-up");
            // the first threshold crossing sits at T*
            let first = r.amplitude.iter().find(|(_, a)| !a.is_finite() || *a > r.threshold).unwrap();
            assert_eq!(first.0, t);
            t
        })
        .collect();
    assert!(times.windows(2).all(|w| w[1] < w[0]), "{times:?}");
}

#[test]
fn sweep_is_ordered_and_serialises() {
    let base = cfg(2.0, false, 3.0);
    let cells = lifespan_sweep(&[2.0, 2.5], &[1e-3, 40.0], &base, CauchyData::positive);
    let keys: Vec<(f64, f64)> = cells.iter().map(|c| (c.p, c.eps)).collect();
    assert_eq!(keys, vec![(2.0, 1e-3), (2.0, 40.0), (2.5, 1e-3), (2.5, 40.0)]);
    assert_eq!(cells[0].outcome.label(), "global-to-horizon");
    assert_eq!(cells[1].outcome.label(), "blowup");
    let csv = sweep_csv(&cells);
    assert!(csv.starts_with("p,eps,damped,outcome,T_star,Q_max\n"));
    assert_eq!(csv.lines().count(), 5);
}

fn linear_field(scale: f64) -> wavecert::field::RadialModeField {
    let grid = Grid::new(GridParams::new(1.0 / 16.0, 4.0, 2).with_stride(8)).unwrap();
    let (u0, ut0) = CauchyData::with_angular(scale).sample(&grid).unwrap();
    solve_linear_with_data(&SourceSpec::zero(), &u0, &ut0, &grid).unwrap().field
}

#[test]
fn bootstrap_of_zero_is_zero() {
    let spec = bootstrap_spec(2.5, Application::Undamped, true).unwrap();
    assert!(bootstrap_functional(&linear_field(0.0), &spec).unwrap().iter().all(|(_, q)| *q == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn bootstrap_is_homogeneous(lambda in 0.1f64..8.0, damped in any::<bool>()) {
        let app = if damped { Application::Damped } else { Application::Undamped };
        let spec = bootstrap_spec(2.5, app, true).unwrap();
        let one = bootstrap_functional(&linear_field(1.0), &spec).unwrap();
        let many = bootstrap_functional(&linear_field(lambda), &spec).unwrap();
        for ((_, a), (_, b)) in one.iter().zip(&many) {
            prop_assert!((b - lambda * a).abs() <= 1e-10 * (lambda * a).max(1e-300));
        }
    }
}
