use proptest::prelude::*;
use wavecert::exponents::*;

fn truncations() -> [f64; 4] {
    [1e2, 1e3, 1e4, 1e5]
}

#[test]
fn strauss_roots_back_substitute() {
    let p3 = strauss_exponent(3).unwrap();
    assert!((p3 - (1.0 + 2f64.sqrt())).abs() < 1e-14);
    assert!((p3 - 2.4142136).abs() < 1e-7);
    let p5 = strauss_exponent(5).unwrap();
    assert!((p5 - (3.0 + 17f64.sqrt()) / 4.0).abs() < 1e-14);
    let p2 = strauss_exponent(2).unwrap();
    assert!((p2 - 3.5615528).abs() < 1e-7);
    for n in 2..=6 {
        let p = strauss_exponent(n).unwrap();
        assert!(p > 1.0);
        assert!(strauss_quadratic(n, p).abs() <= 1e-12, "n = {n}");
    }
    assert!(strauss_exponent(1).is_err());
}

#[test]
fn m_tail_exponent_arithmetic() {
    let m = m_integral(2.5, 0.01, 100.0).unwrap();
    assert!((m.tail_exponent - (-1.18)).abs() < 1e-12);
    assert!(m.value > 0.0);
    let p = 1.0 + 2f64.sqrt();
    assert!((2.0 + 4.0 * p - 2.0 * p * p).abs() < 1e-12);
    assert!((m_tail_exponent(p, 0.0) + 1.0).abs() < 1e-12);
    assert!(m_integral(3.0, 0.01, 10.0).is_err());
}

#[test]
fn m_truncation_increments_follow_tail() {
    // successive doublings shrink by about 2^{e+1} once the log factor from
    // (t+2−r)^{−1+2δ} has settled
    let (p, delta) = (2.5, 0.1);
    let v: Vec<f64> = [1e3, 2e3, 4e3, 8e3].iter().map(|&t| m_integral(p, delta, t).unwrap().value).collect();
    let ratio = (v[3] - v[2]) / (v[2] - v[1]);
    let expect = 2f64.powf(m_tail_exponent(p, delta) + 1.0);
    assert!((ratio / expect - 1.0).abs() < 0.05, "{ratio} vs {expect}");
    assert!(v.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn m_cauchy_iff_negative_reduced_exponent() {
    for p in [2.2, 2.3, 2.6, 2.8] {
        let delta = 0.05;
        let v: Vec<f64> = truncations().iter().map(|&t| m_integral(p, delta, t).unwrap().value).collect();
        let reduced = m_tail_exponent(p, delta) + 1.0;
        assert!(reduced.abs() > 0.15);
        assert_eq!(is_cauchy(&v), reduced < 0.0, "p = {p}, reduced {reduced}, {v:?}");
    }
}

#[test]
fn n_tail_and_cauchy() {
    let n = n_integral(2.0, 0.01, 0.01, 100.0).unwrap();
    assert!((n.reduced_exponent() - (-1.02)).abs() < 1e-12);
    let p5 = strauss_exponent(5).unwrap();
    assert!((2.0 + 6.0 * p5 - 4.0 * p5 * p5).abs() < 1e-12);
    for p in [1.6, 1.7, 2.0, 2.5] {
        let ns: Vec<NIntegral> = truncations().iter().map(|&t| n_integral(p, 0.01, 0.01, t).unwrap()).collect();
        let v: Vec<f64> = ns.iter().map(|n| n.value).collect();
        let vv: Vec<f64> = ns.iter().map(|n| n.verbatim_value).collect();
        let own = ns[0].integrand_tail + 1.0;
        let verb = ns[0].verbatim_tail + 1.0;
        assert_eq!(is_cauchy(&v), own < 0.0, "p = {p}: {v:?}");
        assert_eq!(is_cauchy(&vv), verb < 0.0, "p = {p}: {vv:?}");
        // the claimed exponent and the integrand's own agree to O(θ)
        assert!((ns[0].tail_exponent - ns[0].integrand_tail).abs() < 4.0 * p * 0.01 + 1e-12);
    }
    assert!(n_integral(3.0, 0.01, 0.01, 10.0).is_err());
}

#[test]
fn feasibility_examples() {
    let u = feasibility(2.5, Application::Undamped).unwrap();
    assert!(u.feasible);
    assert!((u.s - 1.8).abs() < 1e-15);
    assert!(u.reduced_exponent < 0.0);
    assert!(u.integral.unwrap() > 0.0);

    let d = feasibility(2.0, Application::Damped).unwrap();
    assert!(d.feasible);
    assert!((d.s - 1.5).abs() < 1e-15 && (d.alpha - 0.25).abs() < 1e-15);
    assert!(d.theta.is_some() && d.beta.unwrap() > 2.0);

    let low = feasibility(1.7, Application::Damped).unwrap();
    assert!(!low.feasible);
    assert_eq!(low.binding_constraint.as_deref(), Some("2+6p−4p² < 0"));

    let three = feasibility(3.0, Application::Damped).unwrap();
    assert!(!three.feasible);
    assert!(three.binding_constraint.unwrap().contains("α"));
}

#[test]
fn bisection_brackets_strauss_roots() {
    let (lo, hi) = feasibility_threshold(Application::Undamped, 2.2, 2.9, 1e-9).unwrap();
    let root = strauss_exponent(3).unwrap();
    assert!((lo - root).abs() <= 1e-6 && (hi - root).abs() <= 1e-6, "[{lo}, {hi}] vs {root}");
    let (lo, hi) = feasibility_threshold(Application::Damped, 1.5, 2.5, 1e-9).unwrap();
    let root = strauss_exponent(5).unwrap();
    assert!((lo - root).abs() <= 1e-6 && (hi - root).abs() <= 1e-6, "[{lo}, {hi}] vs {root}");
}

#[test]
fn sweep_csv_has_one_row_per_step() {
    let reps = feasibility_sweep(1.5, 2.9, 8, Application::Damped).unwrap();
    let csv = sweep_csv(&reps);
    assert_eq!(csv.lines().count(), 9);
    assert!(feasibility_sweep(2.0, 1.0, 8, Application::Damped).is_err());
}

proptest! {
    #[test]
    fn feasible_iff_tail_reduced_negative(p in 1.05..3.5f64, damped in any::<bool>()) {
        let app = if damped { Application::Damped } else { Application::Undamped };
        let r = feasibility_with(p, app, 4.0, 1e3, false).unwrap();
        prop_assert_eq!(r.feasible, r.reduced_exponent < 0.0 && r.binding_constraint.is_none());
        if r.feasible {
            prop_assert!(r.reduced_exponent < 0.0);
        }
    }

    #[test]
    fn damped_feasible_exponents_admissible(p in 1.79..2.999f64) {
        let r = feasibility_with(p, Application::Damped, 4.0, 1e3, false).unwrap();
        prop_assert!(r.feasible);
        prop_assert!(r.s > 1.0 && r.s < 2.0);
        prop_assert!(r.alpha > 0.0);
        prop_assert!((r.s - (2.0 - 1.0 / p)).abs() == 0.0);
        prop_assert!((r.alpha - (1.5 / p - 0.5)).abs() == 0.0);
    }

    #[test]
    fn truncated_m_monotone_in_t(p in 2.1..2.9f64, t in 1.0..200.0f64) {
        let a = m_integral(p, 0.05, t).unwrap().value;
        let b = m_integral(p, 0.05, 2.0 * t).unwrap().value;
        prop_assert!(b > a);
    }

    #[test]
    fn strauss_root_is_positive_root(n in 2u32..40) {
        let p = strauss_exponent(n).unwrap();
        prop_assert!(strauss_quadratic(n, p).abs() <= 1e-12 * (n as f64) * p * p);
        prop_assert!(strauss_quadratic(n, 0.0) < 0.0);
    }
}
