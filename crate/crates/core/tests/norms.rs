use wavecert::field::{ModeSlice, RadialModeField};
use wavecert::grid::{Grid, GridParams};
use wavecert::jet::{Jet, Scalar};
use wavecert::norms::*;
use wavecert::solver::{solve_linear, solve_linear_with_data, Manufactured};
use wavecert::source::{catalogue, SourceSpec};
use wavecert::sphere::{gauss_legendre, mode_count, mode_index};

fn grid(dr: f64, t_max: f64, l_max: usize, stride: usize) -> Grid {
    Grid::new(GridParams::new(dr, t_max, l_max).with_stride(stride)).unwrap()
}

/// Composite Gauss–Legendre on `[a, b]`, 8 nodes per panel.
fn gl(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(8);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            x.iter().zip(&w).map(|(xi, wi)| 0.5 * h * wi * f(lo + 0.5 * h * (xi + 1.0))).sum::<f64>()
        })
        .sum()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn zero_and_radial_energies() {
    let g = grid(1.0 / 16.0, 2.0, 2, 4);
    let zero = solve_linear(&SourceSpec::zero(), &g).unwrap();
    let e = lhs_weighted_energy(&zero, 1.5, 2.0).unwrap();
    assert_eq!((e.grad, e.phi_over_r, e.angular), (0.0, 0.0, 0.0));
    let radial = solve_linear(&catalogue("pulse").unwrap(), &g).unwrap();
    let e = lhs_weighted_energy(&radial, 1.5, 2.0).unwrap();
    assert!(e.grad > 0.0 && e.phi_over_r > 0.0);
    assert_eq!(e.angular, 0.0);
    assert!(lhs_weighted_energy(&radial, 1.5, 1.03).is_err());
    assert!(lhs_weighted_energy(&radial, 2.5, 2.0).is_err());
}

#[test]
fn energy_quadrature_matches_closed_form() {
    let (l, m, t, s) = (1usize, 0i64, 2.0, 1.6);
    let mms = Manufactured::new(l, m);
    let dr = 1.0 / 256.0;
    let n_r = ((t + 1.5) / dr) as usize;
    let idx = mode_index(l, m);
    let mut field = RadialModeField::new(l, dr, n_r);
    let mut sl = ModeSlice::zeros(t, mode_count(l), n_r);
    for j in 0..n_r {
        let r = field.r(j);
        let jet = mms.profile(Jet::var_t(t), Jet::var_r(r));
        sl.u[idx * n_r + j] = jet.v;
        sl.ut[idx * n_r + j] = jet.t;
    }
    field.slices.push(sl);
    let active = vec![idx];
    let e = slice_energy(&SliceData::new(&field, &field.slices[0], &active), s);

    let ll = (l * (l + 1)) as f64;
    let w = |r: f64| (t + 2.0 - r).powf(s);
    let jet = |r: f64| mms.profile(Jet::var_t(t), Jet::var_r(r));
    let grad = gl(0.0, t + 1.0, 64, |r| {
        let j = jet(r);
        w(r) * ((j.t * j.t + j.r * j.r) * r * r + ll * j.v * j.v)
    });
    let phi = gl(0.0, t + 1.0, 64, |r| w(r) * jet(r).v.powi(2));
    for (got, want) in [(e.grad, grad), (e.phi_over_r, phi), (e.angular, ll * phi)] {
        assert!(rel(got, want) < 1e-4, "{got} vs {want}");
    }
}

#[test]
fn source_norm_matches_closed_form() {
    let (s, delta) = (1.5, 0.25);
    let src = catalogue("pulse").unwrap();
    let g = grid(1.0 / 64.0, 1.5, 0, 1);
    let got = rhs_weighted_source(&src, s, delta, 0.0, &g).unwrap();
    let f = |t: f64, r: f64| (std::f64::consts::PI * t).sin().powi(4) * (1.0 - r * r).powi(4);
    let want = gl(0.0, 1.0, 16, |t| {
        gl(0.0, 1.0, 16, |r| (t + 2.0 + r).powf(s) * (t + 2.0 - r).powf(1.0 + 2.0 * delta) * f(t, r).powi(2) * r * r)
    })
    .sqrt();
    assert!(rel(got.proof_weight, want) < 1e-4, "{} vs {want}", got.proof_weight);
    assert!(got.literal_weight > 0.0);

    let twice = SourceSpec::pointwise("twice", move |t, y| 2.0 * src.eval(t, y));
    let doubled = rhs_weighted_source(&twice, s, delta, 0.0, &g).unwrap();
    assert!(rel(doubled.proof_weight, 2.0 * got.proof_weight) < 1e-12);
    assert_eq!(rhs_weighted_source(&SourceSpec::zero(), s, delta, 0.0, &g).unwrap().proof_weight, 0.0);
    assert!(rhs_weighted_source(&SourceSpec::zero(), s, 0.0, 0.0, &g).is_err());
}

#[test]
fn outgoing_pulse_carries_no_outgoing_flux() {
    // φ = h(t − r)/r with h supported in (−0.9, −0.1)
    let h = |x: Jet| {
        let y = (x + 0.5) / 0.4;
        if y.value().abs() >= 1.0 {
            Jet::cst(0.0)
        } else {
            (-(y * y) + 1.0).powi(6)
        }
    };
    let g = grid(1.0 / 64.0, 3.0, 0, 8);
    let n_r = g.n_r;
    let (mut u0, mut ut0) = (vec![0.0; n_r], vec![0.0; n_r]);
    let y00 = (4.0 * std::f64::consts::PI).sqrt();
    for j in 0..n_r {
        let r = g.r(j);
        let v = h(Jet::var_t(0.0) - r) / r;
        u0[j] = y00 * v.v;
        ut0[j] = y00 * v.t;
    }
    let sol = solve_linear_with_data(&SourceSpec::zero(), &u0, &ut0, &g).unwrap();
    let series = SliceSeries::new(&sol);
    let s = 1.5;
    let (mut out_max, mut in_max) = (0.0f64, 0.0f64);
    for k in 0..16 {
        let u = -0.85 + 0.7 * k as f64 / 15.0;
        out_max = out_max.max(lightcone_flux(&series, s, Cone::Outgoing(u)).unwrap());
        let ub = 0.5 + 2.0 * k as f64 / 15.0;
        in_max = in_max.max(lightcone_flux(&series, s, Cone::Incoming(ub)).unwrap());
    }
    assert!(in_max > 0.0);
    assert!(out_max <= 1e-3 * in_max, "outgoing {out_max} vs incoming {in_max}");
    assert!(lightcone_flux(&series, s, Cone::Outgoing(10.0)).is_err());
}

#[test]
fn integrated_identity_bounds_energy_and_fluxes() {
    for id in ["bump", "family-3", "expanding"] {
        let src = catalogue(id).unwrap();
        let reps: Vec<IntegratingReport> = [1.0 / 32.0, 1.0 / 64.0]
            .iter()
            .map(|&dr| {
                let g = grid(dr, 3.0, 2, 1);
                integrating_check(&solve_linear(&src, &g).unwrap(), &src, &g, 1.5).unwrap()
            })
            .collect();
        for r in &reps {
            assert!(r.flux_ratio_max <= 1.0, "{id}: {r:?}");
            assert!(r.slice_excess() < 1e-2, "{id}: {r:?}");
            assert!(r.identity_residual < 1e-2, "{id}: {r:?}");
        }
        let (a, b) = (reps[0].slice_excess(), reps[1].slice_excess());
        assert!(b <= 0.0 || b < a / 3.0, "{id}: excess {a} -> {b}");
    }
    let g = grid(1.0 / 16.0, 2.0, 2, 1);
    let zero = solve_linear(&SourceSpec::zero(), &g).unwrap();
    let rep = integrating_check(&zero, &SourceSpec::zero(), &g, 1.5).unwrap();
    assert_eq!((rep.outgoing_flux_max, rep.incoming_flux_max), (0.0, 0.0));
}

#[test]
fn hardy_parabola_against_quadrature() {
    let (s, t) = (1.5, 0.0);
    let w = |r: f64| (t + 2.0 - r).powf(s);
    let lhs2 = gl(0.0, 1.0, 200, |r| w(r) * (r - r * r).powi(2));
    let rhs = gl(0.0, 1.0, 200, |r| w(r) * ((2.0 - 3.0 * r) * r).powi(2));
    let lhs1 = gl(0.0, 1.0, 200, |r| w(r) * ((1.0 - 2.0 * r) * r).powi(2));
    let h2 = hardy_ratio(&HardyProfile::Parabola, s, t, HardyVariant::Hardy2).unwrap();
    let h1 = hardy_ratio(&HardyProfile::Parabola, s, t, HardyVariant::Hardy1).unwrap();
    assert!(rel(h2, lhs2 / rhs) < 1e-10, "{h2} vs {}", lhs2 / rhs);
    assert!(rel(h1, lhs1 / rhs) < 1e-10);
    assert!(h2 <= HARDY2_BOUND);
    assert!(h1 <= 2.0 + 2.0 * h2);
}

#[test]
fn hardy_family_respects_proof_constants() {
    let rep = verify_hardy(50, 7, &[1.2, 1.8], &[0.0, 5.0, 20.0]).unwrap();
    assert!(rep.holds, "{rep:?}");
    for row in &rep.rows {
        assert!(row.three_hardy_refinement < 1e-6, "{row:?}");
        assert!(row.three_hardy_max.is_finite() && row.three_hardy_max > 0.0);
    }
}

#[test]
fn trace_shell_and_regimes() {
    let (s, t, j0, n_r) = (1.5, 1.0, 20usize, 64usize);
    let mut field = RadialModeField::new(0, 1.0 / 32.0, n_r);
    let mut sl = ModeSlice::zeros(t, 1, n_r);
    sl.u[j0] = 3.0;
    field.slices.push(sl);
    let active = vec![0];
    let ts = trace_slice(&SliceData::new(&field, &field.slices[0], &active), s);
    assert!(rel(ts.trace, trace_weight(t, field.r(j0), s) * 3.0) < 1e-14);
    assert!(ts.domination_excess <= 1e-12);

    let g = grid(1.0 / 32.0, 3.0, 2, 4);
    let zero = solve_linear(&SourceSpec::zero(), &g).unwrap();
    assert_eq!(trace_norm(&zero, s, 3.0).unwrap(), 0.0);
    let sol = solve_linear(&catalogue("bump").unwrap(), &g).unwrap();
    let rep = trace_check(&sol, s).unwrap();
    assert!(rep.domination_excess <= 1e-12);
    assert!(rep.trace_ratio <= (INNER_FACTOR * rep.inner_ratio).max(OUTER_FACTOR * rep.outer_ratio) * (1.0 + 1e-12));
    assert!(rep.inner_ratio > 0.0 && rep.outer_ratio > 0.0);
}

#[test]
fn sup_radial_norm_reproduces_trace_norm() {
    let s = 1.4;
    let g = grid(1.0 / 32.0, 2.0, 2, 8);
    let sol = solve_linear(&catalogue("bump").unwrap(), &g).unwrap();
    let w = RadialWeight::new(0.5, 0.5, 0.5 * (s - 1.0));
    let mixed = mixed_norm(&sol.field, w, f64::INFINITY, SphereNorm::L2).unwrap();
    let trace = sol.field.slices.iter().map(|sl| trace_norm(&sol, s, sl.t).unwrap()).fold(0.0, f64::max);
    assert!(rel(mixed, trace) < 1e-12, "{mixed} vs {trace}");
}

#[test]
fn interpolation_inequality_on_catalogue() {
    let g = grid(1.0 / 32.0, 2.0, 3, 8);
    for id in ["bump", "family-1", "family-6", "shell"] {
        let sol = solve_linear(&catalogue(id).unwrap(), &g).unwrap();
        let rep = interpolation_check(&sol.field, 1.6, 0.5, 4.0).unwrap();
        assert!((rep.sigma - 4.0).abs() < 1e-15 && (rep.beta - 8.0 / 3.0).abs() < 1e-15);
        assert!(rep.worst <= 1.0 + 1e-12, "{id}: {}", rep.worst);
        assert!(rep.worst > 0.0);
    }
}

#[test]
fn estimate_ratio_reports() {
    let gp = GridParams::new(1.0 / 16.0, 4.0, 2).with_stride(4);
    let zero = estimate_ratio(&SourceSpec::zero(), &WeightParams::new(1.6, 0.25), gp, 1).unwrap();
    assert_eq!(zero.status, Status::Vacuous);
    zero.check_invariants().unwrap();

    let rep = estimate_ratio(&catalogue("bump").unwrap(), &WeightParams::new(1.6, 0.25), gp, 2).unwrap();
    rep.check_invariants().unwrap();
    assert_eq!(rep.status, Status::Finite);
    assert_eq!(rep.refinement.len(), 2);
    assert!(rep.refinement_spread() < 0.1, "{:?}", rep.refinement);

    let shifted = WeightParams::new(1.6, 0.25).with_alpha(0.25);
    let rep = estimate_ratio(&catalogue("pulse").unwrap(), &shifted, gp, 2).unwrap();
    rep.check_invariants().unwrap();
    assert!(rep.lhs_pieces.iter().any(|p| p.name == "trace" && p.value > 0.0));
    assert!(rep.refinement_spread() < 0.1);
    assert!(estimate_ratio(&catalogue("persistent").unwrap(), &shifted, gp, 1).is_err());
    assert!(estimate_ratio(&catalogue("bump").unwrap(), &WeightParams::new(2.2, 0.25), gp, 1).is_err());
    assert!(rep.slices_csv().starts_with("t,grad"));
}
