use proptest::prelude::*;
use wavecert::field::{parse_mode_csv, ModeSlice, RadialModeField};
use wavecert::grid::{Grid, GridParams, MAX_CFL};
use wavecert::source::{catalogue, CATALOGUE};
use wavecert::sphere::{mode_count, mode_index, mode_lm, sobolev_sphere_norm, SphereQuadrature};

fn coeffs(l_max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, mode_count(l_max))
}

#[test]
fn harmonics_are_orthonormal_under_quadrature() {
    let l_max = 8;
    let q = SphereQuadrature::new(l_max);
    let nm = mode_count(l_max);
    for a in 0..nm {
        for b in 0..nm {
            let prod: Vec<f64> = (0..q.len()).map(|n| q.harmonics(n)[a] * q.harmonics(n)[b]).collect();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((q.integrate(&prod) - expect).abs() <= 1e-12, "{:?} {:?}", mode_lm(a), mode_lm(b));
        }
    }
}

#[test]
fn two_mode_sobolev_norm_by_hand() {
    // 0.5 Y_00 + 2 Y_21: (0.25 + 4 · 7²)^{1/2} at k = 2
    let mut c = vec![0.0; mode_count(2)];
    c[mode_index(0, 0)] = 0.5;
    c[mode_index(2, 1)] = 2.0;
    assert!((sobolev_sphere_norm(&c, 2) - (0.25f64 + 4.0 * 49.0).sqrt()).abs() < 1e-14);
    assert!((sobolev_sphere_norm(&c, 1) - (0.25f64 + 4.0 * 7.0).sqrt()).abs() < 1e-14);
}

proptest! {
    #[test]
    fn mode_index_is_a_bijection(idx in 0usize..400) {
        let (l, m) = mode_lm(idx);
        prop_assert!(m.unsigned_abs() as usize <= l);
        prop_assert_eq!(mode_index(l, m), idx);
    }

    #[test]
    fn roundtrip_band_limited(c in coeffs(8)) {
        let q = SphereQuadrature::new(8);
        let field = q.synthesize(&c).unwrap();
        let back = q.project(&field).unwrap();
        for (a, b) in c.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        let again = q.synthesize(&back).unwrap();
        for (a, b) in field.iter().zip(&again) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn l2_norm_matches_quadrature(c in coeffs(5)) {
        let q = SphereQuadrature::new(5);
        let f = q.synthesize(&c).unwrap();
        let sq: Vec<f64> = f.iter().map(|v| v * v).collect();
        let quad = q.integrate(&sq).sqrt();
        prop_assert!((sobolev_sphere_norm(&c, 0) - quad).abs() <= 1e-10 * (1.0 + quad));
    }

    #[test]
    fn sobolev_norms_are_ordered(c in coeffs(4)) {
        let (n0, n1, n2) = (sobolev_sphere_norm(&c, 0), sobolev_sphere_norm(&c, 1), sobolev_sphere_norm(&c, 2));
        prop_assert!(n0 <= n1 && n1 <= n2);
    }

    #[test]
    fn grid_invariants(dr in 0.005f64..0.5, t_max in 0.5f64..30.0, l_max in 0usize..6) {
        let g = Grid::new(GridParams::new(dr, t_max, l_max)).unwrap();
        prop_assert!(g.dt <= MAX_CFL * g.dr * (1.0 + 1e-12));
        prop_assert!(g.r_max >= g.t_max + 1.0 + 2.0 * g.dr);
        prop_assert!(g.steps as f64 * g.dt >= t_max - 1e-9);
    }

    #[test]
    fn cfl_violation_rejected(factor in 0.91f64..3.0) {
        let p = GridParams { cfl: factor, ..GridParams::new(0.1, 1.0, 1) };
        prop_assert!(Grid::new(p).is_err());
    }

    #[test]
    fn catalogue_sources_vanish_outside_cone(k in 0usize..CATALOGUE.len(), t in 0.0f64..6.0, dr in 0.0f64..4.0, z in -1.0f64..1.0) {
        let src = catalogue(CATALOGUE[k]).unwrap();
        let r = t + 1.0 + 1e-9 + dr;
        let w = (1.0 - z * z).sqrt();
        prop_assert_eq!(src.eval(t, [r * w, 0.0, r * z]), 0.0);
    }

    #[test]
    fn mode_csv_roundtrip(values in prop::collection::vec(-1e3f64..1e3, 2 * 4 * 3)) {
        let (l_max, n_r) = (1, 3);
        let mut field = RadialModeField::new(l_max, 0.25, n_r);
        for (k, chunk) in values.chunks(4 * n_r).enumerate() {
            let mut s = ModeSlice::zeros(0.5 * k as f64, 4, n_r);
            s.u.copy_from_slice(chunk);
            field.slices.push(s);
        }
        let parsed = RadialModeField::from_table(&parse_mode_csv(&field.to_csv(false)).unwrap()).unwrap();
        prop_assert_eq!(parsed.slices.len(), field.slices.len());
        for (a, b) in parsed.slices.iter().zip(&field.slices) {
            prop_assert_eq!(a.t, b.t);
            prop_assert_eq!(&a.u, &b.u);
        }
    }
}
