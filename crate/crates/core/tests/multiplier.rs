use proptest::prelude::*;
use wavecert::multiplier::*;

fn profile() -> impl Strategy<Value = Profile> {
    (0..PROFILES.len()).prop_map(|i| PROFILES[i])
}

#[test]
fn parts_with_corrupted_weight_fail() {
    let tf = TestFunction::single_mode(Profile::WavePacket, 2, 1);
    let m = identity_terms(&tf, 2.0, 1.5, 1.3, Part::Combined, true).unwrap();
    assert!(m.residual() > 1e-4, "{m:?}");
}

#[test]
fn taylor_gap_hand_value() {
    let g = taylor_gap(0.0, 1.0, 1.5).unwrap();
    assert!((g - (1.5 * 3f64.sqrt() - 2.5)).abs() < 1e-12);
    assert!(taylor_gap(1.0, 2.5, 1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn identity_holds_at_random_points(p in profile(), l in 0usize..4, t in 0.0f64..10.0, u in 1e-4f64..1.0, s in 1.0f64..2.0) {
        let m = if l == 0 { 0 } else { 1 - l as i64 };
        let tf = TestFunction::single_mode(p, l, m);
        let r = u * (t + 1.0);
        for part in PARTS {
            let res = identity_residual(&tf, t, r, s, part).unwrap();
            prop_assert!(res <= 1e-9, "{} {part:?} at ({t}, {r}, {s}): {res}", tf.id());
        }
    }

    #[test]
    fn taylor_gap_nonnegative(t in 0.0f64..100.0, u in 0.0f64..=1.0, s in 1.0f64..2.0) {
        let r = u * (t + 1.0);
        prop_assert!(taylor_gap(t, r, s).unwrap() >= -1e-12);
        prop_assert_eq!(taylor_gap(t, 0.0, s).unwrap(), 0.0);
        prop_assert_eq!(taylor_gap(t, r, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn density_forms_agree_and_bound(pt in -5.0f64..5.0, pr in -5.0f64..5.0, ph in -5.0f64..5.0, t in 0.0f64..20.0, u in 1e-3f64..1.0, s in 1.0f64..2.0) {
        let r = u * (t + 1.0);
        let f = density_forms(pt, pr, ph, t, r, s).unwrap();
        let scale = f.squares.abs().max(1.0);
        prop_assert!((f.squares - f.symmetric).abs() <= 1e-12 * scale);
        prop_assert!((f.squares - f.split).abs() <= 1e-12 * scale);
        prop_assert!(f.lower_bound <= f.squares + 1e-12 * scale);
    }

    #[test]
    fn multiplier_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.0f64..10.0, u in 1e-3f64..1.0, s in 1.0f64..2.0) {
        let r = u * (t + 1.0);
        let x = apply_multiplier(1.0, 0.5, -0.25, t, r, s).unwrap();
        let y = apply_multiplier(-0.5, 2.0, 1.0, t, r, s).unwrap();
        let z = apply_multiplier(a - 0.5 * b, 0.5 * a + 2.0 * b, -0.25 * a + b, t, r, s).unwrap();
        prop_assert!((z - (a * x + b * y)).abs() <= 1e-12 * (1.0 + z.abs()));
    }

    #[test]
    fn weights_positive_and_ordered(t in 0.0f64..50.0, u in 0.0f64..=1.0, s in 1.0f64..2.0) {
        let r = u * (t + 1.0);
        let plus = weight_eval(t, r, s, Sign::Plus).unwrap();
        let minus = weight_eval(t, r, s, Sign::Minus).unwrap();
        prop_assert!(plus >= minus && minus >= 1.0);
    }
}
