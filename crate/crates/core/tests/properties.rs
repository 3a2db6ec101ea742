//! Property tests over random specs.

use proptest::prelude::*;

use trisbf::cli::{rows_from_csv, rows_to_csv, Row};
use trisbf::hankelbowman::evaluate_hb;
use trisbf::gridscan::evaluate_point;
use trisbf::recursion::evaluate;
use trisbf::{rel_diff, Damping, RadiiTriple, WeightedIntegralSpec};

fn damping() -> impl Strategy<Value = Damping> {
    prop_oneof![(0.4f64..2.5).prop_map(Damping::Exp), (0.4f64..2.5).prop_map(Damping::Gauss)]
}

fn radius() -> impl Strategy<Value = f64> {
    0.3f64..4.0
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn permuting_slots_is_bit_identical(
        ell in prop::array::uniform3(0i32..=5),
        r in prop::array::uniform3(radius()),
        d in damping(),
        perm in 0usize..6,
    ) {
        let s = WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), d, 2);
        let p = PERMS[perm];
        let t = WeightedIntegralSpec::new(p.map(|i| ell[i]), RadiiTriple::from_array(p.map(|i| r[i])), d, 2);
        prop_assert_eq!(evaluate(&s).unwrap().value.to_bits(), evaluate(&t).unwrap().value.to_bits());
    }

    #[test]
    fn scaling_radii_rescales_damping(
        ell in prop::array::uniform3(0i32..=4),
        r in prop::array::uniform3(radius()),
        d in damping(),
        n in 2u32..=4,
        lambda in prop_oneof![Just(0.5f64), Just(2.0), Just(4.0)],
    ) {
        let s = WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), d, n);
        let p = d.p();
        let p2 = match d { Damping::Exp(_) => p * lambda.sqrt(), Damping::Gauss(_) => p * lambda };
        let t = WeightedIntegralSpec::new(ell, s.radii.scaled(lambda), d.with_p(p2), n);
        let ev = trisbf::engine::global();
        let a = evaluate_point(ev, &s).unwrap().value;
        let b = evaluate_point(ev, &t).unwrap().value;
        prop_assert!(rel_diff(b, a / lambda.powi(n as i32 + 1)) < 1e-10, "{a} {b}");
    }

    #[test]
    fn results_are_real(
        ell in prop::array::uniform3(0i32..=6),
        r in prop::array::uniform3(radius()),
        d in damping(),
    ) {
        let s = WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), d, 2);
        let v = evaluate(&s).unwrap();
        prop_assert!(v.im_residual.abs() <= 1e-12f64.max(1e-10 * v.value.abs()));
    }

    #[test]
    fn nested_sums_track_recursion(
        ell in prop::array::uniform3(0i32..=2),
        r in prop::array::uniform3(radius()),
        p in 0.4f64..2.5,
    ) {
        let s = WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), Damping::Gauss(p), 2);
        let a = evaluate_hb(&s).unwrap().value;
        let b = evaluate(&s).unwrap().value;
        prop_assert!(rel_diff(a, b) < 1e-9, "{a} {b}");
    }

    #[test]
    fn negative_p_folds_to_its_magnitude(
        ell in prop::array::uniform3(0i32..=3),
        r in prop::array::uniform3(radius()),
        d in damping(),
    ) {
        let s = WeightedIntegralSpec::new(ell, RadiiTriple::from_array(r), d, 2);
        let t = WeightedIntegralSpec::new(ell, s.radii, d.with_p(-d.p()), 2);
        prop_assert_eq!(evaluate(&s).unwrap().value.to_bits(), evaluate(&t).unwrap().value.to_bits());
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn row() -> impl Strategy<Value = Row> {
    (
        prop::array::uniform3(0i32..30),
        prop::array::uniform3(finite()),
        (finite(), 0u32..10, finite(), finite()),
        (prop::option::of(finite()), any::<u64>(), prop::option::of(finite()), prop::option::of(finite())),
        prop::bool::ANY,
    )
        .prop_map(|(ell, r, (p, n, value, im), (err, calls, wall, rd), gauss)| Row {
            ell,
            r,
            damping: if gauss { "gauss" } else { "exp" }.into(),
            p,
            n,
            method: "recursion".into(),
            value,
            im_residual: im,
            error_estimate: err,
            kernel_calls: calls,
            wall_ms: wall,
            rel_diff_vs_oracle: rd,
            diagnostics: None,
        })
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(rows in prop::collection::vec(row(), 0..6)) {
        let back = rows_from_csv(&rows_to_csv(&rows).unwrap()).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.im_residual.to_bits(), b.im_residual.to_bits());
            prop_assert_eq!(a.r.map(f64::to_bits), b.r.map(f64::to_bits));
            prop_assert_eq!(a.error_estimate.map(f64::to_bits), b.error_estimate.map(f64::to_bits));
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact(rows in prop::collection::vec(row(), 0..6)) {
        let text = serde_json::to_string(&rows).unwrap();
        let back: Vec<Row> = serde_json::from_str(&text).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.p.to_bits(), b.p.to_bits());
        }
    }
}
