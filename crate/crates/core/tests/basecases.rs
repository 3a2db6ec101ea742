//! Base cases against closed forms evaluated at 40 digits with mpmath.

use trisbf::basecase::BaseCaseVariant::{self, *};
use trisbf::expdamp::exp_base_case;
use trisbf::gaussdamp::gauss_base_case;
use trisbf::RadiiTriple;

type Case = (usize, BaseCaseVariant, [f64; 3], f64, f64, f64);

const CASES: [Case; 8] = [
    (0, L00, [1.0, 1.0, 1.0], 1.0, 0.27678717944852262575, 0.23381086827917859345),
    (0, Lm1m1, [1.0, 2.0, 2.0], 1.0, 0.10594695758385362839, 0.10548757906321879184),
    (3, L00, [2.0, 1.0, 1.0], 0.8, 0.069876680003856414346, 0.038230142308975660552),
    (2, Lm10, [1.0, 2.0, 1.5], 0.7, -0.032749684090737320457, -0.0086021810893069677176),
    (4, Lm1m1, [1.3, 0.7, 2.5], 0.5, 0.0020509853832271252548, -0.00049630654073564532366),
    (5, Lm10, [0.7, 2.5, 1.3], 0.5, -0.00014952458993369720951, 0.000039451707544490729283),
    (8, L00, [1.1, 0.9, 1.7], 0.6, 0.0036277832130399470259, -5.3364824291530854859e-6),
    (12, Lm10, [3.0, 1.0, 1.5], 0.9, 0.00091818998203346636485, 3.1630070224429219965e-6),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn exponential_base_cases() {
    for (l, v, r, p, want, _) in CASES {
        let got = exp_base_case(l, v, &RadiiTriple::from_array(r), p).unwrap();
        assert!(rel(got.value, want) < 1e-12, "l={l} {v:?}: {} vs {want}", got.value);
    }
}

#[test]
fn gaussian_base_cases() {
    for (l, v, r, p, _, want) in CASES {
        let got = gauss_base_case(l, v, &RadiiTriple::from_array(r), p).unwrap();
        assert!(rel(got.value, want) < 1e-12, "l={l} {v:?}: {} vs {want} {:?}", got.value, got.diagnostics);
    }
}
