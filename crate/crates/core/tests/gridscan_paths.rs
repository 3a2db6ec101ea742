//! Grid path against the pointwise path.

use trisbf::engine::Evaluator;
use trisbf::gridscan::{benchmark, collect_arguments, evaluate_grid, evaluate_grid_with, evaluate_pointwise, GridAxis, GridSpec};
use trisbf::{rel_diff, Damping, WeightedIntegralSpec};

#[test]
fn single_point_grid_is_a_single_evaluation() {
    let g = GridSpec::cube(GridAxis::new(1.3, 1.3, 1), [2, 1, 0], Damping::Exp(0.8), 3);
    let v = evaluate_grid(&g).unwrap();
    let s = WeightedIntegralSpec::new([2, 1, 0], g.points()[0], Damping::Exp(0.8), 3);
    assert_eq!(v.values, vec![trisbf::paramdiff::evaluate_weighted(&s).unwrap().value]);
}

#[test]
fn grid_matches_pointwise_and_scales_linearly() {
    let mut calls = Vec::new();
    for n in [4, 8, 16] {
        let g = GridSpec::cube(GridAxis::new(0.5, 3.0, n), [1, 1, 0], Damping::Gauss(1.0), 2);
        let a = evaluate_grid(&g).unwrap();
        let b = evaluate_pointwise(&g).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(rel_diff(*x, *y) <= 1e-12);
        }
        assert!(a.kernel_calls < b.kernel_calls);
        calls.push((a.kernel_calls as f64, b.kernel_calls as f64, collect_arguments(&g).unwrap().len() as f64));
    }
    for w in calls.windows(2) {
        // doubling the axis at most doubles grid work (plus slack), pointwise work grows ~8x
        assert!(w[1].0 <= 2.5 * w[0].0, "{calls:?}");
        assert!(w[1].2 <= 2.5 * w[0].2, "{calls:?}");
        assert!(w[1].1 >= 6.0 * w[0].1, "{calls:?}");
    }
}

#[test]
fn odd_gaussian_powers_use_the_nested_sums() {
    let g = GridSpec::cube(GridAxis::new(0.7, 1.9, 2), [1, 0, 0], Damping::Gauss(1.0), 1);
    let a = evaluate_grid(&g).unwrap();
    let b = evaluate_pointwise(&g).unwrap();
    assert_eq!(a.values, b.values);
    assert!(a.kernel_calls > 0);
}

#[test]
fn thread_count_does_not_change_values() {
    let g = GridSpec::new(
        [GridAxis::new(0.7, 2.5, 3), GridAxis::new(1.0, 2.0, 4), GridAxis::new(0.5, 1.5, 2)],
        [2, 0, 1],
        Damping::Exp(1.2),
        4,
    );
    let a = evaluate_grid_with(&Evaluator::default(), &g, Some(1)).unwrap();
    let b = evaluate_grid_with(&Evaluator::default(), &g, Some(8)).unwrap();
    assert_eq!(a.values, b.values);
}

#[test]
fn benchmark_reports_every_path() {
    let g = GridSpec::cube(GridAxis::new(0.7, 2.5, 4), [1, 0, 0], Damping::Gauss(1.0), 2);
    let r = benchmark(&g, 1).unwrap();
    assert_eq!(r.grid.points_evaluated, 64);
    assert!(r.oracle.points_evaluated >= 1);
    assert!(r.grid.kernel_calls < r.pointwise.kernel_calls);
    assert!(r.max_rel_diff <= 1e-12);
}
