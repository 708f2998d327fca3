use pielm::features::{init_layer, tanh_d2, FeatureLayer};
use pielm::linalg::DenseMatrix;
use proptest::prelude::*;

const STEP: f64 = 1e-5;

fn shifted(points: &DenseMatrix, axis: usize, delta: f64) -> DenseMatrix {
    DenseMatrix::from_fn(points.rows(), points.cols(), |i, j| {
        points.get(i, j) + if j == axis { delta } else { 0.0 }
    })
    .unwrap()
}

fn central<F: Fn(&DenseMatrix) -> DenseMatrix>(f: F, points: &DenseMatrix, axis: usize) -> DenseMatrix {
    let plus = f(&shifted(points, axis, STEP));
    let minus = f(&shifted(points, axis, -STEP));
    DenseMatrix::from_fn(plus.rows(), plus.cols(), |i, j| (plus.get(i, j) - minus.get(i, j)) / (2.0 * STEP)).unwrap()
}

/// Relative error with a unit floor, so entries near zero are judged absolutely.
fn assert_close(analytic: &DenseMatrix, numeric: &DenseMatrix, tol: f64) -> Result<(), TestCaseError> {
    for i in 0..analytic.rows() {
        for j in 0..analytic.cols() {
            let (a, n) = (analytic.get(i, j), numeric.get(i, j));
            prop_assert!((a - n).abs() <= tol * a.abs().max(1.0), "entry ({i},{j}): {a} vs {n}");
        }
    }
    Ok(())
}

fn layer_and_points() -> impl Strategy<Value = (FeatureLayer, DenseMatrix)> {
    (1usize..=3, 1usize..12, any::<u64>(), 0.1f64..3.0).prop_flat_map(|(dim, n, seed, scale)| {
        prop::collection::vec(-1.0f64..1.0, 20 * dim).prop_map(move |x| {
            (
                init_layer(n, dim, seed, scale).unwrap(),
                DenseMatrix::new(20, dim, x).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn first_partials_match_central_differences((layer, pts) in layer_and_points()) {
        for axis in 0..layer.dim() {
            let analytic = layer.eval_feature_partial(&pts, axis, 1).unwrap();
            let numeric = central(|p| layer.eval_features(p).unwrap(), &pts, axis);
            assert_close(&analytic, &numeric, 1e-6)?;
        }
    }

    // Differences of the analytic first partial, so the step error stays O(h^2).
    #[test]
    fn second_partials_match_central_differences((layer, pts) in layer_and_points()) {
        for axis in 0..layer.dim() {
            let analytic = layer.eval_feature_partial(&pts, axis, 2).unwrap();
            let numeric = central(|p| layer.eval_feature_partial(p, axis, 1).unwrap(), &pts, axis);
            assert_close(&analytic, &numeric, 1e-6)?;
        }
    }

    #[test]
    fn mixed_partials_match_nested_differences((layer, pts) in layer_and_points()) {
        prop_assume!(layer.dim() >= 2);
        let analytic = layer.eval_feature_mixed(&pts, 0, 1).unwrap();
        let numeric = central(
            |p| central(|q| layer.eval_features(q).unwrap(), p, 0),
            &pts,
            1,
        );
        assert_close(&analytic, &numeric, 1e-5)?;
    }

    #[test]
    fn doubling_a_weight_scales_partials(w in -2.0f64..2.0, b in -1.0f64..1.0, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        prop_assume!(w.abs() > 1e-3);
        // z = w x + 0.5 y + b; doubling w needs bias b - w x to keep z fixed.
        let z = w * x + 0.5 * y + b;
        let base = FeatureLayer::from_parts(DenseMatrix::new(1, 2, vec![w, 0.5]).unwrap(), vec![b]).unwrap();
        let doubled = FeatureLayer::from_parts(DenseMatrix::new(1, 2, vec![2.0 * w, 0.5]).unwrap(), vec![b - w * x]).unwrap();
        let p = DenseMatrix::new(1, 2, vec![x, y]).unwrap();
        let z2 = 2.0 * w * x + 0.5 * y + b - w * x;
        prop_assert!((z - z2).abs() < 1e-14);
        let d1 = (base.eval_feature_partial(&p, 0, 1).unwrap().get(0, 0), doubled.eval_feature_partial(&p, 0, 1).unwrap().get(0, 0));
        let d2 = (base.eval_feature_partial(&p, 0, 2).unwrap().get(0, 0), doubled.eval_feature_partial(&p, 0, 2).unwrap().get(0, 0));
        prop_assert!((d1.1 - 2.0 * d1.0).abs() <= 1e-12 * (1.0 + d1.0.abs()));
        prop_assert!((d2.1 - 4.0 * d2.0).abs() <= 1e-12 * (1.0 + d2.0.abs()));
        let expected = w * 0.5 * tanh_d2(z.tanh());
        let mixed = base.eval_feature_mixed(&p, 0, 1).unwrap().get(0, 0);
        prop_assert!((mixed - expected).abs() <= 1e-14);
    }
}

#[test]
fn order_three_is_rejected() {
    let layer = init_layer(3, 1, 1, 1.0).unwrap();
    let p = DenseMatrix::new(1, 1, vec![0.2]).unwrap();
    assert!(layer.eval_feature_partial(&p, 0, 3).is_err());
    assert!(layer.eval_feature_partial(&p, 0, 0).is_err());
    assert!(layer.eval_feature_partial(&p, 1, 1).is_err());
}
