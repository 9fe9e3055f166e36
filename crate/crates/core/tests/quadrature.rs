use infodisp::quadrature::{
    derivative, find_root, integrate, integrate_with_breaks, maximize, QuadratureConfig,
};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_is_linear(a in -5.0f64..0.0, w in 0.5f64..6.0, k in 0.5f64..4.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let b = a + w;
        let g1 = |x: f64| (k * x).sin();
        let g2 = |x: f64| (-x * x).exp() + x.powi(3);
        let both = integrate(|x| alpha * g1(x) + beta * g2(x), a, b, &cfg()).unwrap();
        let sep = alpha * integrate(g1, a, b, &cfg()).unwrap() + beta * integrate(g2, a, b, &cfg()).unwrap();
        let scale = 1.0 + both.abs();
        prop_assert!((both - sep).abs() <= 3.0 * cfg().abs_tol + 3.0 * cfg().rel_tol * scale);
    }

    #[test]
    fn integral_splits_at_interior_points(a in -4.0f64..0.0, w in 0.5f64..8.0, t in 0.05f64..0.95) {
        let b = a + w;
        let c = a + t * w;
        let g = |x: f64| (x - 0.3).abs().sqrt() + (2.0 * x).cos();
        let whole = integrate_with_breaks(g, a, b, &[0.3], &cfg()).unwrap();
        let left = integrate_with_breaks(g, a, c, &[0.3], &cfg()).unwrap();
        let right = integrate_with_breaks(g, c, b, &[0.3], &cfg()).unwrap();
        prop_assert!((whole - left - right).abs() <= 3.0 * cfg().abs_tol + 3.0 * cfg().rel_tol * (1.0 + whole.abs()));
    }

    #[test]
    fn root_residual_is_small(c in -3.0f64..3.0, s in 0.2f64..5.0) {
        let g = |x: f64| s * (x - c) + 0.1 * (x - c).powi(3);
        let tol = 1e-12;
        let x = find_root(g, -10.0, 10.0, tol).unwrap();
        let slope = derivative(g, x, 1e-6).abs();
        prop_assert!(g(x).abs() <= tol * slope.max(1.0) * 10.0);
    }

    #[test]
    fn maximize_finds_interior_peak(m in -2.0f64..2.0, s in 0.1f64..2.0) {
        let (x, v) = maximize(|x| -((x - m) / s).powi(2), -5.0, 5.0, 101);
        prop_assert!((x - m).abs() < 1e-6);
        prop_assert!(v.abs() < 1e-10);
    }
}

#[test]
fn infinite_interval_gaussian() {
    let v = integrate(
        |x| (-0.5 * x * x).exp(),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &cfg(),
    )
    .unwrap();
    assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
}

#[test]
fn unbracketed_root_is_an_error() {
    assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
}
