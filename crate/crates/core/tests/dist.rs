use infodisp::dist::{
    expect, make_density, sample, sample_stream, swap_transform, Catalog, DensityRef, GmmSpec,
};
use infodisp::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn catalog() -> impl Strategy<Value = Catalog> {
    prop_oneof![
        (-3.0f64..3.0, 0.2f64..4.0).prop_map(|(mu, sigma)| Catalog::Normal { mu, sigma }),
        (0.2f64..4.0).prop_map(|b| Catalog::Laplace { b }),
        (-1.0f64..1.0, 0.2f64..1.0).prop_map(|(mu, sigma)| Catalog::LogNormal { mu, sigma }),
        (-3.0f64..3.0, 0.1f64..5.0).prop_map(|(a, w)| Catalog::Uniform { a, b: a + w }),
        (
            -2.0f64..2.0,
            -2.0f64..6.0,
            0.3f64..2.0,
            0.3f64..2.0,
            0.0f64..1.0
        )
            .prop_map(|(mu1, mu2, sigma1, sigma2, w)| Catalog::Gmm(GmmSpec {
                mu1,
                mu2,
                sigma1,
                sigma2,
                w
            })),
        (0.2f64..5.0).prop_map(|rate| Catalog::Exponential { rate }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_match_quadrature(c in catalog()) {
        let d = c.into_ref().unwrap();
        let cfg = QuadratureConfig::default();
        let mass = expect(d.as_ref(), |_| 1.0, &cfg).unwrap();
        let mean = expect(d.as_ref(), |x| x, &cfg).unwrap();
        let var = expect(d.as_ref(), |x| (x - d.mean()).powi(2), &cfg).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-8, "{c}: mass {mass}");
        prop_assert!((mean - d.mean()).abs() < 1e-6, "{c}: mean {mean}");
        prop_assert!((var - d.variance()).abs() < 1e-6 * d.variance().max(1.0), "{c}: var {var}");
    }

    #[test]
    fn cdf_inverts_quantile(c in catalog(), u in 0.01f64..0.99) {
        let d = c.into_ref().unwrap();
        prop_assert!((d.cdf(d.quantile(u)) - u).abs() < 1e-8, "{c} at {u}");
    }

    #[test]
    fn spec_strings_round_trip(c in catalog()) {
        let back: Catalog = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn swap_moves_density_between_intervals(
        family in 0usize..2,
        a in -2.5f64..0.0,
        gap in 0.0f64..2.0,
        delta in 0.05f64..1.0,
    ) {
        let base: DensityRef = make_density(["norm:0,1", "laplace:1"][family]).unwrap();
        let b = a + delta + gap;
        let s = swap_transform(base.clone(), a, b, delta).unwrap();
        let cfg = QuadratureConfig::default();
        let mass = expect(s.as_ref(), |_| 1.0, &cfg).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-8);
        for i in 0..200 {
            let x = -4.0 + 8.0 * (i as f64 + 0.5) / 200.0;
            let src = if (a..a + delta).contains(&x) {
                x + (b - a)
            } else if (b..b + delta).contains(&x) {
                x - (b - a)
            } else {
                x
            };
            prop_assert!((s.pdf(x) - base.pdf(src)).abs() < 1e-14);
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    let d = make_density("gmm:0,4,1,2,0.4").unwrap();
    let x = sample(d.as_ref(), 1000, 42);
    assert_eq!(x, sample(d.as_ref(), 1000, 42));
    assert_ne!(x, sample(d.as_ref(), 1000, 43));
    assert_ne!(x, sample_stream(d.as_ref(), 1000, 42, 1));
}

#[test]
fn bad_specs_name_the_token() {
    for (spec, token) in [("norm:0,x", "x"), ("cauchy:1", "cauchy")] {
        let e = make_density(spec).unwrap_err().to_string();
        assert!(e.contains(token), "{e}");
    }
    assert!(make_density("unif:1,0").is_err());
    assert!(make_density("laplace:-1").is_err());
    assert!(make_density("gmm:0,4,1,2,1.5").is_err());
}
