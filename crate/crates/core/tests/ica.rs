use infodisp::dist::{make_density, DensityRef};
use infodisp::ica::{
    amari_index, covariance, fixed_point_pursuit, projection_bound_check, random_unit_vector,
    simulate_mixture, whiten, DataMatrix, Mixing, ProjectionIndex, PursuitConfig,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn srcs(specs: &[&str]) -> Vec<DensityRef> {
    specs.iter().map(|s| make_density(s).unwrap()).collect()
}

fn index() -> impl Strategy<Value = ProjectionIndex> {
    prop::sample::select(ProjectionIndex::ALL.to_vec())
}

/// `‖T - T_fd‖∞ / ‖T‖∞` with central differences of step `h`.
fn gradient_error(idx: ProjectionIndex, z: &DMatrix<f64>, v: &DVector<f64>, h: f64) -> f64 {
    let g = idx.gradient(z, v);
    let fd = DVector::from_fn(v.len(), |i, _| {
        let mut vp = v.clone();
        let mut vm = v.clone();
        vp[i] += h;
        vm[i] -= h;
        (idx.objective(z, &vp) - idx.objective(z, &vm)) / (2.0 * h)
    });
    (g - &fd).amax() / fd.amax()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn analytic_gradients_match_differences(idx in index(), seed in 0u64..1000) {
        let sim = simulate_mixture(&srcs(&["exp:1", "unif:0,1", "laplace:1"]), Mixing::Random, 10_000, seed).unwrap();
        let z = whiten(&sim.x).unwrap().z;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_unit_vector(&mut rng, 3);
        let err = gradient_error(idx, &z, &v, 1e-5);
        prop_assert!(err <= 1e-4, "{idx}: {err}");
    }

    #[test]
    fn pursuit_returns_orthonormal_directions(idx in index(), seed in 0u64..1000, q in 1usize..=3) {
        let sim = simulate_mixture(&srcs(&["exp:1", "unif:0,1", "laplace:1"]), Mixing::Random, 3000, seed).unwrap();
        let wr = whiten(&sim.x).unwrap();
        let cfg = PursuitConfig { index: idx, q: Some(q), seed, ..PursuitConfig::default() };
        let res = fixed_point_pursuit(&wr, &cfg).unwrap();
        let v1 = res.v1_matrix();
        prop_assert!((v1.transpose() * &v1 - DMatrix::identity(q, q)).norm() < 1e-10);
        prop_assert_eq!(res.unmixing.len(), q);
        prop_assert_eq!(res.component_index_values.len(), q);
    }

    #[test]
    fn whitening_gives_identity_covariance(seed in 0u64..10_000, p in 2usize..6, n in 50usize..3000) {
        let all = ["exp:1", "unif:0,1", "laplace:1", "gmm:0,4,1,2,0.4", "lognorm:0,0.5", "norm"];
        let sim = simulate_mixture(&srcs(&all[..p]), Mixing::Random, n, seed).unwrap();
        let z = whiten(&sim.x).unwrap().z;
        prop_assert!((covariance(&z) - DMatrix::identity(p, p)).norm() < 1e-8);
    }

    #[test]
    fn amari_ignores_order_sign_and_scale(seed in any::<u64>(), p in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(p, p, |_, _| rng.random::<f64>() - 0.5);
        prop_assume!(a.determinant().abs() > 1e-3);
        let mut perm: Vec<usize> = (0..p).collect();
        perm.shuffle(&mut rng);
        let pd = DMatrix::from_fn(p, p, |i, j| if perm[i] == j { (i as f64 + 0.5) * if i % 2 == 0 { 1.0 } else { -1.0 } } else { 0.0 });
        prop_assert!(amari_index(&(&pd * &a), &a).unwrap() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn whitening_absorbs_affine_maps(seed in 0u64..1000, shift in -10.0f64..10.0) {
        let sim = simulate_mixture(&srcs(&["unif:0,1", "laplace:1"]), Mixing::Random, 20_000, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let b = loop {
            let b = DMatrix::from_fn(2, 2, |_, _| 4.0 * rng.random::<f64>() - 2.0);
            if b.determinant().abs() > 0.1 {
                break b;
            }
        };
        let xb = sim.x.values() * b.transpose() + DMatrix::from_element(sim.x.n(), 2, shift);
        let xb = DataMatrix::new(xb).unwrap();
        let cfg = PursuitConfig { seed, ..PursuitConfig::default() };
        let r1 = fixed_point_pursuit(&whiten(&sim.x).unwrap(), &cfg).unwrap();
        let r2 = fixed_point_pursuit(&whiten(&xb).unwrap(), &cfg).unwrap();
        let a = amari_index(&r1.unmixing_matrix(), &(r2.unmixing_matrix() * &b)).unwrap();
        prop_assert!(a <= 0.05, "amari {a}");
    }
}

#[test]
fn axis_projections_reproduce_component_values() {
    let r = projection_bound_check(
        &srcs(&["unif:0,1", "laplace:1"]),
        ProjectionIndex::Kappa4Sq,
        20_000,
        50,
        1,
    )
    .unwrap();
    assert_eq!(r.axis_values, r.component_values);
    assert!(r.holds, "{r:?}");
    assert!(projection_bound_check(
        &srcs(&["unif:0,1", "laplace:1"]),
        ProjectionIndex::Sibson,
        1000,
        5,
        1
    )
    .is_err());
}

#[test]
fn gaussian_data_has_no_distinguished_direction() {
    for seed in 0..5 {
        let sim =
            simulate_mixture(&srcs(&["norm", "norm"]), Mixing::Random, 100_000, seed).unwrap();
        let res = fixed_point_pursuit(
            &whiten(&sim.x).unwrap(),
            &PursuitConfig {
                seed,
                ..PursuitConfig::default()
            },
        )
        .unwrap();
        for (v, c) in res.component_index_values.iter().zip(&res.converged) {
            assert!(!c || *v <= 0.02, "seed {seed}: {res:?}");
        }
    }
}

#[test]
fn identity_mixing_keeps_sources() {
    let sim = simulate_mixture(
        &srcs(&["unif:0,1", "exp:1"]),
        Mixing::Given(DMatrix::identity(2, 2)),
        500,
        3,
    )
    .unwrap();
    assert_eq!(sim.x, sim.s);
    assert!(simulate_mixture(
        &srcs(&["unif:0,1", "exp:1"]),
        Mixing::Given(DMatrix::zeros(2, 2)),
        500,
        3
    )
    .is_err());
    assert!(simulate_mixture(&srcs(&["unif:0,1"]), Mixing::Random, 500, 3).is_err());
}
