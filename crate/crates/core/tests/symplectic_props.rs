mod common;

use canonpos_core::forms::QuadraticWeight;
use canonpos_core::linalg::{self, CVec};
use canonpos_core::symplectic::{
    cayley_map, cayley_phase, generating_function, hermitian_b, involution_of,
    map_from_generating_function, push_weight, reduce_to_model, SymplecticContext,
};
use proptest::prelude::*;

fn cvec(rng: &mut impl rand::Rng, m: usize) -> CVec {
    CVec::from_fn(m, |_, _| common::cnum(rng, 1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_squares_to_identity_and_fixes_lambda(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let phi = common::weight(&mut rng, n);
        let iota = involution_of(&phi).unwrap();
        prop_assert!(iota.involution_defect() < 1e-10);
        for _ in 0..20 {
            let x = cvec(&mut rng, n);
            let p = phi.graph_point(&x);
            prop_assert!((iota.apply(&p) - &p).norm() < 1e-10 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn hermitian_form_is_hermitian(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let b = hermitian_b(&common::weight(&mut rng, n)).unwrap();
        let m = b.matrix();
        prop_assert_eq!(m, &m.adjoint());
        for _ in 0..10 {
            let mu = cvec(&mut rng, 2 * n);
            prop_assert!(b.value(&mu, &mu).im.abs() < 1e-12 * (1.0 + mu.norm_squared() * linalg::norm2(m)));
        }
    }

    #[test]
    fn push_weight_is_functorial(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let m1 = common::random_map(&mut rng, n, 0.4);
        let m2 = common::random_map(&mut rng, n, 0.4);
        let phi = common::weight(&mut rng, n);
        let inner = push_weight(&m1, &phi);
        let joint = push_weight(&m2.compose(&m1), &phi);
        prop_assume!(inner.is_ok() && joint.is_ok());
        // Near a non-transversal fiber the intermediate weight blows up and
        // the absolute bound is meaningless.
        prop_assume!(inner.as_ref().unwrap().norm() < 1e3);
        let nested = push_weight(&m2, &inner.unwrap());
        prop_assume!(nested.is_ok());
        prop_assert!(nested.unwrap().distance(&joint.unwrap()) < 1e-9);
    }

    #[test]
    fn gamma_conjugates_sigma(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let ctx = SymplecticContext::new(n);
        for _ in 0..100 {
            let t = cvec(&mut rng, 2 * n);
            let s = cvec(&mut rng, 2 * n);
            let lhs = ctx.sigma(&ctx.gamma(&t), &ctx.gamma(&s));
            prop_assert!((lhs + ctx.sigma(&t, &s).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn cayley_round_trips(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let f = common::random_form(&mut rng, 2 * n, 0.6);
        let k = cayley_map(&f);
        prop_assume!(k.is_ok());
        let k = k.unwrap();
        let back = cayley_phase(&k).unwrap();
        prop_assert!(back.distance(&f) < 1e-10);
        prop_assert!(cayley_map(&back).unwrap().distance(&k) < 1e-10);
        prop_assert!(k.symplectic_residual() < 1e-10);
    }

    #[test]
    fn generating_function_relation(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = common::rng(seed);
        let m = common::random_map(&mut rng, n, 0.5);
        let phi = generating_function(&m);
        prop_assume!(phi.is_ok());
        let phi = phi.unwrap();
        // κ(φ'_η, η) = (x, φ'_x)
        for _ in 0..5 {
            let x = cvec(&mut rng, n);
            let eta = cvec(&mut rng, n);
            let z = CVec::from_iterator(2 * n, x.iter().chain(eta.iter()).copied());
            let g = phi.gradient(&z);
            let src = CVec::from_iterator(2 * n, g.rows(n, n).iter().chain(eta.iter()).copied());
            let dst = CVec::from_iterator(2 * n, x.iter().chain(g.rows(0, n).iter()).copied());
            prop_assert!((m.apply(&src) - &dst).norm() < 1e-10 * (1.0 + dst.norm()));
        }
        prop_assert!(map_from_generating_function(&phi).unwrap().distance(&m) < 1e-10);
    }

    #[test]
    fn model_reduction(seed in any::<u64>(), n in 1usize..4) {
        let phi = common::weight(&mut common::rng(seed), n);
        let red = reduce_to_model(&phi).unwrap();
        let pushed = push_weight(&red.map, &phi).unwrap();
        prop_assert!(pushed.distance(&QuadraticWeight::model(n)) < 1e-9);
    }
}
