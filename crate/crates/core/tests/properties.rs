use proptest::prelude::*;

use reachbound::grassmann::{kato_unitary, projector_distance, projector_from_subspace, Subspace};
use reachbound::linalg::{
    haar_unitary, operator_norm, random_hermitian, random_skew_in_ball, rng_from_seed, spectral_width, unitarity_deviation,
};
use reachbound::metric::{brute_force_covering_number, brute_force_packing_number, FiniteMetricSpace};
use reachbound::unitary_nets::unitary_covering_bounds;
use reachbound::circuit::circuit_count_bound;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich_on_cycles(n in 3usize..12, eps in 0.5f64..4.0) {
        let s = FiniteMetricSpace::cycle(n).unwrap();
        let cover = brute_force_covering_number(&s, eps).unwrap();
        prop_assert!(brute_force_packing_number(&s, 2.0 * eps).unwrap() <= cover);
        prop_assert!(cover <= brute_force_packing_number(&s, eps).unwrap());
    }

    #[test]
    fn covering_monotone_in_eps(pts in prop::collection::vec(-5.0f64..5.0, 2..10), eps in 0.1f64..2.0) {
        let s = FiniteMetricSpace::from_points(&pts, |a, b| (a - b).abs()).unwrap();
        prop_assert!(brute_force_covering_number(&s, 2.0 * eps).unwrap() <= brute_force_covering_number(&s, eps).unwrap());
    }

    #[test]
    fn operator_norm_unitarily_invariant(seed in any::<u64>(), n in 2usize..5) {
        let h = random_hermitian(n, 1.7, &mut rng_from_seed(seed));
        let u = haar_unitary(n, seed ^ 1);
        let conj = u.matrix() * &h * u.dagger().matrix();
        prop_assert!((operator_norm(&conj).unwrap() - operator_norm(&h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn spectral_width_scales(seed in any::<u64>(), a in -3.0f64..3.0, shift in -2.0f64..2.0) {
        let h = random_hermitian(3, 1.0, &mut rng_from_seed(seed));
        let g = h.map(|z| z * a) + reachbound::linalg::identity(3).map(|z| z * shift);
        prop_assert!((spectral_width(&g).unwrap() - a.abs() * spectral_width(&h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn skew_exponential_is_unitary(seed in any::<u64>(), r in 0.0f64..6.0) {
        let x = random_skew_in_ball(3, r, seed).unwrap();
        prop_assert!(x.norm() <= r + 1e-12);
        prop_assert!(unitarity_deviation(x.exp().matrix()) < 1e-12);
    }

    #[test]
    fn kato_moves_p_to_q(seed in any::<u64>(), r in 0.01f64..0.4) {
        let p = projector_from_subspace(&Subspace::random(4, 2, &mut rng_from_seed(seed)).unwrap()).unwrap();
        let w = random_skew_in_ball(4, r, seed ^ 7).unwrap().exp();
        let q = p.conjugated(&w).unwrap();
        prop_assume!(projector_distance(&p, &q).unwrap() < 0.7);
        let v = kato_unitary(&p, &q).unwrap();
        let moved = v.matrix() * p.matrix() * v.dagger().matrix();
        prop_assert!(reachbound::linalg::op_distance(&moved, q.matrix()) < 1e-9);
    }

    #[test]
    fn unitary_bounds_ordered(n in 1usize..6, eps in 1e-4f64..0.1) {
        let b = unitary_covering_bounds(n, eps).unwrap();
        if let (Some(lo), Some(hi)) = (b.lower, b.upper) {
            prop_assert!(lo <= hi);
        }
    }

    #[test]
    fn circuit_bound_monotone(ng in 10usize..500, extra in 1usize..50) {
        let a = circuit_count_bound(2, 2, 8, ng, 1e-3).unwrap().ln_value;
        let b = circuit_count_bound(2, 2, 8, ng + extra, 1e-3).unwrap().ln_value;
        prop_assert!(a < b);
    }
}
