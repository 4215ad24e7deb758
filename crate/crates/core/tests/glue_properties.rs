use mwglue::arith::rat;
use mwglue::family::e_p_roots;
use mwglue::fixtures;
use mwglue::glue::{interpolate, verify_cover_map, GluingData, RationalFunction};
use mwglue::{RatPoly, Rational};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = RatPoly> {
    prop::collection::vec((-40i64..40, 1i64..6), 0..5)
        .prop_map(|cs| RatPoly::new(cs.into_iter().map(|(n, d)| rat(n) / rat(d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cyclic_map_and_inverse_compose_to_identity(a in arb_poly()) {
        let g = fixtures::cyclic_gluing();
        // beta = -1/alpha, so the inverse identification is alpha = -1/beta
        let h_inv = -&RatPoly::x().inverse_mod(g.l_prime.f()).unwrap();
        let x = g.l.element(&a);
        let there = g.l_prime.map_from(&g.l, &h_inv, &x).unwrap();
        let back = g.l.map_from(&g.l_prime, g.psi.h(), &there).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn split_map_and_inverse_compose_to_identity(a in arb_poly(), p in prop::sample::select(vec![3u64, 11, 229])) {
        let f_roots = [rat(-1), rat(0), rat(1)];
        let g = GluingData::split_matching(e_p_roots(p), f_roots.clone()).unwrap();
        let h_inv = interpolate(&f_roots, &e_p_roots(p));
        let x = g.l.element(&a);
        let there = g.l_prime.map_from(&g.l, &h_inv, &x).unwrap();
        let back = g.l.map_from(&g.l_prime, g.psi.h(), &there).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn cover_check_ignores_sign_of_v(sign in prop::bool::ANY) {
        let c = fixtures::cyclic_genus_two();
        for (target, map) in [(fixtures::cyclic_e(), fixtures::cover_to_e()), (fixtures::cyclic_f(), fixtures::cover_to_f())] {
            let s: Rational = if sign { rat(-1) } else { rat(1) };
            let v = RationalFunction::new(map.v.num.scale(&s), map.v.den.clone()).unwrap();
            prop_assert!(verify_cover_map(&c, &target, &map.u, &v));
        }
    }
}
