use kmap_core::poly::{parse_poly, poly_gcd, Monomial, MultiPoly, Rational, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring() -> Ring<Rational> {
    Ring::projective()
}

fn poly(terms: Vec<([u32; 3], i64, i64)>) -> MultiPoly<Rational> {
    let r = ring();
    MultiPoly::from_terms(
        &r,
        terms
            .into_iter()
            .map(|(e, n, d)| (Monomial::from_exponents(&e), Rational::new(BigInt::from(n), BigInt::from(d)))),
    )
}

fn arb_poly(max_terms: usize) -> impl Strategy<Value = MultiPoly<Rational>> {
    prop::collection::vec(([0u32..4, 0u32..4, 0u32..4], -6i64..=6, 1i64..=4), 0..=max_terms).prop_map(poly)
}

fn arb_nonzero(max_terms: usize) -> impl Strategy<Value = MultiPoly<Rational>> {
    arb_poly(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_round_trips(p in arb_poly(5)) {
        prop_assert_eq!(parse_poly(&p.to_string(), &ring()).unwrap(), p);
    }

    #[test]
    fn ring_axioms(a in arb_poly(4), b in arb_poly(4), c in arb_poly(4)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in arb_poly(4), b in arb_nonzero(3)) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_contains_the_common_factor(a in arb_nonzero(3), b in arb_nonzero(3), c in arb_nonzero(3)) {
        let g = poly_gcd(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert!(g.div_exact(&c).is_some(), "gcd {} misses {}", g, c);
        prop_assert!((&a * &c).div_exact(&g).is_some());
        prop_assert!((&b * &c).div_exact(&g).is_some());
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(a in arb_poly(4), b in arb_poly(4)) {
        let p = 1_000_000_007;
        let lhs = (&a * &b).to_prime_field(p).unwrap();
        let rhs = &a.to_prime_field(p).unwrap() * &b.to_prime_field(p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
